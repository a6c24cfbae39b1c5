// Copyright 2026 The fplab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fplab/game_format.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "malformed_cases.h"
#include "test_games.h"

namespace fplab {
namespace {

TEST_CASE("coord text parses into the expected declarations") {
  const ParseResult r = Parse(testing::kCoordText);
  REQUIRE(r.ok());
  CHECK(r.spec.players == 2);
  CHECK(r.spec.infosets.size() == 2);
  CHECK(r.spec.nodes.size() == 3);
  CHECK(r.spec.terminals.size() == 4);
  CHECK(r.spec.edges.size() == 6);
}

TEST_CASE("coord serializes back to the same bytes") {
  CHECK(Serialize(testing::Coord()) == testing::kCoordText);
  CHECK(testing::ReadGameText("coord") == testing::kCoordText);
}

TEST_CASE("every corpus file is stored canonically") {
  for (const std::string& name : testing::CorpusNames()) {
    CAPTURE(name);
    const std::string text = testing::ReadGameText(name);
    const GameTree g = LoadGame(text);
    CHECK(Serialize(g) == text);
    CHECK(LoadGame(Serialize(g)) == g);
  }
}

TEST_CASE("serialization canonicalizes declaration order and spacing") {
  const char* messy =
      "# coordination, scrambled\n"
      "terminal zBb payoffs   2\n"
      "edge r B nB\n"
      "players 2\n"
      "node r infoset h1   # the root\n"
      "edge nB b zBb\n"
      "infoset h2 player 2 moves a b\n"
      "edge nA a zAa\n"
      "node nB infoset h2\n"
      "edge nB a zBa\n"
      "terminal zAa payoffs 3.0\n"
      "edge nA b zAb\n"
      "infoset h1 player 1 moves A B\n"
      "node nA infoset h2\n"
      "edge r A nA\n"
      "terminal zBa payoffs 1 1\n"
      "terminal zAb payoffs 0\n";
  const std::string once = Serialize(LoadGame(messy));
  CHECK(once == testing::kCoordText);
  CHECK(Serialize(LoadGame(once)) == once);
}

TEST_CASE("payoffs round-trip exactly through shortest decimals") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (double u : {0.1, 1.0 / 3.0, -2.5e-300, 1e300, 0.0, -0.0}) {
    const std::string s = FormatDouble(u);
    CHECK(std::stod(s) == u);
  }
  for (int k = 0; k < 1000; ++k) {
    const double u = dist(rng);
    CHECK(std::stod(FormatDouble(u)) == u);
  }
  const GameTree g = testing::CoordWithPayoffs(0.1, 0.2, 0.30000000000000004, 7);
  const GameTree back = LoadGame(Serialize(g));
  CHECK(back == g);
  CHECK(back.payoff(back.TerminalIndex("zAa"), 0) == 0.1);
}

TEST_CASE("general-sum payoffs keep one value per player") {
  const GameTree g = testing::LoadCorpusGame("entry_game");
  CHECK_FALSE(g.identical_interest());
  CHECK(g.payoff(g.TerminalIndex("zOut"), 0) == 0.0);
  CHECK(g.payoff(g.TerminalIndex("zOut"), 1) == 2.0);
}

TEST_CASE("malformed inputs yield the expected diagnostic") {
  for (const testing::MalformedCase& c : testing::MalformedCases()) {
    const std::string name = c.name;
    CAPTURE(name);
    const ParseResult r = Parse(c.text);
    REQUIRE_FALSE(r.ok());
    const bool found = std::any_of(
        r.diagnostics.begin(), r.diagnostics.end(), [&](const Diagnostic& d) {
          return d.code == c.code && d.line == c.line && d.column == c.column;
        });
    CHECK(found);
  }
}

TEST_CASE("parsing collects every diagnostic in line order") {
  const char* text =
      "players x\n"
      "bogus\n"
      "infoset h player 1 moves a a\n"
      "terminal z payoffs nan\n";
  const ParseResult r = Parse(text);
  REQUIRE(r.diagnostics.size() == 5);  // plus the missing players line
  CHECK(r.diagnostics[0].line == 1);
  CHECK(r.diagnostics[0].column == 1);
  CHECK(r.diagnostics[0].code == DiagnosticCode::kSyntax);
  CHECK(r.diagnostics[1].line == 1);
  CHECK(r.diagnostics[1].column == 9);
  CHECK(r.diagnostics[1].code == DiagnosticCode::kBadNumber);
  CHECK(r.diagnostics[2].code == DiagnosticCode::kUnknownSection);
  CHECK(r.diagnostics[3].code == DiagnosticCode::kDuplicateId);
  CHECK(r.diagnostics[4].line == 4);
  CHECK(r.diagnostics[4].code == DiagnosticCode::kBadNumber);
}

TEST_CASE("LoadGame reports parse and semantic failures as invalid games") {
  try {
    LoadGame("players 1\n");
    FAIL("expected an exception");
  } catch (const GameError& e) {
    CHECK(e.code() == ErrorCode::kInvalidGame);
  }
  CHECK_THROWS_AS(LoadGame("players\n"), GameError);
  CHECK_THROWS_AS(LoadGameFile("/nonexistent/path.game"), std::runtime_error);
}

}  // namespace
}  // namespace fplab
