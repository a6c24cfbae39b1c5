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

#include "fplab/harness.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "test_games.h"

namespace fplab {
namespace {

RunConfig IfmConfig() {
  RunConfig c;
  c.game_path = testing::GamePath("coord");
  c.mode = Mode::kInertiaFadingMemory;
  c.rounds = 300;
  c.seed = 7;
  c.rho = 0.3;
  c.alpha = 0.5;
  c.tie_break = TieBreak::kUniformRandom;
  return c;
}

TEST_CASE("replication seeds") {
  // First output of splitmix64 from state 0.
  CHECK(ReplicationSeed(0, 1) == 0xE220A8397B1DCDAFull);
  CHECK(ReplicationSeed(0, 2) == 0x6E789E6AA1B965F4ull);
  CHECK(ReplicationSeed(5, 1) != ReplicationSeed(5, 2));
}

TEST_CASE("config errors") {
  RunConfig c;
  c.rho = 0.5;
  try {
    ValidateConfig(c);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "rho");
  }
  c = IfmConfig();
  c.rho.reset();
  CHECK_THROWS_AS(ValidateConfig(c), ConfigError);
  c = IfmConfig();
  c.alpha = 1.0;
  CHECK_THROWS_AS(ValidateConfig(c), ConfigError);
  c = IfmConfig();
  c.rounds = 0;
  CHECK_THROWS_AS(ValidateConfig(c), ConfigError);
  c = RunConfig{};
  c.annotate_events = true;
  CHECK_THROWS_AS(ValidateConfig(c), ConfigError);

  const GameTree g = testing::Coord();
  c = IfmConfig();
  c.alpha.reset();
  c.alpha_overrides = {{"h1", 0.5}};
  CHECK_THROWS_AS(InitialState(g, c), ConfigError);  // h2 has no alpha
  c.alpha_overrides["h2"] = 0.25;
  const LearnerState s = InitialState(g, c);
  CHECK(s.alpha == std::vector<double>{0.5, 0.25});
  c.alpha_overrides["h9"] = 0.25;
  CHECK_THROWS_AS(InitialState(g, c), ConfigError);
}

TEST_CASE("profile JSON") {
  const GameTree g = testing::Coord();
  const ProfileFile p = ParseProfileJson(
      g, R"({"profile": {"h1": [0.25, 0.75], "h2": [1, 0]},
             "moves": {"h1": "B"}, "terminal": "zBb"})");
  CHECK(p.profile[0] == std::vector<double>{0.25, 0.75});
  CHECK(p.moves == std::vector<int>{1, 0});
  CHECK(p.terminal == g.TerminalIndex("zBb"));
  CHECK_THROWS_AS(ParseProfileJson(g, "{"), GameError);
  CHECK_THROWS_AS(ParseProfileJson(g, R"({"profile": {"h1": [1, 0]}})"),
                  GameError);
  CHECK_THROWS_AS(
      ParseProfileJson(g, R"({"profile": {"h1": [0.5, 0.6], "h2": [1, 0]}})"),
      GameError);
}

TEST_CASE("init file") {
  const GameTree g = testing::Coord();
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "fplab_harness_init.json";
  {
    std::ofstream out(path);
    out << R"({"profile": {"h1": [0.1, 0.9], "h2": [0.1, 0.9]}, "moves": {"h1": "B", "h2": "b"}})";
  }
  RunConfig c = IfmConfig();
  c.init = path.string();
  const LearnerState s = InitialState(g, c);
  CHECK(s.frequencies[1] == std::vector<double>{0.1, 0.9});
  CHECK(s.last_moves == std::vector<int>{1, 1});
  std::filesystem::remove(path);
  CHECK_THROWS_AS(InitialState(g, c), std::runtime_error);
}

TEST_CASE("trace CSV") {
  const GameTree g = testing::Coord();
  RunConfig c = IfmConfig();
  c.rounds = 3;
  c.gap_every = 2;
  const ReplicationResult r = RunReplication(g, c, InitialState(g, c), 1);
  const std::string csv =
      TraceCsv(g, r.trace, {.max_gap = true, .event_flags = true,
                            .revisit_ratio = true});
  CHECK(csv.rfind("round,terminal,path,max_gap,event_flags,revisit_ratio\n",
                  0) == 0);
  CHECK(EncodePath(g, g.path(g.TerminalIndex("zBa"))) == "h1=B/h2=a");

  std::vector<TraceRecord> trace(2);
  for (int k = 0; k < 2; ++k) {
    trace[k].round = k + 1;
    trace[k].terminal = g.TerminalIndex("zAa");
    trace[k].path = g.path(trace[k].terminal);
  }
  trace[1].events = kRepeatEvent | kMaximalEvent;
  CHECK(TraceCsv(g, trace, {.event_flags = true, .revisit_ratio = true}) ==
        "round,terminal,path,event_flags,revisit_ratio\n"
        "1,zAa,h1=A/h2=a,,\n"
        "2,zAa,h1=A/h2=a,EM,h1=1/h2=1\n");
}

TEST_CASE("replications are deterministic and ordered") {
  const GameTree g = testing::Coord();
  RunConfig c = IfmConfig();
  c.replications = 6;
  c.threads = 3;
  c.annotate_events = true;
  const std::vector<ReplicationResult> a = RunReplications(g, c);
  c.threads = 1;
  const std::vector<ReplicationResult> b = RunReplications(g, c);
  REQUIRE(a.size() == 6);
  for (size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].replication == static_cast<int64_t>(k) + 1);
    CHECK(a[k].seed == ReplicationSeed(7, a[k].replication));
    CHECK(TraceCsv(g, a[k].trace, {.event_flags = true}) ==
          TraceCsv(g, b[k].trace, {.event_flags = true}));
  }
  const nlohmann::json sa = SummaryJson(g, c, a);
  for (const char* key :
       {"config", "replications", "absorbed_fraction", "absorbed_terminals",
        "absorption_round_quantiles", "final_max_gap_quantiles",
        "per_replication"}) {
    CHECK(sa.contains(key));
  }
  CHECK(sa.dump() == SummaryJson(g, c, b).dump());
  CHECK(sa["config"]["mode"] == "ifm");
}

TEST_CASE("absorption") {
  const GameTree g = testing::Coord();
  RunConfig c;
  c.rounds = 40;
  const ReplicationResult r = RunReplication(g, c, InitialState(g, c), 1);
  CHECK(r.absorbed);
  CHECK(r.absorption_round == 1);
  CHECK(r.final_terminal == g.TerminalIndex("zAa"));
  CHECK(r.final_max_gap == 0.0);
}

TEST_CASE("quantiles") {
  CHECK(Quantile({3, 1, 2}, 0.5) == 2.0);
  CHECK(Quantile({0, 10}, 0.1) == doctest::Approx(1.0));
  CHECK(Quantile({4}, 0.9) == 4.0);
}

}  // namespace
}  // namespace fplab
