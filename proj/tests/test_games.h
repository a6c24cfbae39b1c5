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

#ifndef FPLAB_TESTS_TEST_GAMES_H_
#define FPLAB_TESTS_TEST_GAMES_H_

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fplab/game.h"
#include "fplab/game_format.h"
#include "fplab/strategy.h"

namespace fplab::testing {

inline constexpr const char* kCoordText =
    "players 2\n"
    "infoset h1 player 1 moves A B\n"
    "infoset h2 player 2 moves a b\n"
    "node nA infoset h2\n"
    "node nB infoset h2\n"
    "node r infoset h1\n"
    "edge nA a zAa\n"
    "edge nA b zAb\n"
    "edge nB a zBa\n"
    "edge nB b zBb\n"
    "edge r A nA\n"
    "edge r B nB\n"
    "terminal zAa payoffs 3\n"
    "terminal zAb payoffs 0\n"
    "terminal zBa payoffs 1\n"
    "terminal zBb payoffs 2\n";

inline const std::vector<std::string>& CorpusNames() {
  static const std::vector<std::string> names = {
      "coord",        "coord_extended",        "entry_game",
      "general_sum",  "perfect_info_chain",    "single_decision",
      "three_choice", "two_stage_simultaneous"};
  return names;
}

inline std::string GamePath(const std::string& name) {
  return std::string(FPLAB_GAMES_DIR) + "/" + name + ".game";
}

inline std::string ReadGameText(const std::string& name) {
  std::ifstream in(GamePath(name), std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline GameTree LoadCorpusGame(const std::string& name) {
  return LoadGameFile(GamePath(name));
}

inline GameTree Coord() { return LoadGame(kCoordText); }

// COORD with the four terminal payoffs replaced, in order zAa zAb zBa zBb.
inline GameTree CoordWithPayoffs(double aa, double ab, double ba, double bb) {
  GameSpec spec = Parse(kCoordText).spec;
  const double values[] = {aa, ab, ba, bb};
  for (int k = 0; k < 4; ++k) spec.terminals[k].payoffs = {values[k]};
  return GameTree::FromSpec(spec);
}

// Each distribution drawn uniformly from the simplex.
inline BehaviorProfile RandomProfile(const GameTree& game,
                                     std::mt19937_64& rng) {
  std::exponential_distribution<double> exp(1.0);
  BehaviorProfile f;
  for (int h = 0; h < game.num_infosets(); ++h) {
    std::vector<double> dist(game.num_moves(h));
    double sum = 0.0;
    for (double& p : dist) sum += (p = exp(rng));
    for (double& p : dist) p /= sum;
    f.probs.push_back(dist);
  }
  return f;
}

// Expected payoff by summing over terminals, without ProfileEvaluation.
inline double SumOverTerminals(const GameTree& game, const BehaviorProfile& f,
                               int player) {
  double total = 0.0;
  for (int z : game.terminals()) {
    double p = 1.0;
    for (const PathStep& s : game.path(z)) p *= f[s.infoset][s.move];
    total += p * game.payoff(z, player);
  }
  return total;
}

}  // namespace fplab::testing

#endif  // FPLAB_TESTS_TEST_GAMES_H_
