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

#ifndef FPLAB_STRATEGY_H_
#define FPLAB_STRATEGY_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fplab/game.h"

namespace fplab {

inline constexpr double kBestReplyTolerance = 1e-9;
// Gaps in [-kGapClampTolerance, 0] are rounding noise and reported as 0.
inline constexpr double kGapClampTolerance = 1e-12;

// Behavior strategy for every information set: probs[h][a] = f(a|h), with h
// and a indexed as in the GameTree.
struct BehaviorProfile {
  std::vector<std::vector<double>> probs;

  std::vector<double>& operator[](int h) { return probs[h]; }
  const std::vector<double>& operator[](int h) const { return probs[h]; }
  bool operator==(const BehaviorProfile&) const = default;
};

BehaviorProfile UniformProfile(const GameTree& game);
// One move index per infoset.
BehaviorProfile PureProfile(const GameTree& game,
                            const std::vector<int>& moves);
// From id-keyed distributions; every infoset must be present.
BehaviorProfile ProfileFromMap(
    const GameTree& game,
    const std::map<std::string, std::vector<double>>& dists);

// Throws GameError(kBadProfile) unless the domain matches the game and each
// distribution is nonnegative and sums to 1 within 1e-12 per entry count.
void CheckProfile(const GameTree& game, const BehaviorProfile& f);

// Reach probabilities of every node and the expected payoff of the subtree
// below every node, for every player. One pass over the tree each.
struct ProfileEvaluation {
  std::vector<double> reach;
  std::vector<double> value;  // value[node * players + player]
  int players = 0;

  double Value(int node, int player) const {
    return value[node * players + player];
  }
};

ProfileEvaluation Evaluate(const GameTree& game, const BehaviorProfile& f);

double ReachProbability(const GameTree& game, const BehaviorProfile& f,
                        int node);
double ReachProbabilityInfoset(const GameTree& game, const BehaviorProfile& f,
                               int infoset);
double ExpectedPayoff(const GameTree& game, const BehaviorProfile& f,
                      int player);

// Expected payoff to the owner of `infoset` when f(.|infoset) is replaced by
// the vertex on `move`.
double LocalPayoff(const GameTree& game, const BehaviorProfile& f, int infoset,
                   int move);

// Owner's gain from each move relative to f, restricted to the terminals
// below the infoset: result[a] = u(a, f^{-h}) - u(f).
std::vector<double> LocalGains(const GameTree& game,
                               const ProfileEvaluation& eval, int infoset);

double OptimalityGap(const GameTree& game, const BehaviorProfile& f,
                     int infoset);
// Gap at every infoset from a single evaluation.
std::vector<double> AllOptimalityGaps(const GameTree& game,
                                      const BehaviorProfile& f);
std::vector<double> AllOptimalityGaps(const GameTree& game,
                                      const ProfileEvaluation& eval);

// Moves whose local payoff is within tol of the best. Never empty.
std::vector<int> BestReplies(const GameTree& game, const BehaviorProfile& f,
                             int infoset, double tol = kBestReplyTolerance);
std::vector<int> BestReplies(const GameTree& game,
                             const ProfileEvaluation& eval, int infoset,
                             double tol = kBestReplyTolerance);

// f with every (h, a) on the root path to `terminal` set to its vertex.
BehaviorProfile ReplaceAlongPath(const GameTree& game,
                                 const BehaviorProfile& f, int terminal);

struct EquilibriumWitness {
  int infoset = -1;
  int move = -1;
  double gain = 0.0;
};

struct EquilibriumCheck {
  bool is_equilibrium = true;
  // First infoset (in id order) whose gap exceeds eps, with its best move.
  std::optional<EquilibriumWitness> witness;
};

EquilibriumCheck IsEquilibrium(const GameTree& game, const BehaviorProfile& f,
                               double eps = kBestReplyTolerance);

}  // namespace fplab

#endif  // FPLAB_STRATEGY_H_
