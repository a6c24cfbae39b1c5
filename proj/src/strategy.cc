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

#include "fplab/strategy.h"

#include <algorithm>
#include <cmath>

namespace fplab {

namespace {

void CheckInfoset(const GameTree& game, int infoset) {
  if (infoset < 0 || infoset >= game.num_infosets()) {
    throw GameError(ErrorCode::kUnknownInfoset,
                    "infoset index " + std::to_string(infoset));
  }
}

void CheckMove(const GameTree& game, int infoset, int move) {
  CheckInfoset(game, infoset);
  if (move < 0 || move >= game.num_moves(infoset)) {
    throw GameError(ErrorCode::kUnknownMove,
                    "move index " + std::to_string(move) + " at " +
                        game.infoset(infoset).id);
  }
}

void CheckTerminal(const GameTree& game, int node) {
  if (node < 0 || node >= static_cast<int>(game.nodes().size()) ||
      !game.is_terminal(node)) {
    throw GameError(ErrorCode::kUnknownTerminal,
                    "node index " + std::to_string(node) +
                        " is not a terminal");
  }
}

}  // namespace

BehaviorProfile UniformProfile(const GameTree& game) {
  BehaviorProfile f;
  for (const Infoset& h : game.infosets()) {
    const double p = 1.0 / static_cast<double>(h.moves.size());
    f.probs.emplace_back(h.moves.size(), p);
  }
  return f;
}

BehaviorProfile PureProfile(const GameTree& game,
                            const std::vector<int>& moves) {
  if (static_cast<int>(moves.size()) != game.num_infosets()) {
    throw GameError(ErrorCode::kBadProfile,
                    "pure profile needs one move per infoset");
  }
  BehaviorProfile f;
  for (int h = 0; h < game.num_infosets(); ++h) {
    CheckMove(game, h, moves[h]);
    f.probs.emplace_back(game.num_moves(h), 0.0);
    f.probs.back()[moves[h]] = 1.0;
  }
  return f;
}

BehaviorProfile ProfileFromMap(
    const GameTree& game,
    const std::map<std::string, std::vector<double>>& dists) {
  BehaviorProfile f;
  f.probs.resize(game.num_infosets());
  for (const auto& [id, dist] : dists) {
    f.probs[game.InfosetIndex(id)] = dist;
  }
  CheckProfile(game, f);
  return f;
}

void CheckProfile(const GameTree& game, const BehaviorProfile& f) {
  if (static_cast<int>(f.probs.size()) != game.num_infosets()) {
    throw GameError(ErrorCode::kBadProfile,
                    "profile domain does not match the game's infosets");
  }
  for (int h = 0; h < game.num_infosets(); ++h) {
    const std::vector<double>& dist = f.probs[h];
    const std::string& id = game.infoset(h).id;
    if (static_cast<int>(dist.size()) != game.num_moves(h)) {
      throw GameError(ErrorCode::kBadProfile,
                      "distribution at " + id + " has the wrong length");
    }
    double sum = 0.0;
    for (double p : dist) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw GameError(ErrorCode::kBadProfile,
                        "probability outside [0,1] at " + id);
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw GameError(ErrorCode::kBadProfile,
                      "distribution at " + id + " does not sum to 1");
    }
  }
}

ProfileEvaluation Evaluate(const GameTree& game, const BehaviorProfile& f) {
  const int players = game.num_players();
  ProfileEvaluation eval;
  eval.players = players;
  eval.reach.assign(game.nodes().size(), 0.0);
  eval.value.assign(game.nodes().size() * players, 0.0);
  const std::vector<int>& order = game.preorder();
  eval.reach[game.root()] = 1.0;
  for (int n : order) {
    const Node& node = game.node(n);
    if (node.kind == NodeKind::kTerminal) continue;
    const std::vector<double>& dist = f[node.infoset];
    for (size_t a = 0; a < node.children.size(); ++a) {
      eval.reach[node.children[a]] = eval.reach[n] * dist[a];
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int n = *it;
    const Node& node = game.node(n);
    double* out = &eval.value[n * players];
    if (node.kind == NodeKind::kTerminal) {
      std::span<const double> u = game.payoffs(n);
      std::copy(u.begin(), u.end(), out);
      continue;
    }
    const std::vector<double>& dist = f[node.infoset];
    for (size_t a = 0; a < node.children.size(); ++a) {
      const double* child = &eval.value[node.children[a] * players];
      for (int i = 0; i < players; ++i) out[i] += dist[a] * child[i];
    }
  }
  return eval;
}

double ReachProbability(const GameTree& game, const BehaviorProfile& f,
                        int node) {
  if (node < 0 || node >= static_cast<int>(game.nodes().size())) {
    throw GameError(ErrorCode::kUnknownNode,
                    "node index " + std::to_string(node));
  }
  double p = 1.0;
  for (const PathStep& step : game.path(node)) p *= f[step.infoset][step.move];
  return p;
}

double ReachProbabilityInfoset(const GameTree& game, const BehaviorProfile& f,
                               int infoset) {
  CheckInfoset(game, infoset);
  double p = 0.0;
  for (int n : game.infoset(infoset).nodes) p += ReachProbability(game, f, n);
  return p;
}

double ExpectedPayoff(const GameTree& game, const BehaviorProfile& f,
                      int player) {
  if (player < 0 || player >= game.num_players()) {
    throw GameError(ErrorCode::kUnknownPlayer,
                    "player index " + std::to_string(player));
  }
  return Evaluate(game, f).Value(game.root(), player);
}

std::vector<double> LocalGains(const GameTree& game,
                               const ProfileEvaluation& eval, int infoset) {
  CheckInfoset(game, infoset);
  const Infoset& h = game.infoset(infoset);
  std::vector<double> gains(h.moves.size(), 0.0);
  for (int n : h.nodes) {
    const double reach = eval.reach[n];
    if (reach == 0.0) continue;
    const double here = eval.Value(n, h.player);
    const Node& node = game.node(n);
    for (size_t a = 0; a < gains.size(); ++a) {
      gains[a] += reach * (eval.Value(node.children[a], h.player) - here);
    }
  }
  return gains;
}

double LocalPayoff(const GameTree& game, const BehaviorProfile& f, int infoset,
                   int move) {
  CheckMove(game, infoset, move);
  const ProfileEvaluation eval = Evaluate(game, f);
  const int owner = game.infoset(infoset).player;
  return eval.Value(game.root(), owner) +
         LocalGains(game, eval, infoset)[move];
}

double OptimalityGap(const GameTree& game, const BehaviorProfile& f,
                     int infoset) {
  CheckInfoset(game, infoset);
  const std::vector<double> gains = LocalGains(game, Evaluate(game, f), infoset);
  return std::max(0.0, *std::max_element(gains.begin(), gains.end()));
}

std::vector<double> AllOptimalityGaps(const GameTree& game,
                                      const ProfileEvaluation& eval) {
  std::vector<double> gaps(game.num_infosets(), 0.0);
  for (int h = 0; h < game.num_infosets(); ++h) {
    const std::vector<double> gains = LocalGains(game, eval, h);
    gaps[h] = std::max(0.0, *std::max_element(gains.begin(), gains.end()));
  }
  return gaps;
}

std::vector<double> AllOptimalityGaps(const GameTree& game,
                                      const BehaviorProfile& f) {
  return AllOptimalityGaps(game, Evaluate(game, f));
}

std::vector<int> BestReplies(const GameTree& game,
                             const ProfileEvaluation& eval, int infoset,
                             double tol) {
  const std::vector<double> gains = LocalGains(game, eval, infoset);
  const double best = *std::max_element(gains.begin(), gains.end());
  std::vector<int> replies;
  for (size_t a = 0; a < gains.size(); ++a) {
    if (gains[a] >= best - tol) replies.push_back(static_cast<int>(a));
  }
  return replies;
}

std::vector<int> BestReplies(const GameTree& game, const BehaviorProfile& f,
                             int infoset, double tol) {
  return BestReplies(game, Evaluate(game, f), infoset, tol);
}

BehaviorProfile ReplaceAlongPath(const GameTree& game,
                                 const BehaviorProfile& f, int terminal) {
  CheckTerminal(game, terminal);
  BehaviorProfile out = f;
  for (const PathStep& step : game.path(terminal)) {
    std::fill(out[step.infoset].begin(), out[step.infoset].end(), 0.0);
    out[step.infoset][step.move] = 1.0;
  }
  return out;
}

EquilibriumCheck IsEquilibrium(const GameTree& game, const BehaviorProfile& f,
                               double eps) {
  const ProfileEvaluation eval = Evaluate(game, f);
  EquilibriumCheck check;
  for (int h = 0; h < game.num_infosets(); ++h) {
    const std::vector<double> gains = LocalGains(game, eval, h);
    auto best = std::max_element(gains.begin(), gains.end());
    if (*best > eps) {
      check.is_equilibrium = false;
      check.witness = EquilibriumWitness{
          h, static_cast<int>(best - gains.begin()), *best};
      break;
    }
  }
  return check;
}

}  // namespace fplab
