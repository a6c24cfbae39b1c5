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

#include "fplab/oracle.h"

#include <algorithm>
#include <limits>

namespace fplab {

PureProfileIterator::PureProfileIterator(const GameTree& game) {
  for (int h = 0; h < game.num_infosets(); ++h) {
    sizes_.push_back(game.num_moves(h));
  }
  current_.assign(sizes_.size(), 0);
}

PureProfileIterator& PureProfileIterator::operator++() {
  for (int k = static_cast<int>(current_.size()) - 1; k >= 0; --k) {
    if (++current_[k] < sizes_[k]) return *this;
    current_[k] = 0;
  }
  done_ = true;
  return *this;
}

std::optional<uint64_t> CountPureProfiles(const GameTree& game) {
  uint64_t count = 1;
  for (int h = 0; h < game.num_infosets(); ++h) {
    const uint64_t k = static_cast<uint64_t>(game.num_moves(h));
    if (count > std::numeric_limits<uint64_t>::max() / k) return std::nullopt;
    count *= k;
  }
  return count;
}

int PlayOut(const GameTree& game, const PureMoves& moves) {
  int n = game.root();
  while (!game.is_terminal(n)) {
    const Node& node = game.node(n);
    n = node.children[moves[node.infoset]];
  }
  return n;
}

bool IsPureNash(const GameTree& game, const PureMoves& moves, double eps) {
  const int base_terminal = PlayOut(game, moves);
  for (int i = 0; i < game.num_players(); ++i) {
    std::vector<int> own;
    for (int h = 0; h < game.num_infosets(); ++h) {
      if (game.infoset(h).player == i) own.push_back(h);
    }
    const double base = game.payoff(base_terminal, i);
    // Odometer over player i's pure strategies.
    PureMoves alt = moves;
    for (int h : own) alt[h] = 0;
    while (true) {
      if (game.payoff(PlayOut(game, alt), i) > base + eps) return false;
      int k = static_cast<int>(own.size()) - 1;
      for (; k >= 0; --k) {
        if (++alt[own[k]] < game.num_moves(own[k])) break;
        alt[own[k]] = 0;
      }
      if (k < 0) break;
    }
  }
  return true;
}

std::vector<PureMoves> BruteForcePureEquilibria(const GameTree& game,
                                                double eps, uint64_t limit) {
  const std::optional<uint64_t> count = CountPureProfiles(game);
  if (!count || *count > limit) {
    throw GameError(ErrorCode::kTooLarge,
                    "pure profile count " +
                        (count ? std::to_string(*count) : std::string(">2^64")) +
                        " exceeds the limit " + std::to_string(limit));
  }
  std::vector<PureMoves> out;
  for (PureProfileIterator it(game); !it.done(); ++it) {
    if (IsPureNash(game, *it, eps)) out.push_back(*it);
  }
  return out;
}

std::vector<int> GlobalOptima(const GameTree& game) {
  double best = -std::numeric_limits<double>::infinity();
  for (int z : game.terminals()) best = std::max(best, game.payoff(z, 0));
  std::vector<int> out;
  for (int z : game.terminals()) {
    if (game.payoff(z, 0) == best) out.push_back(z);
  }
  return out;
}

}  // namespace fplab
