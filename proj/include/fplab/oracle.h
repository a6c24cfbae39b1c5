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

// Brute-force ground truth for small games. Payoffs are recomputed by walking
// the tree under pure profiles; nothing here uses the reach/gap machinery.

#ifndef FPLAB_ORACLE_H_
#define FPLAB_ORACLE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "fplab/game.h"

namespace fplab {

inline constexpr uint64_t kDefaultProfileLimit = 1000000;

// A pure profile: one move index per infoset.
using PureMoves = std::vector<int>;

// Cartesian product over infosets of their declared move lists, the last
// infoset varying fastest.
class PureProfileIterator {
 public:
  explicit PureProfileIterator(const GameTree& game);

  bool done() const { return done_; }
  const PureMoves& operator*() const { return current_; }
  PureProfileIterator& operator++();

 private:
  std::vector<int> sizes_;
  PureMoves current_;
  bool done_ = false;
};

// Product of move counts; nullopt on overflow of 64 bits.
std::optional<uint64_t> CountPureProfiles(const GameTree& game);

// Terminal reached when every infoset plays its pure move.
int PlayOut(const GameTree& game, const PureMoves& moves);

// Pure profiles where no player gains more than eps by switching to any of
// their own pure strategies. Throws GameError(kTooLarge) above `limit`
// profiles.
std::vector<PureMoves> BruteForcePureEquilibria(
    const GameTree& game, double eps, uint64_t limit = kDefaultProfileLimit);

bool IsPureNash(const GameTree& game, const PureMoves& moves, double eps);

// Terminals maximizing the common payoff (player 0's payoff).
std::vector<int> GlobalOptima(const GameTree& game);

}  // namespace fplab

#endif  // FPLAB_ORACLE_H_
