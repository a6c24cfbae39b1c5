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

// Fictitious play in a repeated extensive-form game. Every player moves at a
// reached information set by a local best reply against the current
// frequencies at all other information sets, including their own.
//
// Two update rules are provided:
//  - classic: frequencies are empirical frequencies over visits,
//      f(a|h) += (1/#visits(h)) (1{a played} - f(a|h)) when h is visited;
//  - inertia + fading memory (ifm): a constant step rho,
//      f(a|h) += rho (1{a played} - f(a|h)) when h is visited,
//    and a reached player repeats the previous move at h whenever it is still
//    a best reply, otherwise repeats it anyway with probability alpha(h).

#ifndef FPLAB_FICTITIOUS_PLAY_H_
#define FPLAB_FICTITIOUS_PLAY_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "fplab/game.h"
#include "fplab/strategy.h"

namespace fplab {

enum class Mode { kClassic, kInertiaFadingMemory };
enum class TieBreak { kLexicographic, kUniformRandom };

std::string_view ModeName(Mode mode);            // "classic" | "ifm"
std::string_view TieBreakName(TieBreak tie);     // "lexicographic" | "uniform"
std::optional<Mode> ParseMode(std::string_view name);
std::optional<TieBreak> ParseTieBreak(std::string_view name);

// mt19937_64 is fully specified by the standard; the helpers below avoid the
// implementation-defined distributions so traces match across toolchains.
using Rng = std::mt19937_64;
double UniformUnit(Rng& rng);           // [0, 1) with 53 random bits
int UniformIndex(Rng& rng, int count);  // {0, ..., count-1}

struct LearnerState {
  BehaviorProfile frequencies;
  std::vector<int64_t> visit_counts;  // rounds completed with h visited
  std::vector<int> last_moves;        // most recent move per infoset
  int64_t round = 1;                  // the next round to be played
  Mode mode = Mode::kClassic;
  double rho = 0.0;                   // ifm only
  std::vector<double> alpha;          // ifm only, per infoset
  TieBreak tie_break = TieBreak::kLexicographic;
};

struct InitOptions {
  Mode mode = Mode::kClassic;
  std::optional<BehaviorProfile> frequencies;  // uniform when absent
  std::optional<std::vector<int>> moves;       // smallest label when absent
  std::optional<double> rho;
  std::optional<std::vector<double>> alpha;
  TieBreak tie_break = TieBreak::kLexicographic;
};

// Throws GameError(kBadParameter) for rho or alpha outside (0,1), for ifm
// without both parameters, and for classic mode with either of them.
LearnerState InitState(const GameTree& game, const InitOptions& options);

// Index of the lexicographically smallest move label at an infoset.
int LexicographicMove(const GameTree& game, int infoset);

enum EventFlag : unsigned {
  kRepeatEvent = 1u << 0,             // E_t
  kRepeatLockEvent = 1u << 1,         // E-bar_t
  kRepeatLockDeviateEvent = 1u << 2,  // E-hat_t
  kMaximalEvent = 1u << 3,            // M_t
};

struct TraceRecord {
  int64_t round = 0;
  int terminal = -1;
  std::vector<PathStep> path;  // (infoset, move) pairs on the path to terminal
  // Optimality gap at every infoset under the start-of-round frequencies.
  std::optional<std::vector<double>> gaps;
  unsigned events = 0;
};

// One step of the fading-memory update toward the vertex of every (h, a) on
// `path`. Shared by the engine and the diagnostics so both use identical
// arithmetic.
void FadingMemoryUpdate(BehaviorProfile& f, const std::vector<PathStep>& path,
                        double rho);

// Frequency and visit-count update for a path, by the state's mode. Does not
// touch last_moves or the round counter.
void ObservePath(LearnerState& state, const std::vector<PathStep>& path);

// Plays one round against state.frequencies and updates the state.
TraceRecord PlayRound(const GameTree& game, LearnerState& state, Rng& rng,
                      bool record_gaps = false);

struct StateSnapshot {
  int64_t round = 0;
  BehaviorProfile frequencies;
  std::vector<int> last_moves;
};

StateSnapshot Snapshot(const LearnerState& state);

struct RunOptions {
  int64_t rounds = 1;
  // Record gaps at round 1 and every round divisible by this; 0 disables.
  int64_t gap_every = 0;
  // Keep the pre-round state of every round plus the final state.
  bool keep_snapshots = false;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  std::vector<StateSnapshot> snapshots;  // rounds + 1 entries when kept
};

RunResult Run(const GameTree& game, LearnerState& state,
              const RunOptions& options, Rng& rng);

}  // namespace fplab

#endif  // FPLAB_FICTITIOUS_PLAY_H_
