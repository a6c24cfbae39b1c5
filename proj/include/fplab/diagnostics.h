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

// Post-hoc analysis of fading-memory dynamics: the iterated update map F_m,
// repetition constants, locked states and the repeat / lock / deviate events
// detected over recorded traces. Nothing here feeds back into the engine.

#ifndef FPLAB_DIAGNOSTICS_H_
#define FPLAB_DIAGNOSTICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fplab/fictitious_play.h"
#include "fplab/game.h"
#include "fplab/strategy.h"

namespace fplab {

inline constexpr int kDefaultLockCap = 1000;

// F_m(f, z): m fading-memory updates toward the path of z. F_0 is identity.
BehaviorProfile ApplyF(const GameTree& game, const BehaviorProfile& f,
                       int terminal, int64_t m, double rho);

// Least K such that K + 1 repetitions of z lift every on-path frequency above
// the repetition threshold. Uses metrics.rho. Never exceeds metrics.k_max.
int KT(const GameTree& game, const BehaviorProfile& f, int terminal,
       const GameMetrics& metrics);

// A count that may have hit its cap, in which case value == cap.
struct BoundedCount {
  int64_t value = 0;
  bool at_least = false;

  bool operator==(const BoundedCount&) const = default;
};

struct LockReport {
  int terminal = -1;
  int cap = 0;
  BoundedCount level;
  bool limit_locked = false;
};

// Largest l <= cap such that every on-path move stays a best reply through
// F_1, ..., F_l, and the strict best-reply test at the path vertex.
LockReport LockLevel(const GameTree& game, const BehaviorProfile& f,
                     int terminal, double rho, double tol = kBestReplyTolerance,
                     int cap = kDefaultLockCap);

// Forced repetitions m_t: the lock level of F_{K_t}(f, z).
BoundedCount ForcedRepetitions(const GameTree& game, const BehaviorProfile& f,
                               int terminal, const GameMetrics& metrics,
                               double tol = kBestReplyTolerance,
                               int cap = kDefaultLockCap);

// Lower bound on the probability of a maximal repeat-lock-deviate event:
// (min_h (1 - alpha_h) * (min_h alpha_h)^(L (K_max + 1)))^(|Z|^2).
// LogPMin is the natural log, usable when PMin underflows.
double PMin(const GameTree& game, const std::vector<double>& alpha,
            const GameMetrics& metrics);
double LogPMin(const GameTree& game, const std::vector<double>& alpha,
               const GameMetrics& metrics);

struct RoundEvents {
  int64_t round = 0;
  int k_t = 0;
  std::optional<BoundedCount> m_t;  // only evaluated when E_t holds
  bool repeat = false;              // E_t
  bool repeat_lock = false;         // E-bar_t
  bool repeat_lock_deviate = false; // E-hat_t
  bool maximal = false;             // M_t
  // For E-hat_t: the deviation round s + 1 = t + K_t + m_t + 1.
  std::optional<int64_t> deviation_round;

  unsigned Flags() const;
};

// t_0 < t_1 < ... with t_{l+1} = t_l + K + m + 1 and E-hat at every link.
struct DeviationChain {
  std::vector<int64_t> rounds;  // t_0, ..., t_{n+1}
  std::vector<int> terminals;   // z at each of those rounds
  bool ends_locked = false;     // last round has E and m = "infinity"

  int links() const { return static_cast<int>(rounds.size()) - 1; }
};

struct EventAnnotation {
  std::vector<RoundEvents> rounds;  // one per trace record
  std::vector<DeviationChain> chains;
};

// `snapshots[k]` is the state before trace[k]; one extra trailing entry holds
// the final state. Events that would need rounds past the end of the trace
// are not marked.
EventAnnotation DetectEvents(const GameTree& game,
                             std::span<const TraceRecord> trace,
                             std::span<const StateSnapshot> snapshots,
                             const GameMetrics& metrics,
                             double tol = kBestReplyTolerance,
                             int cap = kDefaultLockCap);

void ApplyEventFlags(std::vector<TraceRecord>& trace,
                     const EventAnnotation& annotation);

struct ConvergenceSample {
  int64_t round = 0;
  std::optional<double> max_gap;  // present when the record carries gaps
  int64_t path_stability = 0;     // length of the constant-terminal suffix
};

// Samples rounds divisible by sample_every, plus the last round.
std::vector<ConvergenceSample> ConvergenceMetrics(
    std::span<const TraceRecord> trace, int64_t sample_every);

// (t_{k+1}(h) - t_k(h)) / t_k(h) over successive visits to `infoset`.
std::vector<double> RevisitRatios(std::span<const TraceRecord> trace,
                                  int infoset);

}  // namespace fplab

#endif  // FPLAB_DIAGNOSTICS_H_
