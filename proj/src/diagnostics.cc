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

#include "fplab/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace fplab {

namespace {

const std::vector<PathStep>& TerminalPath(const GameTree& game, int terminal) {
  if (terminal < 0 || terminal >= static_cast<int>(game.nodes().size()) ||
      !game.is_terminal(terminal)) {
    throw GameError(ErrorCode::kUnknownTerminal,
                    "node index " + std::to_string(terminal) +
                        " is not a terminal");
  }
  return game.path(terminal);
}

void RequireDistinctPayoffs(const GameMetrics& metrics) {
  if (!metrics.distinct_payoffs || !metrics.k_max) {
    throw GameError(ErrorCode::kDegeneratePayoffs,
                    "repetition constants need distinct terminal payoffs");
  }
}

bool OnPathBestReplies(const GameTree& game, const BehaviorProfile& g,
                       const std::vector<PathStep>& path, double tol) {
  const ProfileEvaluation eval = Evaluate(game, g);
  for (const PathStep& step : path) {
    const std::vector<double> gains = LocalGains(game, eval, step.infoset);
    const double best = *std::max_element(gains.begin(), gains.end());
    if (gains[step.move] < best - tol) return false;
  }
  return true;
}

// Levels passed by g, i.e. the number of consecutive updates toward the path
// after which every on-path move is still a best reply. On return `frontier`
// holds F_level(g).
BoundedCount CountLevels(const GameTree& game, BehaviorProfile& frontier,
                         const std::vector<PathStep>& path, double rho,
                         double tol, int cap) {
  for (int m = 1; m <= cap; ++m) {
    BehaviorProfile next = frontier;
    FadingMemoryUpdate(next, path, rho);
    if (!OnPathBestReplies(game, next, path, tol)) return {m - 1, false};
    frontier = std::move(next);
  }
  return {cap, true};
}

}  // namespace

BehaviorProfile ApplyF(const GameTree& game, const BehaviorProfile& f,
                       int terminal, int64_t m, double rho) {
  const std::vector<PathStep>& path = TerminalPath(game, terminal);
  if (m < 0) throw GameError(ErrorCode::kBadParameter, "m must be >= 0");
  BehaviorProfile out = f;
  for (int64_t k = 0; k < m; ++k) FadingMemoryUpdate(out, path, rho);
  return out;
}

int KT(const GameTree& game, const BehaviorProfile& f, int terminal,
       const GameMetrics& metrics) {
  RequireDistinctPayoffs(metrics);
  const std::vector<PathStep>& path = TerminalPath(game, terminal);
  const double threshold = metrics.RepetitionThreshold();
  for (int k = 0; k < *metrics.k_max; ++k) {
    // Same expression as the k_max search, so f = 0 reproduces k_max.
    const double c = std::pow(1.0 - metrics.rho, k + 1);
    bool ok = true;
    for (const PathStep& step : path) {
      if (c * f[step.infoset][step.move] + 1.0 - c < threshold) {
        ok = false;
        break;
      }
    }
    if (ok) return k;
  }
  return *metrics.k_max;
}

LockReport LockLevel(const GameTree& game, const BehaviorProfile& f,
                     int terminal, double rho, double tol, int cap) {
  const std::vector<PathStep>& path = TerminalPath(game, terminal);
  LockReport report;
  report.terminal = terminal;
  report.cap = cap;
  BehaviorProfile frontier = f;
  report.level = CountLevels(game, frontier, path, rho, tol, cap);

  const ProfileEvaluation limit =
      Evaluate(game, ReplaceAlongPath(game, f, terminal));
  report.limit_locked = true;
  for (const PathStep& step : path) {
    const std::vector<double> gains = LocalGains(game, limit, step.infoset);
    for (size_t b = 0; b < gains.size(); ++b) {
      if (static_cast<int>(b) != step.move &&
          !(gains[step.move] - gains[b] > tol)) {
        report.limit_locked = false;
      }
    }
  }
  return report;
}

BoundedCount ForcedRepetitions(const GameTree& game, const BehaviorProfile& f,
                               int terminal, const GameMetrics& metrics,
                               double tol, int cap) {
  const int k = KT(game, f, terminal, metrics);
  BehaviorProfile g = ApplyF(game, f, terminal, k, metrics.rho);
  return CountLevels(game, g, game.path(terminal), metrics.rho, tol, cap);
}

double PMin(const GameTree& game, const std::vector<double>& alpha,
            const GameMetrics& metrics) {
  RequireDistinctPayoffs(metrics);
  if (alpha.empty() ||
      static_cast<int>(alpha.size()) != game.num_infosets()) {
    throw GameError(ErrorCode::kBadParameter,
                    "alpha needs one value per infoset");
  }
  const auto [lo, hi] = std::minmax_element(alpha.begin(), alpha.end());
  const double zz = static_cast<double>(metrics.num_terminals) *
                    metrics.num_terminals;
  const double base =
      (1.0 - *hi) * std::pow(*lo, metrics.l_max * (*metrics.k_max + 1));
  return std::pow(base, zz);
}

double LogPMin(const GameTree& game, const std::vector<double>& alpha,
               const GameMetrics& metrics) {
  RequireDistinctPayoffs(metrics);
  if (alpha.empty() ||
      static_cast<int>(alpha.size()) != game.num_infosets()) {
    throw GameError(ErrorCode::kBadParameter,
                    "alpha needs one value per infoset");
  }
  const auto [lo, hi] = std::minmax_element(alpha.begin(), alpha.end());
  const double zz = static_cast<double>(metrics.num_terminals) *
                    metrics.num_terminals;
  return zz * (std::log1p(-*hi) +
               metrics.l_max * (*metrics.k_max + 1) * std::log(*lo));
}

unsigned RoundEvents::Flags() const {
  unsigned flags = 0;
  if (repeat) flags |= kRepeatEvent;
  if (repeat_lock) flags |= kRepeatLockEvent;
  if (repeat_lock_deviate) flags |= kRepeatLockDeviateEvent;
  if (maximal) flags |= kMaximalEvent;
  return flags;
}

namespace {

// Terminals reachable from z_s by one strictly improving deviation at an
// on-path infoset whose current move is not a best reply, with every other
// infoset repeating its last move.
std::set<int> DeviationTerminals(const GameTree& game, int terminal,
                                 const StateSnapshot& after, double tol) {
  std::set<int> out;
  const ProfileEvaluation eval = Evaluate(game, after.frequencies);
  for (const PathStep& bar : game.path(terminal)) {
    const std::vector<double> gains = LocalGains(game, eval, bar.infoset);
    const double best = *std::max_element(gains.begin(), gains.end());
    if (gains[bar.move] >= best - tol) continue;
    for (int hat = 0; hat < static_cast<int>(gains.size()); ++hat) {
      if (!(gains[hat] > gains[bar.move])) continue;
      int n = game.root();
      while (!game.is_terminal(n)) {
        const int h = game.node(n).infoset;
        const int a = h == bar.infoset ? hat : after.last_moves[h];
        n = game.node(n).children[a];
      }
      out.insert(n);
    }
  }
  return out;
}

}  // namespace

EventAnnotation DetectEvents(const GameTree& game,
                             std::span<const TraceRecord> trace,
                             std::span<const StateSnapshot> snapshots,
                             const GameMetrics& metrics, double tol, int cap) {
  RequireDistinctPayoffs(metrics);
  const int64_t count = static_cast<int64_t>(trace.size());
  if (static_cast<int64_t>(snapshots.size()) != count + 1) {
    throw GameError(ErrorCode::kBadParameter,
                    "need one snapshot per round plus the final state");
  }
  EventAnnotation out;
  out.rounds.resize(count);

  // run_end[k]: last index j >= k with trace[k..j] on the same terminal.
  std::vector<int64_t> run_end(count);
  for (int64_t k = count - 1; k >= 0; --k) {
    run_end[k] = (k + 1 < count && trace[k + 1].terminal == trace[k].terminal)
                     ? run_end[k + 1]
                     : k;
  }

  // Reuse the previous round's lock computation while the terminal repeats
  // and the frequencies moved by exactly one update toward it.
  struct Cache {
    bool valid = false;
    int terminal = -1;
    int k_t = 0;
    BoundedCount m;
    BehaviorProfile frontier;  // F_cap(g) when m is at the cap
  } cache;

  for (int64_t k = 0; k < count; ++k) {
    RoundEvents& ev = out.rounds[k];
    const int z = trace[k].terminal;
    const std::vector<PathStep>& path = game.path(z);
    const BehaviorProfile& f = snapshots[k].frequencies;
    ev.round = trace[k].round;
    ev.k_t = KT(game, f, z, metrics);
    ev.repeat = k + ev.k_t < count && run_end[k] >= k + ev.k_t;
    if (!ev.repeat) {
      cache.valid = false;
      continue;
    }

    std::optional<BoundedCount> m;
    if (cache.valid && cache.terminal == z && k > 0) {
      BehaviorProfile stepped = snapshots[k - 1].frequencies;
      FadingMemoryUpdate(stepped, path, metrics.rho);
      const int shift = ev.k_t + 1 - cache.k_t;
      if (stepped == f && (shift == 0 || shift == 1)) {
        if (shift == 0) {
          m = cache.m;
        } else if (!cache.m.at_least && cache.m.value >= 1) {
          m = BoundedCount{cache.m.value - 1, false};
        } else if (cache.m.at_least) {
          BehaviorProfile next = cache.frontier;
          FadingMemoryUpdate(next, path, metrics.rho);
          if (OnPathBestReplies(game, next, path, tol)) {
            cache.frontier = std::move(next);
            m = BoundedCount{cap, true};
          } else {
            m = BoundedCount{cap - 1, false};
          }
        }
      }
    }
    if (!m) {
      BehaviorProfile frontier = ApplyF(game, f, z, ev.k_t, metrics.rho);
      m = CountLevels(game, frontier, path, metrics.rho, tol, cap);
      cache.frontier = std::move(frontier);
    }
    cache.valid = true;
    cache.terminal = z;
    cache.k_t = ev.k_t;
    cache.m = *m;
    ev.m_t = *m;

    if (m->at_least) {
      ev.repeat_lock = run_end[k] == count - 1;
      continue;
    }
    const int64_t s = k + ev.k_t + m->value;
    ev.repeat_lock = s < count && run_end[k] >= s;
    if (ev.repeat_lock && s + 1 < count) {
      const std::set<int> hat =
          DeviationTerminals(game, z, snapshots[s + 1], tol);
      if (hat.count(trace[s + 1].terminal)) {
        ev.repeat_lock_deviate = true;
        ev.deviation_round = trace[s + 1].round;
      }
    }
  }

  // Chains and maximal events.
  std::vector<bool> is_link_target(count, false);
  for (int64_t k = 0; k < count; ++k) {
    const RoundEvents& ev = out.rounds[k];
    if (ev.repeat_lock_deviate) {
      is_link_target[k + ev.k_t + ev.m_t->value + 1] = true;
    }
  }
  for (int64_t k = 0; k < count; ++k) {
    RoundEvents& ev = out.rounds[k];
    if (ev.m_t && ev.m_t->at_least) {
      ev.maximal = ev.repeat;
      continue;
    }
    if (!ev.repeat_lock_deviate) continue;
    DeviationChain chain;
    int64_t cur = k;
    chain.rounds.push_back(trace[cur].round);
    chain.terminals.push_back(trace[cur].terminal);
    while (out.rounds[cur].repeat_lock_deviate) {
      const RoundEvents& link = out.rounds[cur];
      cur += link.k_t + link.m_t->value + 1;
      chain.rounds.push_back(trace[cur].round);
      chain.terminals.push_back(trace[cur].terminal);
    }
    const RoundEvents& last = out.rounds[cur];
    chain.ends_locked = last.repeat && last.m_t && last.m_t->at_least;
    ev.maximal = chain.ends_locked;
    if (!is_link_target[k]) out.chains.push_back(std::move(chain));
  }
  return out;
}

void ApplyEventFlags(std::vector<TraceRecord>& trace,
                     const EventAnnotation& annotation) {
  for (size_t k = 0; k < trace.size() && k < annotation.rounds.size(); ++k) {
    trace[k].events = annotation.rounds[k].Flags();
  }
}

std::vector<ConvergenceSample> ConvergenceMetrics(
    std::span<const TraceRecord> trace, int64_t sample_every) {
  if (sample_every < 1) {
    throw GameError(ErrorCode::kBadParameter, "sample_every must be >= 1");
  }
  std::vector<ConvergenceSample> out;
  int64_t stability = 0;
  for (size_t k = 0; k < trace.size(); ++k) {
    const TraceRecord& r = trace[k];
    stability = (k > 0 && trace[k - 1].terminal == r.terminal) ? stability + 1
                                                               : 1;
    if (r.round % sample_every != 0 && k + 1 != trace.size()) continue;
    ConvergenceSample sample;
    sample.round = r.round;
    sample.path_stability = stability;
    if (r.gaps && !r.gaps->empty()) {
      sample.max_gap = *std::max_element(r.gaps->begin(), r.gaps->end());
    }
    out.push_back(sample);
  }
  return out;
}

std::vector<double> RevisitRatios(std::span<const TraceRecord> trace,
                                  int infoset) {
  std::vector<double> ratios;
  int64_t previous = 0;
  for (const TraceRecord& r : trace) {
    const bool visited =
        std::any_of(r.path.begin(), r.path.end(),
                    [&](const PathStep& s) { return s.infoset == infoset; });
    if (!visited) continue;
    if (previous > 0) {
      ratios.push_back(static_cast<double>(r.round - previous) /
                       static_cast<double>(previous));
    }
    previous = r.round;
  }
  return ratios;
}

}  // namespace fplab
