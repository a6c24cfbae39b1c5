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

#include "fplab/fictitious_play.h"

#include <algorithm>

namespace fplab {

std::string_view ModeName(Mode mode) {
  return mode == Mode::kClassic ? "classic" : "ifm";
}

std::string_view TieBreakName(TieBreak tie) {
  return tie == TieBreak::kLexicographic ? "lexicographic" : "uniform";
}

std::optional<Mode> ParseMode(std::string_view name) {
  if (name == "classic") return Mode::kClassic;
  if (name == "ifm") return Mode::kInertiaFadingMemory;
  return std::nullopt;
}

std::optional<TieBreak> ParseTieBreak(std::string_view name) {
  if (name == "lexicographic") return TieBreak::kLexicographic;
  if (name == "uniform") return TieBreak::kUniformRandom;
  return std::nullopt;
}

double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int UniformIndex(Rng& rng, int count) {
  const int k = static_cast<int>(UniformUnit(rng) * count);
  return std::min(k, count - 1);
}

int LexicographicMove(const GameTree& game, int infoset) {
  const auto& moves = game.infoset(infoset).moves;
  return static_cast<int>(std::min_element(moves.begin(), moves.end()) -
                          moves.begin());
}

namespace {

bool InOpenUnitInterval(double x) { return x > 0.0 && x < 1.0; }

int ChooseAmong(const GameTree& game, int infoset,
                const std::vector<int>& replies, TieBreak tie, Rng& rng) {
  if (replies.size() == 1) return replies.front();
  if (tie == TieBreak::kUniformRandom) {
    return replies[UniformIndex(rng, static_cast<int>(replies.size()))];
  }
  const auto& moves = game.infoset(infoset).moves;
  return *std::min_element(replies.begin(), replies.end(),
                           [&](int a, int b) { return moves[a] < moves[b]; });
}

}  // namespace

LearnerState InitState(const GameTree& game, const InitOptions& options) {
  LearnerState state;
  state.mode = options.mode;
  state.tie_break = options.tie_break;
  const int num_infosets = game.num_infosets();

  if (options.mode == Mode::kClassic) {
    if (options.rho || options.alpha) {
      throw GameError(ErrorCode::kBadParameter,
                      "rho and alpha apply to ifm mode only");
    }
  } else {
    if (!options.rho || !options.alpha) {
      throw GameError(ErrorCode::kBadParameter, "ifm mode needs rho and alpha");
    }
    if (!InOpenUnitInterval(*options.rho)) {
      throw GameError(ErrorCode::kBadParameter, "rho must lie in (0,1)");
    }
    if (static_cast<int>(options.alpha->size()) != num_infosets) {
      throw GameError(ErrorCode::kBadParameter,
                      "alpha needs one value per infoset");
    }
    for (double a : *options.alpha) {
      if (!InOpenUnitInterval(a)) {
        throw GameError(ErrorCode::kBadParameter, "alpha must lie in (0,1)");
      }
    }
    state.rho = *options.rho;
    state.alpha = *options.alpha;
  }

  if (options.frequencies) {
    CheckProfile(game, *options.frequencies);
    state.frequencies = *options.frequencies;
  } else {
    state.frequencies = UniformProfile(game);
  }
  if (options.moves) {
    if (static_cast<int>(options.moves->size()) != num_infosets) {
      throw GameError(ErrorCode::kBadParameter,
                      "initial moves need one entry per infoset");
    }
    for (int h = 0; h < num_infosets; ++h) {
      const int a = (*options.moves)[h];
      if (a < 0 || a >= game.num_moves(h)) {
        throw GameError(ErrorCode::kBadParameter,
                        "initial move out of range at " + game.infoset(h).id);
      }
    }
    state.last_moves = *options.moves;
  } else {
    for (int h = 0; h < num_infosets; ++h) {
      state.last_moves.push_back(LexicographicMove(game, h));
    }
  }
  state.visit_counts.assign(num_infosets, 0);
  state.round = 1;
  return state;
}

void FadingMemoryUpdate(BehaviorProfile& f, const std::vector<PathStep>& path,
                        double rho) {
  for (const PathStep& step : path) {
    std::vector<double>& dist = f[step.infoset];
    for (size_t b = 0; b < dist.size(); ++b) {
      const double target = static_cast<int>(b) == step.move ? 1.0 : 0.0;
      dist[b] += rho * (target - dist[b]);
    }
  }
}

void ObservePath(LearnerState& state, const std::vector<PathStep>& path) {
  if (state.mode == Mode::kInertiaFadingMemory) {
    for (const PathStep& step : path) ++state.visit_counts[step.infoset];
    FadingMemoryUpdate(state.frequencies, path, state.rho);
    return;
  }
  for (const PathStep& step : path) {
    const double step_size =
        1.0 / static_cast<double>(++state.visit_counts[step.infoset]);
    std::vector<double>& dist = state.frequencies[step.infoset];
    for (size_t b = 0; b < dist.size(); ++b) {
      const double played = static_cast<int>(b) == step.move ? 1.0 : 0.0;
      dist[b] += step_size * (played - dist[b]);
    }
  }
}

TraceRecord PlayRound(const GameTree& game, LearnerState& state, Rng& rng,
                      bool record_gaps) {
  TraceRecord record;
  record.round = state.round;
  const ProfileEvaluation eval = Evaluate(game, state.frequencies);
  if (record_gaps) record.gaps = AllOptimalityGaps(game, eval);

  const bool ifm = state.mode == Mode::kInertiaFadingMemory;
  int n = game.root();
  while (!game.is_terminal(n)) {
    const int h = game.node(n).infoset;
    int move;
    if (ifm && state.round == 1) {
      move = state.last_moves[h];
    } else if (ifm) {
      const int prev = state.last_moves[h];
      const std::vector<int> replies = BestReplies(game, eval, h);
      if (std::find(replies.begin(), replies.end(), prev) != replies.end()) {
        move = prev;
      } else if (UniformUnit(rng) < state.alpha[h]) {
        move = prev;
      } else {
        move = ChooseAmong(game, h, replies, state.tie_break, rng);
      }
    } else {
      move = ChooseAmong(game, h, BestReplies(game, eval, h), state.tie_break,
                         rng);
    }
    state.last_moves[h] = move;
    record.path.push_back({h, move});
    n = game.node(n).children[move];
  }
  record.terminal = n;

  ObservePath(state, record.path);
  ++state.round;
  return record;
}

StateSnapshot Snapshot(const LearnerState& state) {
  return {state.round, state.frequencies, state.last_moves};
}

RunResult Run(const GameTree& game, LearnerState& state,
              const RunOptions& options, Rng& rng) {
  if (options.rounds < 1) {
    throw GameError(ErrorCode::kBadParameter, "rounds must be at least 1");
  }
  RunResult result;
  result.trace.reserve(options.rounds);
  if (options.keep_snapshots) result.snapshots.reserve(options.rounds + 1);
  for (int64_t k = 0; k < options.rounds; ++k) {
    const int64_t t = state.round;
    const bool gaps = options.gap_every > 0 &&
                      (t == 1 || t % options.gap_every == 0);
    if (options.keep_snapshots) result.snapshots.push_back(Snapshot(state));
    result.trace.push_back(PlayRound(game, state, rng, gaps));
  }
  if (options.keep_snapshots) result.snapshots.push_back(Snapshot(state));
  return result;
}

}  // namespace fplab
