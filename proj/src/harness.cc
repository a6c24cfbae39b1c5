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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "fplab/game_format.h"
#include "fplab/strategy.h"

namespace fplab {

using nlohmann::json;

void ValidateConfig(const RunConfig& c) {
  if (c.rounds < 1) throw ConfigError("rounds", "must be at least 1");
  if (c.replications < 1) {
    throw ConfigError("replications", "must be at least 1");
  }
  if (c.gap_every < 0) throw ConfigError("gap_every", "must be >= 0");
  if (c.threads < 0) throw ConfigError("threads", "must be >= 0");
  if (c.lock_cap < 1) throw ConfigError("lock_cap", "must be at least 1");
  if (c.absorption_window < 0 || c.absorption_window > c.rounds) {
    throw ConfigError("absorption_window", "must lie in [0, rounds]");
  }
  if (c.mode == Mode::kClassic) {
    if (c.rho) throw ConfigError("rho", "rho is ifm-only");
    if (c.alpha || !c.alpha_overrides.empty()) {
      throw ConfigError("alpha", "alpha is ifm-only");
    }
    if (c.annotate_events) {
      throw ConfigError("events", "event annotation is ifm-only");
    }
    return;
  }
  if (!c.rho) throw ConfigError("rho", "ifm mode needs rho");
  if (!(*c.rho > 0.0 && *c.rho < 1.0)) {
    throw ConfigError("rho", "must lie in (0,1)");
  }
  auto check_alpha = [](double a) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha", "must lie in (0,1)");
  };
  if (c.alpha) check_alpha(*c.alpha);
  for (const auto& [id, a] : c.alpha_overrides) check_alpha(a);
}

ProfileFile ParseProfileJson(const GameTree& game, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw GameError(ErrorCode::kBadProfile,
                    std::string("profile JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("profile") ||
      !doc["profile"].is_object()) {
    throw GameError(ErrorCode::kBadProfile,
                    "profile JSON needs a \"profile\" object");
  }
  ProfileFile out;
  std::map<std::string, std::vector<double>> dists;
  try {
    for (const auto& [id, dist] : doc["profile"].items()) {
      dists[id] = dist.get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    throw GameError(ErrorCode::kBadProfile,
                    std::string("profile JSON: ") + e.what());
  }
  for (int h = 0; h < game.num_infosets(); ++h) {
    if (!dists.count(game.infoset(h).id)) {
      throw GameError(ErrorCode::kBadProfile,
                      "profile misses infoset " + game.infoset(h).id);
    }
  }
  out.profile = ProfileFromMap(game, dists);
  if (doc.contains("moves")) {
    std::vector<int> moves(game.num_infosets(), -1);
    for (const auto& [id, move] : doc["moves"].items()) {
      if (!move.is_string()) {
        throw GameError(ErrorCode::kBadProfile, "move labels must be strings");
      }
      const int h = game.InfosetIndex(id);
      moves[h] = game.MoveIndex(h, move.get<std::string>());
    }
    for (int h = 0; h < game.num_infosets(); ++h) {
      if (moves[h] < 0) moves[h] = LexicographicMove(game, h);
    }
    out.moves = moves;
  }
  if (doc.contains("terminal")) {
    if (!doc["terminal"].is_string()) {
      throw GameError(ErrorCode::kBadProfile, "terminal must be a string");
    }
    out.terminal = game.TerminalIndex(doc["terminal"].get<std::string>());
  }
  return out;
}

ProfileFile LoadProfileFile(const GameTree& game, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseProfileJson(game, buffer.str());
}

LearnerState InitialState(const GameTree& game, const RunConfig& config) {
  ValidateConfig(config);
  InitOptions options;
  options.mode = config.mode;
  options.tie_break = config.tie_break;
  if (config.init != "uniform") {
    ProfileFile file = LoadProfileFile(game, config.init);
    options.frequencies = std::move(file.profile);
    options.moves = std::move(file.moves);
  }
  if (config.mode == Mode::kInertiaFadingMemory) {
    options.rho = config.rho;
    std::vector<double> alpha(game.num_infosets(),
                              config.alpha.value_or(-1.0));
    for (const auto& [id, a] : config.alpha_overrides) {
      int h;
      try {
        h = game.InfosetIndex(id);
      } catch (const GameError&) {
        throw ConfigError("alpha", "unknown infoset '" + id + "'");
      }
      alpha[h] = a;
    }
    for (int h = 0; h < game.num_infosets(); ++h) {
      if (alpha[h] < 0.0) {
        throw ConfigError("alpha", "no value for infoset " +
                                       game.infoset(h).id);
      }
    }
    options.alpha = alpha;
  }
  try {
    return InitState(game, options);
  } catch (const GameError& e) {
    if (e.code() == ErrorCode::kBadParameter) throw ConfigError("init", e.what());
    throw;
  }
}

uint64_t ReplicationSeed(uint64_t seed, int64_t replication) {
  uint64_t z = seed + static_cast<uint64_t>(replication) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ReplicationResult RunReplication(const GameTree& game, const RunConfig& config,
                                 const LearnerState& initial,
                                 int64_t replication) {
  ReplicationResult out;
  out.replication = replication;
  out.seed = ReplicationSeed(config.seed, replication);
  out.final_state = initial;
  Rng rng(out.seed);
  RunOptions options;
  options.rounds = config.rounds;
  options.gap_every = config.gap_every;
  options.keep_snapshots = config.annotate_events;
  RunResult run = Run(game, out.final_state, options, rng);
  out.trace = std::move(run.trace);

  if (config.annotate_events) {
    const GameMetrics metrics = ComputeMetrics(game, *config.rho);
    out.events = DetectEvents(game, out.trace, run.snapshots, metrics,
                              kBestReplyTolerance, config.lock_cap);
    ApplyEventFlags(out.trace, *out.events);
  }

  const int64_t window = config.absorption_window > 0
                             ? config.absorption_window
                             : std::max<int64_t>(1, config.rounds / 4);
  const int64_t count = static_cast<int64_t>(out.trace.size());
  int64_t start = count - 1;
  while (start > 0 && out.trace[start - 1].terminal == out.trace.back().terminal) {
    --start;
  }
  out.final_terminal = out.trace.back().terminal;
  out.absorbed = count - start >= window;
  if (out.absorbed) out.absorption_round = out.trace[start].round;
  const std::vector<double> gaps =
      AllOptimalityGaps(game, out.final_state.frequencies);
  out.final_max_gap = *std::max_element(gaps.begin(), gaps.end());
  return out;
}

std::vector<ReplicationResult> RunReplications(const GameTree& game,
                                               const RunConfig& config) {
  const LearnerState initial = InitialState(game, config);
  std::vector<ReplicationResult> results(config.replications);
  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp<int64_t>(threads, 1, config.replications);
  std::atomic<int64_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](int w) {
    try {
      for (int64_t k = next++; k < config.replications; k = next++) {
        results[k] = RunReplication(game, config, initial, k + 1);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < threads; ++w) pool.emplace_back(worker, w);
  worker(0);
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string EncodePath(const GameTree& game,
                       const std::vector<PathStep>& path) {
  std::string out;
  for (const PathStep& step : path) {
    if (!out.empty()) out += '/';
    const Infoset& h = game.infoset(step.infoset);
    out += h.id;
    out += '=';
    out += h.moves[step.move];
  }
  return out;
}

std::string TraceCsv(const GameTree& game,
                     const std::vector<TraceRecord>& trace,
                     const CsvColumns& columns) {
  std::ostringstream out;
  out << "round,terminal,path";
  if (columns.max_gap) out << ",max_gap";
  if (columns.event_flags) out << ",event_flags";
  if (columns.revisit_ratio) out << ",revisit_ratio";
  out << "\n";
  std::vector<int64_t> last_visit(game.num_infosets(), 0);
  for (const TraceRecord& r : trace) {
    out << r.round << "," << game.node(r.terminal).id << ","
        << EncodePath(game, r.path);
    if (columns.max_gap) {
      out << ",";
      if (r.gaps && !r.gaps->empty()) {
        out << FormatDouble(*std::max_element(r.gaps->begin(), r.gaps->end()));
      }
    }
    if (columns.event_flags) {
      out << ",";
      if (r.events & kRepeatEvent) out << "E";
      if (r.events & kRepeatLockEvent) out << "B";
      if (r.events & kRepeatLockDeviateEvent) out << "D";
      if (r.events & kMaximalEvent) out << "M";
    }
    if (columns.revisit_ratio) {
      out << ",";
      bool first = true;
      for (const PathStep& step : r.path) {
        int64_t& prev = last_visit[step.infoset];
        if (prev > 0) {
          if (!first) out << "/";
          first = false;
          out << game.infoset(step.infoset).id << "="
              << FormatDouble(static_cast<double>(r.round - prev) /
                              static_cast<double>(prev));
        }
        prev = r.round;
      }
    }
    out << "\n";
  }
  return out.str();
}

json ConfigJson(const RunConfig& c) {
  json j;
  j["game"] = c.game_path;
  j["mode"] = std::string(ModeName(c.mode));
  j["rounds"] = c.rounds;
  j["seed"] = c.seed;
  j["rho"] = c.rho ? json(*c.rho) : json(nullptr);
  j["alpha"] = c.alpha ? json(*c.alpha) : json(nullptr);
  j["alpha_overrides"] = json::object();
  for (const auto& [id, a] : c.alpha_overrides) j["alpha_overrides"][id] = a;
  j["tie_break"] = std::string(TieBreakName(c.tie_break));
  j["init"] = c.init;
  j["gap_every"] = c.gap_every;
  j["replications"] = c.replications;
  j["absorption_window"] = c.absorption_window;
  j["events"] = c.annotate_events;
  j["lock_cap"] = c.lock_cap;
  j["trace_prefix"] = c.trace_prefix;
  return j;
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

json QuantileJson(const std::vector<double>& values) {
  if (values.empty()) return nullptr;
  return {{"min", Quantile(values, 0.0)},  {"p10", Quantile(values, 0.1)},
          {"p50", Quantile(values, 0.5)},  {"p90", Quantile(values, 0.9)},
          {"max", Quantile(values, 1.0)}};
}

}  // namespace

json SummaryJson(const GameTree& game, const RunConfig& config,
                 const std::vector<ReplicationResult>& results) {
  json j;
  j["config"] = ConfigJson(config);
  j["replications"] = results.size();
  int64_t absorbed = 0;
  std::map<std::string, int64_t> terminals;
  std::vector<double> absorption_rounds;
  std::vector<double> final_gaps;
  json per = json::array();
  for (const ReplicationResult& r : results) {
    final_gaps.push_back(r.final_max_gap);
    json row;
    row["replication"] = r.replication;
    row["seed"] = r.seed;
    row["final_terminal"] = game.node(r.final_terminal).id;
    row["absorbed"] = r.absorbed;
    row["absorption_round"] =
        r.absorption_round ? json(*r.absorption_round) : json(nullptr);
    row["final_max_gap"] = r.final_max_gap;
    if (r.events) {
      int64_t flagged = 0;
      for (const RoundEvents& ev : r.events->rounds) flagged += ev.maximal;
      row["maximal_events"] = flagged;
      row["deviation_chains"] = r.events->chains.size();
    }
    per.push_back(row);
    if (r.absorbed) {
      ++absorbed;
      ++terminals[game.node(r.final_terminal).id];
      absorption_rounds.push_back(static_cast<double>(*r.absorption_round));
    }
  }
  j["absorbed_fraction"] =
      results.empty() ? 0.0
                      : static_cast<double>(absorbed) /
                            static_cast<double>(results.size());
  j["absorbed_terminals"] = terminals;
  j["absorption_round_quantiles"] = QuantileJson(absorption_rounds);
  j["final_max_gap_quantiles"] = QuantileJson(final_gaps);
  j["per_replication"] = per;
  return j;
}

}  // namespace fplab
