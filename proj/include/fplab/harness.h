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

#ifndef FPLAB_HARNESS_H_
#define FPLAB_HARNESS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fplab/diagnostics.h"
#include "fplab/fictitious_play.h"
#include "fplab/game.h"

namespace fplab {

// Invalid run configuration; `field` names the offending option.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  std::string game_path;
  Mode mode = Mode::kClassic;
  int64_t rounds = 1000;
  uint64_t seed = 0;
  std::optional<double> rho;
  std::optional<double> alpha;                   // value for every infoset
  std::map<std::string, double> alpha_overrides;  // by infoset id
  TieBreak tie_break = TieBreak::kLexicographic;
  std::string init = "uniform";  // or a profile JSON file
  int64_t gap_every = 0;
  int64_t replications = 1;
  int threads = 0;  // 0: hardware concurrency
  // Rounds of a constant terminal at the end of a run that count as
  // absorption; 0 means rounds / 4.
  int64_t absorption_window = 0;
  bool annotate_events = false;  // ifm with distinct payoffs only
  int lock_cap = kDefaultLockCap;
  std::string trace_prefix;  // writes <prefix>_<r>.csv when set
  std::string summary_path;  // writes JSON when set
};

// Field-level checks that need no game. Throws ConfigError.
void ValidateConfig(const RunConfig& config);

// Initial state for `config` on `game`. Throws ConfigError for parameters
// that do not fit the game, std::runtime_error when the init file is
// unreadable.
LearnerState InitialState(const GameTree& game, const RunConfig& config);

// Stateless seed for replication r (1-based): splitmix64(seed + r * phi)
// where phi = 0x9E3779B97F4A7C15.
uint64_t ReplicationSeed(uint64_t seed, int64_t replication);

// A profile snapshot file: {"profile": {"h": [p, ...], ...},
// "moves": {"h": "a", ...}, "terminal": "z"}; only "profile" is required.
struct ProfileFile {
  BehaviorProfile profile;
  std::optional<std::vector<int>> moves;
  std::optional<int> terminal;
};

ProfileFile ParseProfileJson(const GameTree& game, const std::string& text);
ProfileFile LoadProfileFile(const GameTree& game, const std::string& path);

struct ReplicationResult {
  int64_t replication = 0;
  uint64_t seed = 0;
  std::vector<TraceRecord> trace;
  LearnerState final_state;
  std::optional<EventAnnotation> events;
  bool absorbed = false;
  std::optional<int64_t> absorption_round;  // first round of the final run
  int final_terminal = -1;
  double final_max_gap = 0.0;  // under the final frequencies
};

ReplicationResult RunReplication(const GameTree& game, const RunConfig& config,
                                 const LearnerState& initial,
                                 int64_t replication);

// All replications, in index order regardless of scheduling.
std::vector<ReplicationResult> RunReplications(const GameTree& game,
                                               const RunConfig& config);

// "h1=A/h2=a"
std::string EncodePath(const GameTree& game, const std::vector<PathStep>& path);

// CSV with header round,terminal,path[,max_gap][,event_flags][,revisit_ratio].
// event_flags concatenates E, B (lock), D (deviate) and M.
struct CsvColumns {
  bool max_gap = false;
  bool event_flags = false;
  // (t - t_prev(h)) / t_prev(h) for every revisited infoset on the path,
  // encoded like the path: "h1=0.5/h2=1".
  bool revisit_ratio = false;
};
std::string TraceCsv(const GameTree& game,
                     const std::vector<TraceRecord>& trace,
                     const CsvColumns& columns);

nlohmann::json ConfigJson(const RunConfig& config);
nlohmann::json SummaryJson(const GameTree& game, const RunConfig& config,
                           const std::vector<ReplicationResult>& results);

// Linear-interpolation quantile of unsorted values; q in [0, 1].
double Quantile(std::vector<double> values, double q);

}  // namespace fplab

#endif  // FPLAB_HARNESS_H_
