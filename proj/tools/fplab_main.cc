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

// fplab: validate games, print their constants, list pure equilibria, run
// fictitious play and inspect profile snapshots.
//
// Exit codes: 0 success, 1 I/O or parse error, 2 semantic error, 3 bad
// configuration.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fplab/diagnostics.h"
#include "fplab/fictitious_play.h"
#include "fplab/game.h"
#include "fplab/game_format.h"
#include "fplab/harness.h"
#include "fplab/oracle.h"
#include "fplab/strategy.h"

namespace {

using fplab::GameTree;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kIoOrParse = 1;
constexpr int kSemantic = 2;
constexpr int kConfig = 3;

struct Loaded {
  std::optional<GameTree> game;
  int status = kOk;
};

std::optional<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Parses and validates, printing diagnostics to stderr.
Loaded Load(const std::string& path) {
  Loaded out;
  const std::optional<std::string> text = ReadFile(path);
  if (!text) {
    std::cerr << path << ": file not found or unreadable\n";
    out.status = kIoOrParse;
    return out;
  }
  const fplab::ParseResult parsed = fplab::Parse(*text);
  if (!parsed.ok()) {
    for (const fplab::Diagnostic& d : parsed.diagnostics) {
      std::cerr << path << ":" << d.line << ":" << d.column << ": "
                << fplab::DiagnosticCodeName(d.code) << ": " << d.message
                << "\n";
    }
    out.status = kIoOrParse;
    return out;
  }
  const fplab::ValidationReport report = fplab::Validate(parsed.spec);
  if (!report.ok()) {
    for (const fplab::Violation& v : report.violations) {
      std::cerr << path << ": " << fplab::ViolationCodeName(v.code);
      for (const std::string& id : v.ids) std::cerr << " " << id;
      std::cerr << ": " << v.message << "\n";
    }
    out.status = kSemantic;
    return out;
  }
  out.game = GameTree::FromSpec(parsed.spec);
  return out;
}

std::string ProfileLabel(const GameTree& game, const fplab::PureMoves& moves) {
  std::string out;
  for (int h = 0; h < game.num_infosets(); ++h) {
    if (!out.empty()) out += ' ';
    out += game.infoset(h).id + "=" + game.infoset(h).moves[moves[h]];
  }
  return out;
}

json PayoffJson(const GameTree& game, int terminal) {
  if (game.identical_interest()) return game.payoff(terminal, 0);
  std::span<const double> u = game.payoffs(terminal);
  return std::vector<double>(u.begin(), u.end());
}

int CmdValidate(const std::string& path) {
  const Loaded loaded = Load(path);
  if (loaded.status == kOk) std::cout << path << ": ok\n";
  return loaded.status;
}

int CmdInfo(const std::string& path, double rho, bool as_json) {
  const Loaded loaded = Load(path);
  if (!loaded.game) return loaded.status;
  const GameTree& game = *loaded.game;
  json j;
  j["players"] = game.num_players();
  j["infosets"] = game.num_infosets();
  j["terminals"] = game.terminals().size();
  j["identical_interest"] = game.identical_interest();
  j["lemma1_class"] = fplab::CheckLemma1Class(game);
  j["rho"] = rho;
  if (game.identical_interest()) {
    try {
      const fplab::GameMetrics m = fplab::ComputeMetrics(game, rho);
      j["l_max"] = m.l_max;
      j["u_max"] = m.u_max;
      j["delta_min"] = m.delta_min;
      j["distinct_payoffs"] = m.distinct_payoffs;
      j["k_max"] = m.k_max ? json(*m.k_max) : json("n/a");
    } catch (const fplab::GameError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kConfig;
    }
  } else {
    for (const char* key : {"l_max", "u_max", "delta_min", "k_max"}) {
      j[key] = "n/a";
    }
    j["distinct_payoffs"] = "n/a";
  }
  if (as_json) {
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  for (const char* key :
       {"players", "infosets", "terminals", "identical_interest",
        "lemma1_class", "rho", "l_max", "u_max", "delta_min",
        "distinct_payoffs", "k_max"}) {
    const json& v = j[key];
    std::cout << key << " = "
              << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
  return kOk;
}

int CmdEquilibria(const std::string& path, double eps, uint64_t limit,
                  bool as_json) {
  const Loaded loaded = Load(path);
  if (!loaded.game) return loaded.status;
  const GameTree& game = *loaded.game;
  std::vector<fplab::PureMoves> equilibria;
  try {
    equilibria = fplab::BruteForcePureEquilibria(game, eps, limit);
  } catch (const fplab::GameError& e) {
    std::cerr << fplab::ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return kSemantic;
  }
  json list = json::array();
  for (const fplab::PureMoves& moves : equilibria) {
    const int z = fplab::PlayOut(game, moves);
    json entry;
    for (int h = 0; h < game.num_infosets(); ++h) {
      entry["profile"][game.infoset(h).id] = game.infoset(h).moves[moves[h]];
    }
    entry["terminal"] = game.node(z).id;
    entry["payoff"] = PayoffJson(game, z);
    list.push_back(entry);
    if (!as_json) {
      std::cout << ProfileLabel(game, moves) << " -> " << game.node(z).id
                << " payoff " << PayoffJson(game, z).dump() << "\n";
    }
  }
  if (as_json) std::cout << list.dump(2) << "\n";
  return kOk;
}

int WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    return kIoOrParse;
  }
  out << text;
  return out ? kOk : kIoOrParse;
}

struct RunArgs {
  fplab::RunConfig config;
  std::string mode = "classic";
  std::string tie_break = "lexicographic";
  std::vector<std::string> alpha_at;
  bool revisit_column = false;
};

int CmdRun(RunArgs& args) {
  fplab::RunConfig& config = args.config;
  const std::optional<fplab::Mode> mode = fplab::ParseMode(args.mode);
  if (!mode) {
    std::cerr << "config error: mode: expected classic or ifm\n";
    return kConfig;
  }
  config.mode = *mode;
  const std::optional<fplab::TieBreak> tie =
      fplab::ParseTieBreak(args.tie_break);
  if (!tie) {
    std::cerr << "config error: tie_break: expected lexicographic or uniform\n";
    return kConfig;
  }
  config.tie_break = *tie;
  for (const std::string& item : args.alpha_at) {
    const size_t eq = item.find('=');
    double value = 0.0;
    try {
      if (eq == std::string::npos) throw std::invalid_argument(item);
      size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      std::cerr << "config error: alpha: expected <infoset>=<value>, got '"
                << item << "'\n";
      return kConfig;
    }
    config.alpha_overrides[item.substr(0, eq)] = value;
  }
  try {
    fplab::ValidateConfig(config);
  } catch (const fplab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }

  const Loaded loaded = Load(config.game_path);
  if (!loaded.game) return loaded.status;
  const GameTree& game = *loaded.game;
  std::vector<fplab::ReplicationResult> results;
  try {
    results = fplab::RunReplications(game, config);
  } catch (const fplab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const fplab::GameError& e) {
    std::cerr << fplab::ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return kSemantic;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kIoOrParse;
  }

  if (!config.trace_prefix.empty()) {
    fplab::CsvColumns columns;
    columns.max_gap = config.gap_every > 0;
    columns.event_flags = config.annotate_events;
    columns.revisit_ratio = args.revisit_column;
    for (const fplab::ReplicationResult& r : results) {
      const std::string path = config.trace_prefix + "_" +
                               std::to_string(r.replication) + ".csv";
      if (int status = WriteText(path, fplab::TraceCsv(game, r.trace, columns));
          status != kOk) {
        return status;
      }
    }
  }
  const std::string summary =
      fplab::SummaryJson(game, config, results).dump(2) + "\n";
  if (config.summary_path.empty()) {
    std::cout << summary;
    return kOk;
  }
  return WriteText(config.summary_path, summary);
}

struct DiagnoseArgs {
  std::string game_path;
  std::string snapshot_path;
  double rho = 0.5;
  double alpha = 0.5;
  double tol = fplab::kBestReplyTolerance;
  int cap = fplab::kDefaultLockCap;
};

int CmdDiagnose(const DiagnoseArgs& args) {
  if (!(args.rho > 0.0 && args.rho < 1.0) ||
      !(args.alpha > 0.0 && args.alpha < 1.0) || args.cap < 1) {
    std::cerr << "config error: rho and alpha must lie in (0,1), cap >= 1\n";
    return kConfig;
  }
  const Loaded loaded = Load(args.game_path);
  if (!loaded.game) return loaded.status;
  const GameTree& game = *loaded.game;
  json j;
  try {
    fplab::ProfileFile snapshot;
    if (!args.snapshot_path.empty()) {
      snapshot = fplab::LoadProfileFile(game, args.snapshot_path);
    } else {
      snapshot.profile = fplab::UniformProfile(game);
    }
    const fplab::BehaviorProfile& f = snapshot.profile;
    const std::vector<double> gaps = fplab::AllOptimalityGaps(game, f);
    for (int h = 0; h < game.num_infosets(); ++h) {
      j["gaps"][game.infoset(h).id] = gaps[h];
    }
    const fplab::GameMetrics metrics = fplab::ComputeMetrics(game, args.rho);
    j["rho"] = args.rho;
    j["alpha"] = args.alpha;
    j["k_max"] = metrics.k_max ? json(*metrics.k_max) : json("n/a");
    if (metrics.k_max) {
      const std::vector<double> alpha(game.num_infosets(), args.alpha);
      j["p_min"] = fplab::PMin(game, alpha, metrics);
      j["log_p_min"] = fplab::LogPMin(game, alpha, metrics);
    }
    if (snapshot.terminal) {
      const int z = *snapshot.terminal;
      const fplab::LockReport lock =
          fplab::LockLevel(game, f, z, args.rho, args.tol, args.cap);
      j["terminal"] = game.node(z).id;
      j["lock_level"] = lock.level.at_least
                            ? json(">=" + std::to_string(lock.level.value))
                            : json(lock.level.value);
      j["limit_locked"] = lock.limit_locked;
      if (metrics.k_max) {
        j["k_t"] = fplab::KT(game, f, z, metrics);
        const fplab::BoundedCount m =
            fplab::ForcedRepetitions(game, f, z, metrics, args.tol, args.cap);
        j["m_t"] = m.at_least ? json(">=" + std::to_string(m.value))
                              : json(m.value);
      }
    }
  } catch (const fplab::GameError& e) {
    std::cerr << fplab::ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return kSemantic;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kIoOrParse;
  }
  std::cout << j.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fictitious play laboratory for extensive-form games"};
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "Parse and validate a game");
  validate->add_option("game", validate_path, "Game file")->required();

  std::string info_path;
  double info_rho = 0.5;
  bool info_json = false;
  CLI::App* info = app.add_subcommand("info", "Print game constants");
  info->add_option("game", info_path, "Game file")->required();
  info->add_option("--rho", info_rho, "Fading-memory step")
      ->check(CLI::Range(0.0, 1.0));
  info->add_flag("--json", info_json, "Machine-readable output");

  std::string eq_path;
  double eq_eps = fplab::kBestReplyTolerance;
  uint64_t eq_limit = fplab::kDefaultProfileLimit;
  bool eq_json = false;
  CLI::App* equilibria =
      app.add_subcommand("equilibria", "List pure Nash equilibria");
  equilibria->add_option("game", eq_path, "Game file")->required();
  equilibria->add_flag("--pure", "Pure profiles only (the only mode)");
  equilibria->add_option("--eps", eq_eps, "Deviation tolerance");
  equilibria->add_option("--limit", eq_limit, "Maximum pure profile count");
  equilibria->add_flag("--json", eq_json, "Machine-readable output");

  RunArgs run_args;
  fplab::RunConfig& rc = run_args.config;
  double run_rho = 0.0;
  double run_alpha = 0.0;
  CLI::App* run = app.add_subcommand("run", "Run fictitious play");
  run->add_option("game", rc.game_path, "Game file")->required();
  run->add_option("--mode", run_args.mode, "classic | ifm");
  run->add_option("--rounds", rc.rounds, "Rounds per replication");
  run->add_option("--seed", rc.seed, "Master seed");
  CLI::Option* rho_opt = run->add_option("--rho", run_rho, "ifm step size");
  CLI::Option* alpha_opt =
      run->add_option("--alpha", run_alpha, "ifm inertia at every infoset");
  run->add_option("--alpha-at", run_args.alpha_at,
                  "ifm inertia override, <infoset>=<value>");
  run->add_option("--tie-break", run_args.tie_break,
                  "lexicographic | uniform");
  run->add_option("--init", rc.init, "uniform or a profile JSON file");
  run->add_option("--gap-every", rc.gap_every,
                  "Record gaps every N rounds (0 disables)");
  run->add_option("--replications", rc.replications, "Replication count");
  run->add_option("--threads", rc.threads, "Worker threads (0: all cores)");
  run->add_option("--absorption-window", rc.absorption_window,
                  "Final constant rounds counted as absorption");
  run->add_flag("--events", rc.annotate_events, "Annotate event flags (ifm)");
  run->add_option("--lock-cap", rc.lock_cap, "Lock-level iteration cap");
  run->add_option("--trace-prefix", rc.trace_prefix,
                  "Write <prefix>_<r>.csv per replication");
  run->add_option("--summary", rc.summary_path,
                  "Summary JSON path (default: stdout)");
  run->add_flag("--revisit-column", run_args.revisit_column,
                "Add revisit ratios to traces");

  DiagnoseArgs diag;
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "Inspect a profile snapshot");
  diagnose->add_option("game", diag.game_path, "Game file")->required();
  diagnose->add_option("--snapshot", diag.snapshot_path,
                       "JSON {profile, terminal?} (default: uniform)");
  diagnose->add_option("--rho", diag.rho, "Fading-memory step");
  diagnose->add_option("--alpha", diag.alpha, "Inertia at every infoset");
  diagnose->add_option("--tol", diag.tol, "Best-reply tolerance");
  diagnose->add_option("--cap", diag.cap, "Lock-level iteration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  if (*validate) return CmdValidate(validate_path);
  if (*info) return CmdInfo(info_path, info_rho, info_json);
  if (*equilibria) return CmdEquilibria(eq_path, eq_eps, eq_limit, eq_json);
  if (*run) {
    if (rho_opt->count() > 0) rc.rho = run_rho;
    if (alpha_opt->count() > 0) rc.alpha = run_alpha;
    return CmdRun(run_args);
  }
  if (*diagnose) return CmdDiagnose(diag);
  return kConfig;
}
