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

#include <cmath>
#include <random>

#include "doctest.h"
#include "test_games.h"

namespace fplab {
namespace {

BehaviorProfile CoordProfile(const GameTree& g, double pA, double pa) {
  return ProfileFromMap(g, {{"h1", {pA, 1 - pA}}, {"h2", {pa, 1 - pa}}});
}

TEST_CASE("F_m on coord") {
  const GameTree g = testing::Coord();
  const int zAa = g.TerminalIndex("zAa");
  const BehaviorProfile f = CoordProfile(g, 0.5, 0.3);
  CHECK(ApplyF(g, f, zAa, 2, 0.5)[0][0] == 0.875);
  CHECK(ApplyF(g, f, zAa, 0, 0.5) == f);
  CHECK_THROWS_AS(ApplyF(g, f, g.root(), 1, 0.5), GameError);
}

TEST_CASE("F_m matches its closed form and composes") {
  std::mt19937_64 rng(31);
  for (const char* name : {"coord", "perfect_info_chain", "three_choice"}) {
    const GameTree g = testing::LoadCorpusGame(name);
    for (int trial = 0; trial < 50; ++trial) {
      const BehaviorProfile f = testing::RandomProfile(g, rng);
      const int z = g.terminals()[rng() % g.terminals().size()];
      const double rho = 0.05 + 0.9 * (rng() >> 11) * 0x1.0p-53;
      const int m = 1 + static_cast<int>(rng() % 5);
      const int k = 1 + static_cast<int>(rng() % 5);
      const BehaviorProfile fm = ApplyF(g, f, z, m, rho);
      const double keep = std::pow(1 - rho, m);
      std::vector<bool> on_path(g.num_infosets(), false);
      for (const PathStep& s : g.path(z)) {
        on_path[s.infoset] = true;
        for (int a = 0; a < g.num_moves(s.infoset); ++a) {
          const double expected = a == s.move
                                      ? 1 - keep * (1 - f[s.infoset][a])
                                      : keep * f[s.infoset][a];
          CHECK(std::abs(fm[s.infoset][a] - expected) <= 1e-12);
        }
      }
      for (int h = 0; h < g.num_infosets(); ++h) {
        if (!on_path[h]) CHECK(fm[h] == f[h]);
      }
      CHECK(ApplyF(g, f, z, m + 1, rho) == ApplyF(g, fm, z, 1, rho));
      const BehaviorProfile a = ApplyF(g, f, z, m + k, rho);
      const BehaviorProfile b = ApplyF(g, ApplyF(g, f, z, k, rho), z, m, rho);
      for (int h = 0; h < g.num_infosets(); ++h) {
        for (int x = 0; x < g.num_moves(h); ++x) {
          CHECK(std::abs(a[h][x] - b[h][x]) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("K_t examples and bound") {
  const GameTree g = testing::Coord();
  const GameMetrics m = ComputeMetrics(g, 0.5);
  const int zAa = g.TerminalIndex("zAa");
  CHECK(KT(g, CoordProfile(g, 0.0, 0.0), zAa, m) == 5);
  CHECK(KT(g, CoordProfile(g, 1.0, 1.0), zAa, m) == 0);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const BehaviorProfile f = testing::RandomProfile(g, rng);
    const int z = g.terminals()[trial % 4];
    const int k = KT(g, f, z, m);
    CHECK(k >= 0);
    CHECK(k <= *m.k_max);
    // After K_t + 1 repetitions every on-path frequency clears the bound.
    const BehaviorProfile after = ApplyF(g, f, z, k + 1, m.rho);
    for (const PathStep& s : g.path(z)) {
      CHECK(after[s.infoset][s.move] >= m.RepetitionThreshold() - 1e-15);
    }
  }
  const GameMetrics flat =
      ComputeMetrics(testing::CoordWithPayoffs(1, 1, 1, 1), 0.5);
  CHECK_THROWS_AS(KT(g, UniformProfile(g), zAa, flat), GameError);
}

TEST_CASE("lock levels") {
  const GameTree g = testing::Coord();
  const int zAa = g.TerminalIndex("zAa");
  const int zAb = g.TerminalIndex("zAb");
  const LockReport near = LockLevel(g, CoordProfile(g, 0.99, 0.99), zAa, 0.5,
                                    kBestReplyTolerance, 50);
  CHECK(near.level.at_least);
  CHECK(near.level.value == 50);
  CHECK(near.limit_locked);

  const LockReport bad =
      LockLevel(g, UniformProfile(g), zAb, 0.5, kBestReplyTolerance, 50);
  CHECK_FALSE(bad.level.at_least);
  CHECK(bad.level.value == 0);
  CHECK_FALSE(bad.limit_locked);

  // Strict pure equilibrium at its own vertex.
  const int zBb = g.TerminalIndex("zBb");
  const BehaviorProfile vertex = ReplaceAlongPath(g, UniformProfile(g), zBb);
  CHECK(LockLevel(g, vertex, zBb, 0.5).limit_locked);
}

TEST_CASE("lock level is monotone in the cap") {
  std::mt19937_64 rng(6);
  const GameTree g = testing::Coord();
  for (int trial = 0; trial < 100; ++trial) {
    const BehaviorProfile f = testing::RandomProfile(g, rng);
    const int z = g.terminals()[trial % 4];
    int64_t previous = -1;
    for (int cap : {1, 5, 20, 80}) {
      const LockReport r = LockLevel(g, f, z, 0.3, kBestReplyTolerance, cap);
      CHECK(r.level.value >= previous);
      if (!r.level.at_least) {
        CHECK(LockLevel(g, f, z, 0.3, kBestReplyTolerance, 200).level ==
              r.level);
      }
      previous = r.level.value;
    }
  }
}

TEST_CASE("forced repetitions") {
  const GameTree g = testing::Coord();
  const GameMetrics m = ComputeMetrics(g, 0.5);
  const BoundedCount locked = ForcedRepetitions(
      g, CoordProfile(g, 0.99, 0.99), g.TerminalIndex("zAa"), m);
  CHECK(locked.at_least);
  CHECK(locked.value == 1000);

  const BehaviorProfile f = CoordProfile(g, 0.01, 0.99);  // B 0.99, a 0.99
  const int zBa = g.TerminalIndex("zBa");
  CHECK(KT(g, f, zBa, m) == 0);
  const BoundedCount finite = ForcedRepetitions(g, f, zBa, m);
  CHECK_FALSE(finite.at_least);
  CHECK(finite.value == 0);
}

TEST_CASE("forced repetitions ignore unreachable parts of the tree") {
  // Coord plus a player-1 outside option that leads to a private subtree.
  const GameTree g = LoadGame(
      "players 2\n"
      "infoset h1 player 1 moves A B C\n"
      "infoset h2 player 2 moves a b\n"
      "infoset h3 player 1 moves x y\n"
      "node nA infoset h2\nnode nB infoset h2\nnode nC infoset h3\n"
      "node r infoset h1\n"
      "edge nA a zAa\nedge nA b zAb\nedge nB a zBa\nedge nB b zBb\n"
      "edge nC x zCx\nedge nC y zCy\n"
      "edge r A nA\nedge r B nB\nedge r C nC\n"
      "terminal zAa payoffs 3\nterminal zAb payoffs 0\n"
      "terminal zBa payoffs 1\nterminal zBb payoffs 2\n"
      "terminal zCx payoffs -1\nterminal zCy payoffs -2\n");
  const GameMetrics m = ComputeMetrics(g, 0.3);
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    BehaviorProfile f = testing::RandomProfile(g, rng);
    f[0] = {f[0][0] / (f[0][0] + f[0][1]), f[0][1] / (f[0][0] + f[0][1]), 0.0};
    const int z = g.TerminalIndex(trial % 2 ? "zAa" : "zBa");
    const BoundedCount base = ForcedRepetitions(g, f, z, m, 1e-9, 200);
    BehaviorProfile g2 = f;
    g2[g.InfosetIndex("h3")] = {0.9, 0.1};
    CHECK(ForcedRepetitions(g, g2, z, m, 1e-9, 200) == base);
  }
}

TEST_CASE("p_min") {
  const GameTree coord = testing::Coord();
  const GameMetrics m = ComputeMetrics(coord, 0.5);
  const double p = PMin(coord, {0.5, 0.5}, m);
  CHECK(std::abs(p - std::ldexp(1.0, -208)) <= 1e-12 * std::ldexp(1.0, -208));
  CHECK(std::abs(LogPMin(coord, {0.5, 0.5}, m) + 208 * std::log(2.0)) <= 1e-9);

  const GameTree single = testing::LoadCorpusGame("single_decision");
  CHECK(PMin(single, {0.5}, ComputeMetrics(single, 0.5)) == std::ldexp(1.0, -16));

  // Larger K_max (smaller rho) shrinks the bound.
  double previous = 1.0;
  for (double rho : {0.9, 0.7, 0.5, 0.3, 0.1}) {
    const double logp = LogPMin(coord, {0.5, 0.5}, ComputeMetrics(coord, rho));
    CHECK(logp <= std::log(previous));
    previous = std::exp(logp);
  }
  CHECK_THROWS_AS(PMin(coord, {0.5}, m), GameError);
}

// Builds a trace over COORD terminals with frozen snapshots.
struct SyntheticRun {
  std::vector<TraceRecord> trace;
  std::vector<StateSnapshot> snapshots;
};

SyntheticRun Synthetic(const GameTree& g, const std::vector<const char*>& zs,
                       const BehaviorProfile& f) {
  SyntheticRun run;
  for (size_t k = 0; k < zs.size(); ++k) {
    TraceRecord r;
    r.round = static_cast<int64_t>(k) + 1;
    r.terminal = g.TerminalIndex(zs[k]);
    r.path = g.path(r.terminal);
    run.trace.push_back(r);
    run.snapshots.push_back({r.round, f, {0, 0}});
  }
  run.snapshots.push_back({static_cast<int64_t>(zs.size()) + 1, f, {0, 0}});
  return run;
}

TEST_CASE("repeat events on synthetic traces") {
  const GameTree g = testing::Coord();
  const GameMetrics m = ComputeMetrics(g, 0.5);
  // f(A) = f(a) = 0.9 gives K_t = 2 at zAa.
  const BehaviorProfile f = CoordProfile(g, 0.9, 0.9);
  REQUIRE(KT(g, f, g.TerminalIndex("zAa"), m) == 2);
  const SyntheticRun same = Synthetic(g, {"zAa", "zAa", "zAa", "zAa"}, f);
  const EventAnnotation a = DetectEvents(g, same.trace, same.snapshots, m);
  CHECK(a.rounds[0].repeat);
  CHECK(a.rounds[1].repeat);
  CHECK_FALSE(a.rounds[2].repeat);  // not enough rounds left

  const SyntheticRun alternating =
      Synthetic(g, {"zAa", "zBb", "zAa", "zBb", "zAa", "zBb"}, f);
  const EventAnnotation b =
      DetectEvents(g, alternating.trace, alternating.snapshots, m);
  for (const RoundEvents& ev : b.rounds) {
    if (ev.k_t >= 1) CHECK_FALSE(ev.repeat);
  }
  CHECK_THROWS_AS(DetectEvents(g, same.trace,
                               std::span(same.snapshots).first(2), m),
                  GameError);
}

TEST_CASE("absorbed ifm runs end in a locked repeat event") {
  const GameTree g = testing::Coord();
  const GameMetrics m = ComputeMetrics(g, 0.3);
  InitOptions o;
  o.mode = Mode::kInertiaFadingMemory;
  o.rho = 0.3;
  o.alpha = std::vector<double>{0.5, 0.5};
  o.moves = std::vector<int>{1, 0};
  LearnerState s = InitState(g, o);
  Rng rng(5);
  RunResult run = Run(g, s, {.rounds = 400, .keep_snapshots = true}, rng);
  const EventAnnotation ann = DetectEvents(g, run.trace, run.snapshots, m);
  ApplyEventFlags(run.trace, ann);
  // Some round in the final constant segment is E with m_t at the cap and is
  // consistent with the lock level of F_{K_t}.
  bool found = false;
  for (size_t k = 0; k < ann.rounds.size(); ++k) {
    const RoundEvents& ev = ann.rounds[k];
    if (!ev.repeat || !ev.m_t) continue;
    const BehaviorProfile gk =
        ApplyF(g, run.snapshots[k].frequencies, run.trace[k].terminal, ev.k_t,
               m.rho);
    const LockReport lock = LockLevel(g, gk, run.trace[k].terminal, m.rho);
    CHECK(lock.level == *ev.m_t);
    if (ev.m_t->at_least) {
      found = true;
      CHECK(ev.repeat_lock);
      CHECK(ev.maximal);
      CHECK((run.trace[k].events & kMaximalEvent) != 0);
    }
  }
  CHECK(found);
  // Every chain respects the improvement and length properties.
  for (const DeviationChain& c : ann.chains) {
    CHECK(c.links() < 12);
    for (size_t l = 0; l + 1 < c.terminals.size(); ++l) {
      bool revisit = false;
      for (size_t j = 0; j <= l; ++j) revisit |= c.terminals[j] == c.terminals[l + 1];
      if (revisit) {
        CHECK(g.payoff(c.terminals[l + 1], 0) > g.payoff(c.terminals[l], 0));
      }
    }
  }
}

TEST_CASE("convergence metrics") {
  const GameTree g = testing::Coord();
  std::vector<TraceRecord> one(1);
  one[0].round = 1;
  one[0].terminal = g.TerminalIndex("zAa");
  const std::vector<ConvergenceSample> s1 = ConvergenceMetrics(one, 10);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].path_stability == 1);
  CHECK_FALSE(s1[0].max_gap);

  LearnerState s = InitState(g, {});
  Rng rng(0);
  const RunResult run = Run(g, s, {.rounds = 100, .gap_every = 10}, rng);
  const std::vector<ConvergenceSample> series = ConvergenceMetrics(run.trace, 10);
  CHECK(series.size() == 10);
  CHECK(series.back().round == 100);
  CHECK(series.back().path_stability == 100);  // (A, a) from the start
  REQUIRE(series.back().max_gap);
}

TEST_CASE("revisit ratios") {
  const GameTree g = testing::LoadCorpusGame("perfect_info_chain");
  std::vector<TraceRecord> trace;
  const int h2 = g.InfosetIndex("h2");
  for (int64_t t : {1, 2, 4, 8}) {
    TraceRecord r;
    r.round = t;
    r.path = {{0, 0}, {h2, 0}};
    trace.push_back(r);
  }
  TraceRecord other;
  other.round = 9;
  other.path = {{0, 1}};
  trace.push_back(other);
  CHECK(RevisitRatios(trace, h2) == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(RevisitRatios(trace, 0).back() == 0.125);
}

}  // namespace
}  // namespace fplab
