#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "symbrk/generators.hpp"
#include "symbrk/mm.hpp"
#include "symbrk/verify.hpp"

using namespace symbrk;

namespace {

TrialConfig seeded(std::uint64_t seed) {
  TrialConfig cfg;
  cfg.seed = seed;
  return cfg;
}

std::vector<Edge> sample_match(const Graph& g, const VertexSet& u1, const VertexSet& u2, const Matching& m,
                               std::uint64_t seed) {
  TrialContext ctx(seed, 1000);
  auto e = match_round(g, u1, u2, m, ctx);
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST(MmParams, IdentityAndMonotonicity) {
  for (std::size_t delta : {2u, 7u, 64u, 500u})
    for (std::size_t n : {16u, 1024u, 16384u}) {
      MmParams p = MmParams::make(delta, n, Constants{});
      for (std::size_t i = 0; i < 40; ++i) {
        auto s = p.stage(i);
        EXPECT_NEAR(s.nu, s.delta * s.tau / 2.0, 1e-9 * s.nu);
        auto t = p.stage(i + 1);
        EXPECT_LT(t.delta, s.delta);
        EXPECT_LT(t.tau, s.tau);
        EXPECT_LT(t.nu, s.nu);
        EXPECT_NEAR(s.delta / t.delta, std::sqrt(8.0 / 7.0), 1e-12);
        EXPECT_NEAR(s.tau / t.tau, std::sqrt(8.0 / 7.0), 1e-12);
      }
    }
}

TEST(MmParams, DeltaSixtyFourExample) {
  MmParams p{64.0, std::exp(1.0), 1.0, 4.0, std::sqrt(8.0 / 7.0)};
  auto s = p.stage(0);
  EXPECT_NEAR(s.delta, 64.0, 1e-9);
  EXPECT_NEAR(s.tau, 128.0, 1e-9);
  EXPECT_NEAR(s.nu, 4096.0, 1e-9);
}

TEST(MmParams, StageCount) {
  Constants k;
  EXPECT_EQ(MmParams::make(0, 100, k).stage_count(), 0u);
  EXPECT_EQ(MmParams::make(1, 100, k).stage_count(), 8u);
  EXPECT_EQ(MmParams::make(32, 100, k).stage_count(), 20u);
  EXPECT_EQ(MmParams::make(100, 100, k).stage_count(), static_cast<std::size_t>(std::ceil(4 * std::log2(100.0))));
}

TEST(MatchRound, SingleEdgeAlwaysMatches) {
  Graph g = make_path(2);
  VertexSet a = VertexSet::of(2, std::vector<Vertex>{0}), b = VertexSet::of(2, std::vector<Vertex>{1});
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    EXPECT_EQ(sample_match(g, a, b, Matching(2), seed), (std::vector<Edge>{{0, 1}}));
}

TEST(MatchRound, MatchedVerticesExcluded) {
  Graph g = make_disjoint_edges(2);  // (0,1), (2,3)
  VertexSet u1 = VertexSet::of(4, std::vector<Vertex>{0, 2}), u2 = VertexSet::of(4, std::vector<Vertex>{1, 3});
  Matching m(4);
  m.add(0, 1);
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    EXPECT_EQ(sample_match(g, u1, u2, m, seed), (std::vector<Edge>{{2, 3}}));
}

TEST(MatchRound, ChargesThreeRounds) {
  Graph g = make_path(2);
  TrialContext ctx(1, 100);
  VertexSet all(2, true);
  match_round(g, all, all, Matching(2), ctx);
  EXPECT_EQ(ctx.trace().total_rounds(), 3u);
}

TEST(MatchRound, TriangleMatchesEnumeration) {
  Graph g = make_clique(3);
  auto exact = oracle::match_distribution(g, {true, true, true}, {true, true, true});
  double total = 0;
  for (auto& [k, p] : exact) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
  // Hand check: the empty outcome needs every F2 bit pattern to avoid 0 -> 1.
  EXPECT_EQ(exact.size(), 4u);
  const std::size_t samples = 100000;
  std::map<std::vector<Edge>, std::size_t> seen;
  VertexSet all(3, true);
  for (std::size_t s = 0; s < samples; ++s) ++seen[sample_match(g, all, all, Matching(3), s)];
  EXPECT_LE(oracle::chi_square_z(exact, seen, samples), 3.0);
  for (auto& [k, p] : exact) {
    auto it = seen.find(k);
    EXPECT_LE(oracle::binomial_z(it == seen.end() ? 0 : it->second, samples, p), 4.0);
  }
}

TEST(MatchRound, AdditionsAreDisjointFromEachOtherAndM) {
  Graph g = gen_degree_capped(300, 6, 1.0, 4);
  SplitMix64 rng(9);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    VertexSet u1(g.n()), u2(g.n());
    for (Vertex v = 0; v < g.n(); ++v) {
      if (rng.unit() < 0.6) u1.insert(v);
      if (rng.unit() < 0.6) u2.insert(v);
    }
    Matching m(g.n());
    for (auto [a, b] : sample_match(g, u1, u2, m, seed + 1000)) m.add(a, b);
    for (auto [a, b] : sample_match(g, u1, u2, m, seed)) {
      EXPECT_TRUE(g.has_edge(a, b));
      EXPECT_FALSE(m.is_matched(a));
      EXPECT_FALSE(m.is_matched(b));
      m.add(a, b);
    }
    EXPECT_TRUE(check_matching(g, m).valid);
  }
}

TEST(MmPhase1, EmptyGraph) {
  Graph g = make_empty(10);
  TrialContext ctx(1, 100);
  auto r = mm_phase1(g, MmParams::make(0, 10, Constants{}), ctx);
  EXPECT_EQ(r.matching.size(), 0u);
  EXPECT_EQ(r.residual.size(), 10u);
  EXPECT_EQ(ctx.trace().total_rounds(), 0u);
}

TEST(MmPhase1, PerfectMatchingGraph) {
  Graph g = make_disjoint_edges(512);
  std::size_t matched = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    TrialContext ctx(seed, 100000);
    auto r = mm_phase1(g, MmParams::make(1, g.n(), Constants{}), ctx);
    matched += r.matching.size();
    EXPECT_TRUE(check_matching(g, r.matching).valid);
  }
  EXPECT_GE(static_cast<double>(matched) / (100.0 * 512), 0.99);
}

TEST(MmPhase1, ResidualIsUnmatchedSet) {
  Graph g = gen_degree_capped(500, 12, 1.0, 3);
  TrialContext ctx(3, 100000);
  auto r = mm_phase1(g, MmParams::make(g.max_degree(), g.n(), Constants{}), ctx);
  for (Vertex v = 0; v < g.n(); ++v) EXPECT_EQ(r.residual.contains(v), !r.matching.is_matched(v));
  EXPECT_LE(r.stages_run, r.stages_scheduled);
  EXPECT_EQ(ctx.trace().total_rounds(), 6 * r.stages_scheduled);
  // Gauge of matched vertices never decreases.
  std::int64_t last = 0;
  for (const auto& rec : ctx.trace().records()) {
    EXPECT_GE(rec.gauges.matched, last);
    last = rec.gauges.matched;
  }
}

TEST(MaximalMatching, Star) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto r = maximal_matching(make_star(9), seeded(seed));
    EXPECT_EQ(r.matching.size(), 1u);
    EXPECT_TRUE(check_matching(make_star(9), r.matching).maximal);
  }
}

TEST(MaximalMatching, PathOfFour) {
  Graph g = make_path(4);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto e = maximal_matching(g, seeded(seed)).matching.edges();
    EXPECT_TRUE(e == (std::vector<Edge>{{0, 1}, {2, 3}}) || e == (std::vector<Edge>{{1, 2}}));
  }
}

TEST(MaximalMatching, DegreeCappedVerifies) {
  Graph g = gen_degree_capped(4096, 32, 1.0, 1);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto r = maximal_matching(g, seeded(seed));
    auto c = check_matching(g, r.matching);
    EXPECT_TRUE(c.valid);
    EXPECT_TRUE(c.maximal);
    EXPECT_EQ(r.trace.total_rounds(), r.trace.rounds_in("phase1") + r.trace.rounds_in("phase2"));
    EXPECT_EQ(r.trace.metric("mm.phase2.oversized_components", -1), 0.0);
  }
}

TEST(MaximalMatching, Deterministic) {
  Graph g = gen_degree_capped(1000, 10, 1.0, 2);
  auto a = maximal_matching(g, seeded(5));
  auto b = maximal_matching(g, seeded(5));
  EXPECT_EQ(a.matching.edges(), b.matching.edges());
  EXPECT_EQ(a.trace.to_json().dump(), b.trace.to_json().dump());
}

TEST(MaximalMatching, DecayProbeRecordsSamples) {
  Graph g = gen_degree_capped(1024, 64, 1.0, 1);
  MmDecayProbe probe;
  auto r = maximal_matching(g, seeded(1), &probe);
  EXPECT_TRUE(check_matching(g, r.matching).maximal);
  ASSERT_FALSE(probe.samples.empty());
  for (const auto& s : probe.samples) {
    EXPECT_GT(s.qualifying, 0u);
    EXPECT_GE(s.max_ratio, 0.0);
  }
}

TEST(MmPhase1, ScheduleLengthIsFixed) {
  // Two Match calls of 3 rounds per stage, ceil(4 * max(log2 delta, 2)) stages.
  for (std::size_t delta : {4, 16, 64}) {
    Graph g = gen_degree_capped(1000, delta, 1.0, 5);
    ASSERT_EQ(g.max_degree(), delta);
    auto r = maximal_matching(g, [] {
      TrialConfig c;
      c.seed = 5;
      return c;
    }());
    const double stages = std::ceil(4.0 * std::max(std::log2(static_cast<double>(delta)), 2.0));
    EXPECT_EQ(r.trace.rounds_in("phase1"), static_cast<std::uint64_t>(6 * stages)) << delta;
  }
}
