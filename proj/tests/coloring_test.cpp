#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "symbrk/coloring.hpp"
#include "symbrk/generators.hpp"
#include "symbrk/verify.hpp"

using namespace symbrk;

namespace {

TrialConfig seeded(std::uint64_t seed) {
  TrialConfig cfg;
  cfg.seed = seed;
  return cfg;
}

PartialColoring sample_stage(const Graph& g, const PartialColoring& c, std::uint64_t seed) {
  TrialContext ctx(seed, 1000);
  return color_stage(g, c, ctx);
}

}  // namespace

TEST(ColoringParams, Values) {
  ColoringParams p{1.0, 1024, 32};
  EXPECT_NEAR(p.d_star(), 32 * std::log(1024.0), 1e-9);
  EXPECT_EQ(p.stages(), static_cast<std::size_t>(std::ceil(std::log(32.0) / std::log(16.0 / 15.0))));
  EXPECT_NEAR(p.residual_bound(), 512 * p.d_star(), 1e-6);
  EXPECT_EQ(p.residual_stages(), static_cast<std::size_t>(std::ceil(4 * std::log2(p.d_star()))));
  EXPECT_EQ((ColoringParams{1.0, 10, 0}).stages(), 1u);
  EXPECT_EQ((ColoringParams{1.0, 10, 1}).stages(), 1u);
  EXPECT_GE((ColoringParams{1.0, 10, 2}).stages(), 1u);
}

TEST(AvailablePalette, Examples) {
  Graph g = make_star(3);  // delta = 3, palette 1..4
  PartialColoring c(4, 4);
  EXPECT_EQ(available_palette(g, c, 0), (std::vector<Color>{1, 2, 3, 4}));
  c.assign(1, 1);
  c.assign(2, 3);
  EXPECT_EQ(available_palette(g, c, 0), (std::vector<Color>{2, 4}));
}

TEST(AvailablePalette, AtLeastUncoloredDegreePlusOne) {
  Graph g = gen_degree_capped(300, 8, 1.0, 5);
  const Color k = static_cast<Color>(g.max_degree() + 1);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TrialContext ctx(seed, 1000);
    PartialColoring c(g.n(), k);
    for (int i = 0; i < 3; ++i) c = color_stage(g, c, ctx);
    for (Vertex v = 0; v < g.n(); ++v) {
      if (c.is_colored(v)) continue;
      std::size_t unc = 0;
      for (Vertex u : g.neighbors(v)) unc += c.is_colored(u) ? 0 : 1;
      EXPECT_GE(available_palette(g, c, v).size(), unc + 1);
    }
  }
}

TEST(ColorStage, IsolatedVertexColored) {
  Graph g = make_empty(1);
  for (std::uint64_t seed = 0; seed < 50; ++seed) EXPECT_TRUE(sample_stage(g, PartialColoring(1, 1), seed).is_colored(0));
}

TEST(ColorStage, SingleEdgeHalf) {
  Graph g = make_path(2);
  const std::size_t samples = 100000;
  std::size_t colored = 0;
  for (std::size_t s = 0; s < samples; ++s) colored += sample_stage(g, PartialColoring(2, 2), s).is_colored(0);
  EXPECT_LE(oracle::binomial_z(colored, samples, 0.5), 3.0);
}

TEST(ColorStage, TriangleMatchesEnumeration) {
  Graph g = make_clique(3);
  // Exhaustive: 27 joint picks; a vertex keeps its pick iff neither other vertex picked it.
  std::map<std::vector<Color>, double> exact;
  for (Color a = 1; a <= 3; ++a)
    for (Color b = 1; b <= 3; ++b)
      for (Color c = 1; c <= 3; ++c) {
        std::vector<Color> pick{a, b, c}, out(3, kUncolored);
        for (int v = 0; v < 3; ++v) {
          bool clash = false;
          for (int u = 0; u < 3; ++u) clash = clash || (u != v && pick[u] == pick[v]);
          if (!clash) out[v] = pick[v];
        }
        exact[out] += 1.0 / 27.0;
      }
  EXPECT_NEAR((exact[std::vector<Color>{1, 2, 3}]), 1.0 / 27.0, 1e-15);
  double all_colored = 0;
  for (auto& [k, p] : exact)
    if (std::count(k.begin(), k.end(), kUncolored) == 0) all_colored += p;
  EXPECT_NEAR(all_colored, 6.0 / 27.0, 1e-12);

  const std::size_t samples = 100000;
  std::map<std::vector<Color>, std::size_t> seen;
  for (std::size_t s = 0; s < samples; ++s) ++seen[sample_stage(g, PartialColoring(3, 3), s).colors()];
  EXPECT_LE(oracle::chi_square_z(exact, seen, samples), 3.0);
}

TEST(ColorStage, StaysProperAndMonotone) {
  Graph g = gen_degree_capped(1000, 12, 1.0, 2);
  const Color k = static_cast<Color>(g.max_degree() + 1);
  TrialContext ctx(7, 1000);
  PartialColoring c(g.n(), k);
  for (int i = 0; i < 10; ++i) {
    PartialColoring next = color_stage(g, c, ctx);
    for (Vertex v = 0; v < g.n(); ++v) {
      if (c.is_colored(v)) {
        EXPECT_EQ(next[v], c[v]);
      }
    }
    EXPECT_GE(next.colored_count(), c.colored_count());
    EXPECT_TRUE(check_coloring(g, next, k).proper);
    c = std::move(next);
  }
  EXPECT_EQ(ctx.trace().total_rounds(), 20u);
}

TEST(WeightDiagnostics, NoUncoloredNeighbors) {
  Graph g = make_star(3);
  PartialColoring c(4, 4);
  c.assign(1, 1);
  c.assign(2, 2);
  c.assign(3, 3);
  auto w = weight_diagnostics(g, c, 0);
  EXPECT_EQ(w.palette, (std::vector<Color>{4}));
  for (double x : w.weight) EXPECT_EQ(x, 0.0);
  for (double a : w.availability) EXPECT_EQ(a, 1.0);
}

TEST(WeightDiagnostics, TotalWeightAtMostDegree) {
  Graph g = gen_degree_capped(400, 10, 1.0, 9);
  const Color k = static_cast<Color>(g.max_degree() + 1);
  TrialContext ctx(2, 1000);
  PartialColoring c(g.n(), k);
  c = color_stage(g, c, ctx);
  for (Vertex v = 0; v < g.n(); ++v) {
    if (c.is_colored(v)) continue;
    auto w = weight_diagnostics(g, c, v);
    double total = 0;
    for (std::size_t j = 0; j < w.palette.size(); ++j) {
      total += w.weight[j];
      EXPECT_GE(w.availability[j], std::pow(0.25, w.weight[j]) - 1e-12);
    }
    EXPECT_LE(total, static_cast<double>(w.uncolored_degree) + 1e-9);
  }
}

TEST(WeightDiagnostics, StarAvailabilityMatchesSampling) {
  // Center 0 with k = 4 uncolored leaves; each leaf also has 3 pendant
  // neighbors colored 1, 2, 3, so every leaf palette is {4, 5} (s = 2).
  const std::size_t k = 4, pendants = 3;
  std::vector<Edge> e;
  Vertex next = k + 1;
  for (Vertex leaf = 1; leaf <= k; ++leaf) {
    e.emplace_back(0, leaf);
    for (std::size_t j = 0; j < pendants; ++j) e.emplace_back(leaf, next++);
  }
  Graph g = Graph::from_edges(next, e);
  const Color palette = static_cast<Color>(g.max_degree() + 1);
  ASSERT_EQ(palette, 5u);
  PartialColoring c(g.n(), palette);
  next = k + 1;
  for (Vertex leaf = 1; leaf <= k; ++leaf)
    for (std::size_t j = 0; j < pendants; ++j) c.assign(next++, static_cast<Color>(j + 1));

  auto w = weight_diagnostics(g, c, 0);
  ASSERT_EQ(w.palette, (std::vector<Color>{1, 2, 3, 4, 5}));
  const double closed = std::pow(1.0 - 1.0 / 2.0, static_cast<double>(k));
  EXPECT_NEAR(w.availability[3], closed, 1e-15);
  EXPECT_NEAR(w.availability[4], closed, 1e-15);
  EXPECT_NEAR(w.weight[3], 2.0, 1e-15);
  EXPECT_EQ(w.availability[0], 1.0);

  // Only the leaves pick; color 4 is available to the center iff no leaf took it.
  const std::size_t samples = 100000;
  std::size_t free4 = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    TrialContext ctx(s, 1000);
    detail::ColorRun run(g, ctx, c);
    run.set_eligible([](Vertex v) { return v != 0; });
    run.stage("phase1", "probe");
    PartialColoring out = run.coloring();
    bool taken = false;
    for (Vertex leaf = 1; leaf <= k; ++leaf) taken = taken || out[leaf] == 4;
    free4 += taken ? 0 : 1;
  }
  EXPECT_LE(oracle::binomial_z(free4, samples, closed), 3.0);
}

TEST(DeltaPlusOne, CliqueUsesFullPalette) {
  for (std::size_t n : {2u, 5u, 9u}) {
    Graph g = make_clique(n);
    auto r = delta_plus_one(g, seeded(3));
    auto c = check_coloring(g, r.coloring, static_cast<Color>(n));
    EXPECT_TRUE(c.proper && c.total && c.within_palette);
    std::vector<Color> cols = r.coloring.colors();
    std::sort(cols.begin(), cols.end());
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(cols[i], i + 1);
  }
}

TEST(DeltaPlusOne, EdgelessColoredInFirstStage) {
  Graph g = make_empty(50);
  auto r = delta_plus_one(g, seeded(1));
  ASSERT_FALSE(r.trace.records().empty());
  EXPECT_EQ(r.trace.records().front().gauges.colored, 50);
  // The schedule is fixed: one main stage, then the residual stages of both classes run as no-ops.
  EXPECT_EQ(r.trace.rounds_in("phase1"), 2u);
  ColoringParams p{1.0, 50, 0};
  EXPECT_EQ(r.trace.total_rounds(), 2 * (p.stages() + 2 * p.residual_stages()));
  for (Vertex v = 0; v < 50; ++v) EXPECT_EQ(r.coloring[v], 1u);
}

TEST(DeltaPlusOne, DegreeCappedVerifies) {
  Graph g = gen_degree_capped(4096, 32, 1.0, 1);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ColoringProbe probe;
    auto r = delta_plus_one(g, seeded(seed), &probe);
    auto c = check_coloring(g, r.coloring, 33);
    EXPECT_TRUE(c.proper && c.total && c.within_palette);
    EXPECT_EQ(probe.violations, 0u);
    EXPECT_GT(probe.pairs_checked, 0u);
    EXPECT_EQ(r.trace.metric("coloring.audit_violations", -1), 0.0);
  }
}

TEST(DeltaPlusOne, HighDegreeBranchRuns) {
  // With a small c7 the threshold d* drops below the degree and the high class is used.
  Graph g = gen_degree_capped(2048, 64, 1.0, 2);
  TrialConfig cfg = seeded(1);
  cfg.constants.c7 = 0.01;
  auto r = delta_plus_one(g, cfg);
  EXPECT_TRUE(check_coloring(g, r.coloring, 65).total);
  EXPECT_TRUE(r.trace.has_metric("coloring.split_branch"));
}
