#include <gtest/gtest.h>

#include "symbrk/generators.hpp"
#include "symbrk/metrics.hpp"

using namespace symbrk;

TEST(ForestUnion, Examples) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_EQ(girth(gen_forest_union(5, 1, seed)), Girth());
    EXPECT_LE(gen_forest_union(2, 3, seed).m(), 1u);
  }
  EXPECT_LE(degeneracy(gen_forest_union(100, 3, 7)), 5u);
}

TEST(ForestUnion, DegeneracyBound) {
  for (std::size_t lambda = 1; lambda <= 4; ++lambda)
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
      EXPECT_LE(degeneracy(gen_forest_union(500, lambda, seed)), 2 * lambda - 1);
}

TEST(ForestUnion, SubsetDensity) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const std::size_t lambda = 3;
    Graph g = gen_forest_union(200, lambda, seed);
    SplitMix64 rng(seed * 977);
    for (int trial = 0; trial < 1000; ++trial) {
      const double keep = 0.05 + 0.9 * rng.unit();
      VertexSet s(g.n());
      for (Vertex v = 0; v < g.n(); ++v)
        if (rng.unit() < keep) s.insert(v);
      if (s.empty()) continue;
      std::size_t inside = 0;
      for (auto [u, v] : g.edges()) inside += s.contains(u) && s.contains(v);
      EXPECT_LE(inside, lambda * (s.size() - 1));
    }
  }
}

TEST(ForestUnion, DeterministicPerSeed) {
  EXPECT_EQ(gen_forest_union(300, 2, 5).edges(), gen_forest_union(300, 2, 5).edges());
  EXPECT_NE(gen_forest_union(300, 2, 5).edges(), gen_forest_union(300, 2, 6).edges());
}

TEST(DegreeCapped, Examples) {
  EXPECT_EQ(gen_degree_capped(10, 0, 1.0, 3).m(), 0u);
  EXPECT_LE(gen_degree_capped(4, 3, 1.0, 3).m(), 6u);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) EXPECT_LE(gen_degree_capped(2048, 32, 1.0, seed).max_degree(), 32u);
}

TEST(DegreeCapped, ReachesNearTarget) {
  Graph g = gen_degree_capped(4096, 32, 1.0, 1);
  EXPECT_GE(g.max_degree(), 30u);
  EXPECT_GT(g.m(), 4096u * 32 / 2 * 9 / 10);
}

TEST(HighGirth, Examples) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Graph g = gen_high_girth(7, 2, seed);
    Girth gg = girth(g);
    EXPECT_TRUE(!gg || *gg == 7);
  }
  Graph g = gen_high_girth(500, 4, 1);
  EXPECT_LE(g.max_degree(), 4u);
  Girth gg = girth(g);
  EXPECT_TRUE(!gg || *gg > 6);
}

TEST(HighGirth, AllSeeds) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Graph g = gen_high_girth(800, 5, seed);
    Girth gg = girth(g);
    EXPECT_TRUE(!gg || *gg > 6) << "seed " << seed;
    EXPECT_LE(g.max_degree(), 5u);
  }
}

TEST(HubForest, HasHighDegreeHubs) {
  Graph g = gen_hub_forest_union(2000, 2, 4, 1);
  EXPECT_LE(degeneracy(g), 3u);
  EXPECT_GT(g.max_degree(), 100u);
}

TEST(Fixtures, Shapes) {
  EXPECT_EQ(make_petersen().m(), 15u);
  EXPECT_EQ(make_star(9).degree(0), 9u);
  EXPECT_EQ(make_clique(5).m(), 10u);
  EXPECT_EQ(make_disjoint_edges(4).max_degree(), 1u);
  EXPECT_EQ(make_cycle(6).m(), 6u);
}
