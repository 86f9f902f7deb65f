#include <gtest/gtest.h>

#include "symbrk/detfinish.hpp"
#include "symbrk/generators.hpp"
#include "symbrk/metrics.hpp"

using namespace symbrk;

TEST(GatherAndSolve, SingletonMis) {
  Graph g = make_empty(1);
  std::vector<Vertex> comp{0};
  auto sol = gather_and_solve(g, comp, Problem::MIS);
  EXPECT_EQ(sol.independent, (std::vector<Vertex>{0}));
  EXPECT_EQ(sol.rounds, 2u);
  EXPECT_EQ(sol.leader, 0u);
}

TEST(GatherAndSolve, PathOfThreeMatching) {
  Graph g = make_path(3);
  std::vector<Vertex> comp{0, 1, 2};
  auto sol = gather_and_solve(g, comp, Problem::MM);
  // Vertex 0 has the smallest id and takes its only neighbor.
  EXPECT_EQ(sol.matching, (std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(sol.rounds, 2u * 2 + 2);
  // With the middle vertex holding the smallest id, it takes its lowest-id neighbor.
  std::vector<Edge> e{{0, 1}, {1, 2}};
  Graph h = Graph::from_edges(3, e, {20, 5, 10});
  auto sol2 = gather_and_solve(h, comp, Problem::MM);
  EXPECT_EQ(sol2.matching, (std::vector<Edge>{{1, 2}}));
  EXPECT_EQ(sol2.leader, 1u);
}

TEST(GatherAndSolve, TriangleColoringRespectsBan) {
  Graph g = make_clique(3);
  std::vector<Vertex> comp{0, 1, 2};
  ColoringProblem cp{3, {{1}, {}, {}}};
  auto sol = gather_and_solve(g, comp, Problem::Coloring, &cp);
  ASSERT_EQ(sol.colors.size(), 3u);
  std::vector<std::uint32_t> c(3);
  for (auto [v, q] : sol.colors) c[v] = q;
  EXPECT_NE(c[0], 1u);
  EXPECT_NE(c[0], c[1]);
  EXPECT_NE(c[1], c[2]);
  EXPECT_NE(c[0], c[2]);
  for (auto q : c) EXPECT_TRUE(q >= 1 && q <= 3);
  // Greedy by id: 0 gets 2, 1 gets 1, 2 gets 3.
  EXPECT_EQ(c, (std::vector<std::uint32_t>{2, 1, 3}));
}

TEST(GatherAndSolve, DisconnectedInputRejected) {
  Graph g = make_path(3);
  std::vector<Vertex> comp{0, 2};
  EXPECT_THROW(gather_and_solve(g, comp, Problem::MIS), PreconditionError);
}

TEST(GatherAndSolve, ChargeMatchesIndependentDiameter) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Graph g = gen_degree_capped(300, 3, 0.6, seed);
    auto rep = components(g, VertexSet(g.n(), true));
    GatherSolver solver(g);
    for (const auto& c : rep.components) {
      auto sol = solver.solve(c.vertices, Problem::MIS);
      EXPECT_EQ(sol.rounds, 2 * c.induced_diameter + 2);
      EXPECT_EQ(sol.weak_diameter, c.weak_diameter);
    }
  }
}

TEST(GatherAndSolve, OutputsValidAndMaximalWithinComponent) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Graph g = gen_degree_capped(200, 4, 1.0, seed);
    auto rep = components(g, VertexSet(g.n(), true));
    GatherSolver solver(g);
    for (const auto& c : rep.components) {
      VertexSet in(g.n());
      for (Vertex v : c.vertices) in.insert(v);

      auto mis = solver.solve(c.vertices, Problem::MIS);
      VertexSet joined = VertexSet::of(g.n(), mis.independent);
      for (Vertex v : c.vertices) {
        bool covered = joined.contains(v);
        for (Vertex u : g.neighbors(v)) {
          EXPECT_FALSE(joined.contains(v) && joined.contains(u));
          covered = covered || joined.contains(u);
        }
        EXPECT_TRUE(covered);
      }

      auto mm = solver.solve(c.vertices, Problem::MM);
      std::vector<int> used(g.n(), 0);
      for (auto [u, v] : mm.matching) {
        EXPECT_TRUE(g.has_edge(u, v));
        EXPECT_EQ(used[u]++, 0);
        EXPECT_EQ(used[v]++, 0);
      }
      for (Vertex v : c.vertices)
        for (Vertex u : g.neighbors(v)) EXPECT_FALSE(in.contains(u) && !used[u] && !used[v]);

      ColoringProblem cp{static_cast<std::uint32_t>(g.max_degree() + 1),
                         std::vector<std::vector<std::uint32_t>>(c.vertices.size())};
      auto col = solver.solve(c.vertices, Problem::Coloring, &cp);
      std::vector<std::uint32_t> color(g.n(), 0);
      for (auto [v, q] : col.colors) color[v] = q;
      for (Vertex v : c.vertices) {
        EXPECT_GE(color[v], 1u);
        EXPECT_LE(color[v], cp.palette);
        for (Vertex u : g.neighbors(v)) EXPECT_NE(color[u], color[v]);
      }
    }
  }
}

TEST(GatherAndSolve, Deterministic) {
  Graph g = gen_degree_capped(100, 5, 1.0, 3);
  auto rep = components(g, VertexSet(g.n(), true));
  const auto& c = rep.components.front();
  auto a = gather_and_solve(g, c.vertices, Problem::MM);
  auto b = gather_and_solve(g, c.vertices, Problem::MM);
  EXPECT_EQ(a.matching, b.matching);
}
