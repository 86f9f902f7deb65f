#include <gtest/gtest.h>

#include <numeric>

#include "symbrk/generators.hpp"
#include "symbrk/graph.hpp"

using namespace symbrk;

namespace {

ParseError::Kind parse_kind(const std::string& text) {
  try {
    load_graph(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a parse error for: " << text;
  return ParseError::Kind::Malformed;
}

}  // namespace

TEST(LoadGraph, SingleEdge) {
  Graph g = load_graph("2 1\n0 1");
  EXPECT_EQ(g.n(), 2u);
  EXPECT_EQ(g.m(), 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 0));
}

TEST(LoadGraph, IsolatedVertex) {
  Graph g = load_graph("1 0");
  EXPECT_EQ(g.n(), 1u);
  EXPECT_EQ(g.m(), 0u);
  EXPECT_EQ(g.degree(0), 0u);
}

TEST(LoadGraph, TriangleAdjacency) {
  Graph g = load_graph("3 3\n0 1\n1 2\n0 2\n");
  ASSERT_EQ(g.m(), 3u);
  for (Vertex v = 0; v < 3; ++v) EXPECT_EQ(g.degree(v), 2u);
  EXPECT_EQ(std::vector<Vertex>(g.neighbors(0).begin(), g.neighbors(0).end()), (std::vector<Vertex>{1, 2}));
  EXPECT_EQ(std::vector<Vertex>(g.neighbors(1).begin(), g.neighbors(1).end()), (std::vector<Vertex>{0, 2}));
  EXPECT_EQ(std::vector<Vertex>(g.neighbors(2).begin(), g.neighbors(2).end()), (std::vector<Vertex>{0, 1}));
}

TEST(LoadGraph, DistinctErrorKinds) {
  EXPECT_EQ(parse_kind("2 1\n0 x"), ParseError::Kind::Malformed);
  EXPECT_EQ(parse_kind("2 1\n0"), ParseError::Kind::Malformed);
  EXPECT_EQ(parse_kind("two 1\n0 1"), ParseError::Kind::Malformed);
  EXPECT_EQ(parse_kind("3 2\n0 1"), ParseError::Kind::Malformed);
  EXPECT_EQ(parse_kind("2 1\n1 1"), ParseError::Kind::SelfLoop);
  EXPECT_EQ(parse_kind("3 2\n0 1\n1 0"), ParseError::Kind::DuplicateEdge);
  EXPECT_EQ(parse_kind("3 2\n0 1\n0 1"), ParseError::Kind::DuplicateEdge);
  EXPECT_EQ(parse_kind("2 1\n0 2"), ParseError::Kind::OutOfRange);
}

TEST(LoadGraph, ErrorLineNumbers) {
  try {
    load_graph("3 3\n0 1\n1 2\n2 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(FormatGraph, SortedBitExact) {
  Graph g = load_graph("4 3\n3 2\n1 0\n2 0\n");
  EXPECT_EQ(format_graph(g), "4 3\n0 1\n0 2\n2 3\n");
  EXPECT_EQ(format_graph(load_graph(format_graph(g))), format_graph(g));
}

TEST(Graph, RejectsInvalidConstruction) {
  std::vector<Edge> loop{{0, 0}};
  EXPECT_THROW(Graph::from_edges(2, loop), std::invalid_argument);
  std::vector<Edge> dup{{0, 1}, {1, 0}};
  EXPECT_THROW(Graph::from_edges(2, dup), std::invalid_argument);
  std::vector<Edge> range{{0, 5}};
  EXPECT_THROW(Graph::from_edges(2, range), std::invalid_argument);
  std::vector<Edge> none;
  EXPECT_THROW(Graph::from_edges(2, none, {7, 7}), std::invalid_argument);
}

TEST(Graph, InvariantsHoldForGenerators) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (const Graph& g : {gen_degree_capped(300, 9, 1.0, seed), gen_forest_union(300, 3, seed),
                           gen_high_girth(300, 4, seed), gen_hub_forest_union(300, 2, 3, seed)}) {
      std::size_t degree_sum = 0;
      for (Vertex v = 0; v < g.n(); ++v) {
        degree_sum += g.degree(v);
        auto nb = g.neighbors(v);
        EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
        EXPECT_TRUE(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
        for (Vertex u : nb) {
          EXPECT_NE(u, v);
          EXPECT_TRUE(g.has_edge(u, v));
        }
      }
      EXPECT_EQ(degree_sum, 2 * g.m());
      std::vector<NodeId> ids(g.ids().begin(), g.ids().end());
      std::sort(ids.begin(), ids.end());
      EXPECT_TRUE(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    }
  }
}

TEST(Graph, CustomIdsAndDegreeIn) {
  std::vector<Edge> e{{0, 1}, {1, 2}};
  Graph g = Graph::from_edges(3, e, {30, 10, 20});
  EXPECT_EQ(g.id(0), 30u);
  EXPECT_EQ(g.max_degree(), 2u);
  VertexSet s(3);
  s.insert(0);
  EXPECT_EQ(g.degree_in(1, s), 1u);
  EXPECT_EQ(g.degree_in(2, s), 0u);
}

TEST(VertexSet, Operations) {
  VertexSet s(5);
  EXPECT_TRUE(s.empty());
  s.insert(3);
  s.insert(3);
  s.insert(1);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.members(), (std::vector<Vertex>{1, 3}));
  s.erase(3);
  s.erase(3);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_FALSE(s.contains(3));
  EXPECT_FALSE(s.contains(99));
  EXPECT_EQ(VertexSet(4, true).size(), 4u);
}

TEST(InducedSubgraph, KeepsIdsAndEdges) {
  Graph g = make_cycle(6);
  VertexSet keep = VertexSet::of(6, std::vector<Vertex>{0, 1, 2, 4});
  InducedSubgraph sub = induced_subgraph(g, keep);
  EXPECT_EQ(sub.graph.n(), 4u);
  EXPECT_EQ(sub.graph.m(), 2u);
  EXPECT_EQ(sub.to_parent, (std::vector<Vertex>{0, 1, 2, 4}));
  for (Vertex v = 0; v < 4; ++v) EXPECT_EQ(sub.graph.id(v), g.id(sub.to_parent[v]));
  EXPECT_EQ(sub.graph.degree(3), 0u);
}
