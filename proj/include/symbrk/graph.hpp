#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symbrk {

/// Dense vertex index in [0, n).
using Vertex = std::uint32_t;
/// Distinct node identifier used for tie-breaking; not necessarily contiguous.
using NodeId = std::uint64_t;
using Edge = std::pair<Vertex, Vertex>;

/// Membership bitmap over the vertices of one graph.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe, bool full = false)
      : bits_(universe, full ? 1 : 0), count_(full ? universe : 0) {}

  static VertexSet of(std::size_t universe, std::span<const Vertex> members) {
    VertexSet s(universe);
    for (Vertex v : members) s.insert(v);
    return s;
  }

  bool contains(Vertex v) const { return v < bits_.size() && bits_[v] != 0; }
  void insert(Vertex v) {
    if (!bits_[v]) {
      bits_[v] = 1;
      ++count_;
    }
  }
  void erase(Vertex v) {
    if (bits_[v]) {
      bits_[v] = 0;
      --count_;
    }
  }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::size_t universe() const { return bits_.size(); }

  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    out.reserve(count_);
    for (Vertex v = 0; v < bits_.size(); ++v)
      if (bits_[v]) out.push_back(v);
    return out;
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

/// Immutable undirected simple graph in compressed adjacency form.
///
/// Neighbor lists are sorted by vertex index. Node ids default to the vertex
/// index; induced subgraphs keep the ids of the parent so that id-based
/// tie-breaking is unchanged.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Builds a graph from an edge list. Throws std::invalid_argument on a
  /// self-loop, duplicate edge, out-of-range endpoint or repeated id.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges, std::vector<NodeId> ids = {}) {
    Graph g;
    if (ids.empty()) {
      ids.resize(n);
      std::iota(ids.begin(), ids.end(), NodeId{0});
    }
    if (ids.size() != n) throw std::invalid_argument("id list size does not match vertex count");
    {
      std::vector<NodeId> sorted = ids;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("node ids must be distinct");
    }
    std::vector<std::uint32_t> deg(n, 0);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
      if (u == v) throw std::invalid_argument("self-loop");
      ++deg[u];
      ++deg[v];
    }
    g.offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
    g.targets_.resize(g.offsets_[n]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : edges) {
      g.targets_[fill[u]++] = v;
      g.targets_[fill[v]++] = u;
    }
    for (std::size_t v = 0; v < n; ++v) {
      auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
      auto last = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
      std::sort(first, last);
      if (std::adjacent_find(first, last) != last) throw std::invalid_argument("duplicate edge");
      g.max_degree_ = std::max<std::size_t>(g.max_degree_, deg[v]);
    }
    g.ids_ = std::move(ids);
    return g;
  }

  std::size_t n() const { return offsets_.size() - 1; }
  std::size_t m() const { return targets_.size() / 2; }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const { return max_degree_; }
  NodeId id(Vertex v) const { return ids_[v]; }
  std::span<const NodeId> ids() const { return ids_; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }

  bool has_edge(Vertex u, Vertex v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(m());
    for (Vertex u = 0; u < n(); ++u)
      for (Vertex v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  /// Degree of v counting only neighbors inside `within`.
  std::size_t degree_in(Vertex v, const VertexSet& within) const {
    std::size_t d = 0;
    for (Vertex u : neighbors(v)) d += within.contains(u);
    return d;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> targets_;
  std::vector<NodeId> ids_;
  std::size_t max_degree_ = 0;
};

/// G(S) with a map back to the parent's vertex indices.
struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> to_parent;
};

inline InducedSubgraph induced_subgraph(const Graph& g, const VertexSet& keep) {
  InducedSubgraph sub;
  std::vector<Vertex> local(g.n(), 0);
  std::vector<NodeId> ids;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!keep.contains(v)) continue;
    local[v] = static_cast<Vertex>(sub.to_parent.size());
    sub.to_parent.push_back(v);
    ids.push_back(g.id(v));
  }
  std::vector<Edge> edges;
  for (Vertex u : sub.to_parent)
    for (Vertex v : g.neighbors(u))
      if (u < v && keep.contains(v)) edges.emplace_back(local[u], local[v]);
  sub.graph = Graph::from_edges(sub.to_parent.size(), edges, std::move(ids));
  return sub;
}

// ---------------------------------------------------------------------------
// Edge-list text format: "n m" then m lines "u v", ids contiguous 0..n-1.

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Malformed, SelfLoop, DuplicateEdge, OutOfRange };

  ParseError(Kind kind, std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

namespace detail {

inline bool parse_two(std::string_view line, std::uint64_t& a, std::uint64_t& b) {
  auto skip = [&](std::size_t i) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    return i;
  };
  std::size_t i = skip(0);
  auto r1 = std::from_chars(line.data() + i, line.data() + line.size(), a);
  if (r1.ec != std::errc{} || r1.ptr == line.data() + i) return false;
  i = static_cast<std::size_t>(r1.ptr - line.data());
  std::size_t j = skip(i);
  if (j == i) return false;
  auto r2 = std::from_chars(line.data() + j, line.data() + line.size(), b);
  if (r2.ec != std::errc{} || r2.ptr == line.data() + j) return false;
  return skip(static_cast<std::size_t>(r2.ptr - line.data())) == line.size();
}

}  // namespace detail

inline Graph load_graph(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty()) throw ParseError(ParseError::Kind::Malformed, 1, "missing header");
  std::uint64_t n = 0, m = 0;
  if (!detail::parse_two(lines[0], n, m)) throw ParseError(ParseError::Kind::Malformed, 1, "expected \"n m\"");
  // Trailing blank lines are tolerated; anything else beyond m edges is not.
  while (lines.size() > 1 && lines.back().find_first_not_of(" \t\r") == std::string_view::npos) lines.pop_back();
  if (lines.size() - 1 != m)
    throw ParseError(ParseError::Kind::Malformed, std::min<std::size_t>(lines.size(), m + 1) + 1,
                     "expected " + std::to_string(m) + " edge lines, found " + std::to_string(lines.size() - 1));

  std::vector<Edge> edges;
  edges.reserve(m);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> seen;
  seen.reserve(m);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    std::uint64_t u = 0, v = 0;
    if (!detail::parse_two(lines[k], u, v)) throw ParseError(ParseError::Kind::Malformed, k + 1, "expected \"u v\"");
    if (u == v) throw ParseError(ParseError::Kind::SelfLoop, k + 1, "self-loop");
    if (u >= n || v >= n) throw ParseError(ParseError::Kind::OutOfRange, k + 1, "vertex id out of range");
    seen.emplace_back(std::min(u, v), std::max(u, v));
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  std::vector<std::size_t> order(seen.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return seen[a] != seen[b] ? seen[a] < seen[b] : a < b;
  });
  for (std::size_t k = 1; k < order.size(); ++k)
    if (seen[order[k]] == seen[order[k - 1]])
      throw ParseError(ParseError::Kind::DuplicateEdge, order[k] + 2, "duplicate edge");
  return Graph::from_edges(n, edges);
}

/// Serializes with vertex indices as ids, edges sorted, "u v" with u < v.
inline std::string format_graph(const Graph& g) {
  std::string out = std::to_string(g.n()) + " " + std::to_string(g.m()) + "\n";
  for (auto [u, v] : g.edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

}  // namespace symbrk
