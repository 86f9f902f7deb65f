#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "symbrk/graph.hpp"

namespace symbrk {

/// Shortest cycle length; std::nullopt stands for an acyclic graph (girth infinity).
using Girth = std::optional<std::size_t>;

/// Reusable breadth-first search scratch space with lazy reset.
class BfsWorkspace {
 public:
  static constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();

  explicit BfsWorkspace(std::size_t n) : dist_(n, kUnseen) { queue_.reserve(n); }

  void reset() {
    for (Vertex v : queue_) dist_[v] = kUnseen;
    queue_.clear();
  }
  std::uint32_t dist(Vertex v) const { return dist_[v]; }

  /// BFS from `source` over vertices accepted by `allowed`; visits in order,
  /// calling `visit(v, d)` and stopping early when it returns false.
  template <class Allowed, class Visit>
  void run(const Graph& g, Vertex source, Allowed&& allowed, Visit&& visit,
           std::uint32_t max_depth = kUnseen) {
    reset();
    dist_[source] = 0;
    queue_.push_back(source);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      Vertex u = queue_[head];
      if (!visit(u, dist_[u])) return;
      if (dist_[u] >= max_depth) continue;
      for (Vertex w : g.neighbors(u)) {
        if (dist_[w] != kUnseen || !allowed(w)) continue;
        dist_[w] = dist_[u] + 1;
        queue_.push_back(w);
      }
    }
  }

 private:
  std::vector<std::uint32_t> dist_;
  std::vector<Vertex> queue_;
};

/// Exact girth by breadth-first search from every vertex of the 2-core.
inline Girth girth(const Graph& g) {
  const std::size_t n = g.n();
  std::vector<std::size_t> deg(n);
  std::vector<std::uint8_t> removed(n, 0);
  std::vector<Vertex> stack;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    if (deg[v] < 2) stack.push_back(v);
  }
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    if (removed[v]) continue;
    removed[v] = 1;
    for (Vertex w : g.neighbors(v))
      if (!removed[w] && --deg[w] < 2) stack.push_back(w);
  }

  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::uint32_t> dist(n, BfsWorkspace::kUnseen);
  std::vector<Vertex> parent(n), queue;
  queue.reserve(n);
  for (Vertex root = 0; root < n; ++root) {
    if (removed[root]) continue;
    for (Vertex v : queue) dist[v] = BfsWorkspace::kUnseen;
    queue.clear();
    dist[root] = 0;
    parent[root] = root;
    queue.push_back(root);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex u = queue[head];
      if (2 * static_cast<std::size_t>(dist[u]) + 1 >= best) break;
      for (Vertex w : g.neighbors(u)) {
        if (removed[w]) continue;
        if (dist[w] == BfsWorkspace::kUnseen) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push_back(w);
        } else if (parent[u] != w) {
          best = std::min<std::size_t>(best, static_cast<std::size_t>(dist[u]) + dist[w] + 1);
        }
      }
    }
  }
  if (best == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return best;
}

/// Largest minimum degree seen while peeling minimum-degree vertices.
inline std::size_t degeneracy(const Graph& g) {
  const std::size_t n = g.n();
  if (n == 0) return 0;
  std::vector<std::size_t> deg(n);
  std::vector<std::vector<Vertex>> buckets(g.max_degree() + 1);
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    buckets[deg[v]].push_back(v);
  }
  std::vector<std::uint8_t> done(n, 0);
  std::size_t result = 0, processed = 0, d = 0;
  while (processed < n) {
    if (buckets[d].empty()) {
      ++d;
      continue;
    }
    Vertex v = buckets[d].back();
    buckets[d].pop_back();
    if (done[v] || deg[v] != d) continue;
    done[v] = 1;
    ++processed;
    result = std::max(result, d);
    for (Vertex w : g.neighbors(v)) {
      if (done[w]) continue;
      --deg[w];
      buckets[deg[w]].push_back(w);
      if (deg[w] < d) d = deg[w];
    }
  }
  return result;
}

inline bool is_forest(const Graph& g) {
  std::vector<Vertex> parent(g.n());
  std::iota(parent.begin(), parent.end(), Vertex{0});
  auto find = [&](Vertex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [u, v] : g.edges()) {
    Vertex a = find(u), b = find(v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

/// Connected components of G(S), each sorted by vertex index, ordered by smallest member.
inline std::vector<std::vector<Vertex>> connected_components(const Graph& g, const VertexSet& s) {
  std::vector<std::vector<Vertex>> out;
  std::vector<std::uint8_t> seen(g.n(), 0);
  std::vector<Vertex> stack;
  for (Vertex root = 0; root < g.n(); ++root) {
    if (!s.contains(root) || seen[root]) continue;
    std::vector<Vertex> comp;
    seen[root] = 1;
    stack.push_back(root);
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (Vertex w : g.neighbors(u))
        if (s.contains(w) && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

/// Max distance in G(component) between component vertices. The component must be connected.
inline std::size_t induced_diameter(const Graph& g, const std::vector<Vertex>& comp, BfsWorkspace& ws,
                                    const VertexSet& members) {
  std::size_t diam = 0;
  for (Vertex src : comp) {
    ws.run(
        g, src, [&](Vertex w) { return members.contains(w); },
        [&](Vertex, std::uint32_t d) {
          diam = std::max<std::size_t>(diam, d);
          return true;
        });
  }
  return diam;
}

/// Max distance in the full graph G between component vertices.
inline std::size_t weak_diameter(const Graph& g, const std::vector<Vertex>& comp, BfsWorkspace& ws,
                                 const VertexSet& members) {
  std::size_t diam = 0;
  for (Vertex src : comp) {
    std::size_t remaining = comp.size();
    ws.run(
        g, src, [](Vertex) { return true; },
        [&](Vertex v, std::uint32_t d) {
          if (members.contains(v)) {
            diam = std::max<std::size_t>(diam, d);
            --remaining;
          }
          return remaining > 0;
        });
  }
  return diam;
}

struct Component {
  std::vector<Vertex> vertices;
  std::size_t size = 0;
  std::size_t weak_diameter = 0;
  std::size_t induced_diameter = 0;
};

struct ComponentReport {
  std::vector<Component> components;

  std::size_t vertex_count() const {
    std::size_t total = 0;
    for (const auto& c : components) total += c.size;
    return total;
  }
};

/// Components of G(S) with weak diameters measured in the full graph.
inline ComponentReport components(const Graph& g, const VertexSet& s) {
  ComponentReport report;
  BfsWorkspace ws(g.n());
  VertexSet members(g.n());
  for (auto& verts : connected_components(g, s)) {
    Component c;
    for (Vertex v : verts) members.insert(v);
    c.size = verts.size();
    c.weak_diameter = weak_diameter(g, verts, ws, members);
    c.induced_diameter = induced_diameter(g, verts, ws, members);
    for (Vertex v : verts) members.erase(v);
    c.vertices = std::move(verts);
    report.components.push_back(std::move(c));
  }
  return report;
}

}  // namespace symbrk
