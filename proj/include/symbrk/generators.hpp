#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "symbrk/graph.hpp"
#include "symbrk/metrics.hpp"
#include "symbrk/rng.hpp"

namespace symbrk {

namespace detail {

inline std::uint64_t edge_key(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

/// Uniform random labeled tree on n vertices (Pruefer decoding).
inline std::vector<Edge> random_tree(std::size_t n, SplitMix64& rng) {
  std::vector<Edge> edges;
  if (n < 2) return edges;
  if (n == 2) return {{0, 1}};
  std::vector<Vertex> code(n - 2);
  std::vector<std::size_t> degree(n, 1);
  for (auto& x : code) {
    x = static_cast<Vertex>(rng.below(n));
    ++degree[x];
  }
  std::size_t ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  std::size_t leaf = ptr;
  for (Vertex x : code) {
    edges.emplace_back(static_cast<Vertex>(leaf), x);
    if (--degree[x] == 1 && x < ptr) {
      leaf = x;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.emplace_back(static_cast<Vertex>(leaf), static_cast<Vertex>(n - 1));
  return edges;
}

inline Graph union_dedup(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<Edge> norm;
  norm.reserve(edges.size());
  for (auto [u, v] : edges) norm.emplace_back(std::min(u, v), std::max(u, v));
  std::sort(norm.begin(), norm.end());
  norm.erase(std::unique(norm.begin(), norm.end()), norm.end());
  return Graph::from_edges(n, norm);
}

}  // namespace detail

/// Union of `forests` independent uniform random labeled spanning trees on n
/// vertices with duplicate edges dropped, so arboricity is at most `forests`.
inline Graph gen_forest_union(std::size_t n, std::size_t forests, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_forest_union: n must be >= 1");
  if (forests < 1) throw std::invalid_argument("gen_forest_union: lambda must be >= 1");
  SplitMix64 rng(seed);
  std::vector<Edge> all;
  for (std::size_t f = 0; f < forests; ++f) {
    auto tree = detail::random_tree(n, rng);
    all.insert(all.end(), tree.begin(), tree.end());
  }
  return detail::union_dedup(n, all);
}

inline Graph gen_tree(std::size_t n, std::uint64_t seed) { return gen_forest_union(n, 1, seed); }

/// Union of `forests` random recursive trees in which each new vertex attaches to
/// one of `hubs` designated vertices with probability 1/2. Produces a few
/// vertices of degree ~n/(2*hubs) while keeping arboricity at most `forests`.
inline Graph gen_hub_forest_union(std::size_t n, std::size_t forests, std::size_t hubs, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_hub_forest_union: n must be >= 1");
  if (forests < 1) throw std::invalid_argument("gen_hub_forest_union: lambda must be >= 1");
  if (hubs < 1) throw std::invalid_argument("gen_hub_forest_union: hubs must be >= 1");
  SplitMix64 rng(seed);
  std::vector<Edge> all;
  std::vector<Vertex> order(n);
  for (std::size_t f = 0; f < forests; ++f) {
    for (Vertex v = 0; v < n; ++v) order[v] = v;
    for (std::size_t k = n; k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
    for (std::size_t k = 1; k < n; ++k) {
      std::size_t parent = (rng.next() >> 63) ? rng.below(std::min(hubs, k)) : rng.below(k);
      all.emplace_back(order[k], order[parent]);
    }
  }
  return detail::union_dedup(n, all);
}

/// Random graph with maximum degree at most `cap`: pairs of vertices are
/// proposed uniformly and kept only while both endpoints have degree below the
/// cap. `density` scales the target edge count n*cap/2.
inline Graph gen_degree_capped(std::size_t n, std::size_t cap, double density, std::uint64_t seed) {
  if (cap >= n && n > 0) throw std::invalid_argument("gen_degree_capped: need 0 <= delta < n");
  if (density < 0) throw std::invalid_argument("gen_degree_capped: density must be >= 0");
  std::vector<Edge> edges;
  if (cap == 0 || n < 2) return Graph::from_edges(n, edges);
  const double max_edges = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const auto target = static_cast<std::size_t>(
      std::min(max_edges, std::round(density * static_cast<double>(n) * static_cast<double>(cap) / 2.0)));
  SplitMix64 rng(seed);
  std::vector<std::size_t> deg(n, 0);
  // Rejection on saturated endpoints is equivalent to proposing among the
  // unsaturated vertices only, which is what `open` tracks.
  std::vector<Vertex> open(n);
  std::vector<std::size_t> slot(n);
  for (Vertex v = 0; v < n; ++v) open[v] = slot[v] = v;
  auto close = [&](Vertex v) {
    Vertex last = open.back();
    open[slot[v]] = last;
    slot[last] = slot[v];
    open.pop_back();
  };
  std::unordered_set<std::uint64_t> present;
  present.reserve(target * 2);
  std::size_t failures = 0;
  while (edges.size() < target && open.size() >= 2) {
    Vertex u = open[rng.below(open.size())];
    Vertex v = open[rng.below(open.size())];
    if (u == v || !present.insert(detail::edge_key(u, v)).second) {
      if (++failures > 64 * open.size() + 1024) break;
      continue;
    }
    failures = 0;
    edges.emplace_back(u, v);
    if (++deg[u] == cap) close(u);
    if (++deg[v] == cap) close(v);
  }
  return Graph::from_edges(n, edges);
}

/// Random graph with maximum degree at most `cap` and girth greater than 6. An
/// edge is inserted only if its endpoints are at distance at least 6, checked
/// by a depth-5 breadth-first search. Best effort toward the degree cap.
inline Graph gen_high_girth(std::size_t n, std::size_t cap, std::uint64_t seed) {
  if (cap < 2) throw std::invalid_argument("gen_high_girth: delta must be >= 2");
  std::vector<std::vector<Vertex>> adj(n);
  std::vector<Edge> edges;
  if (n < 2) return Graph::from_edges(n, edges);
  SplitMix64 rng(seed);
  std::vector<Vertex> open(n);
  std::vector<std::size_t> slot(n);
  for (Vertex v = 0; v < n; ++v) open[v] = slot[v] = v;
  auto close = [&](Vertex v) {
    Vertex last = open.back();
    open[slot[v]] = last;
    slot[last] = slot[v];
    open.pop_back();
  };
  std::vector<std::uint32_t> dist(n, BfsWorkspace::kUnseen);
  std::vector<Vertex> queue;
  auto within_five = [&](Vertex src, Vertex dst) {
    for (Vertex x : queue) dist[x] = BfsWorkspace::kUnseen;
    queue.clear();
    dist[src] = 0;
    queue.push_back(src);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex x = queue[head];
      if (x == dst) return true;
      if (dist[x] == 5) continue;
      for (Vertex y : adj[x])
        if (dist[y] == BfsWorkspace::kUnseen) {
          dist[y] = dist[x] + 1;
          queue.push_back(y);
        }
    }
    return false;
  };
  const std::size_t target = n * cap / 2;
  std::size_t failures = 0;
  while (edges.size() < target && open.size() >= 2) {
    Vertex u = open[rng.below(open.size())];
    Vertex v = open[rng.below(open.size())];
    if (u == v || within_five(u, v)) {
      if (++failures > 32 * open.size() + 1024) break;
      continue;
    }
    failures = 0;
    edges.emplace_back(u, v);
    adj[u].push_back(v);
    adj[v].push_back(u);
    if (adj[u].size() == cap) close(u);
    if (adj[v].size() == cap) close(v);
  }
  return Graph::from_edges(n, edges);
}

// Small fixtures.

inline Graph make_empty(std::size_t n) { return Graph::from_edges(n, std::vector<Edge>{}); }

inline Graph make_path(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 1; v < n; ++v) e.emplace_back(v - 1, v);
  return Graph::from_edges(n, e);
}

inline Graph make_cycle(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v < n; ++v) e.emplace_back(v, static_cast<Vertex>((v + 1) % n));
  return Graph::from_edges(n, e);
}

/// K_{1,leaves}; the center is vertex 0.
inline Graph make_star(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return Graph::from_edges(leaves + 1, e);
}

inline Graph make_clique(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph::from_edges(n, e);
}

/// k disjoint edges (2i, 2i+1).
inline Graph make_disjoint_edges(std::size_t k) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < k; ++i) e.emplace_back(2 * i, 2 * i + 1);
  return Graph::from_edges(2 * k, e);
}

inline Graph make_petersen() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(i + 5, (i + 2) % 5 + 5);
  }
  return Graph::from_edges(10, e);
}

}  // namespace symbrk
