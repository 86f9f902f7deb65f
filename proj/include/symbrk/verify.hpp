#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "symbrk/graph.hpp"
#include "symbrk/solution.hpp"

// Validity oracles written directly against the definitions. They share no
// code with the algorithms they check.

namespace symbrk {

struct MatchingCheck {
  bool valid = false;    ///< edges exist and are pairwise vertex-disjoint
  bool maximal = false;  ///< no edge has both endpoints unmatched
};

inline MatchingCheck check_matching(const Graph& g, std::span<const Edge> m) {
  MatchingCheck r{true, true};
  std::vector<std::uint8_t> used(g.n(), 0);
  for (auto [u, v] : m) {
    if (u >= g.n() || v >= g.n() || !g.has_edge(u, v) || used[u] || used[v]) {
      r.valid = false;
      continue;
    }
    used[u] = used[v] = 1;
  }
  for (auto [u, v] : g.edges())
    if (!used[u] && !used[v]) r.maximal = false;
  return r;
}

inline MatchingCheck check_matching(const Graph& g, const Matching& m) {
  const auto edges = m.edges();
  return check_matching(g, std::span<const Edge>(edges));
}

struct MisCheck {
  bool independent = false;
  bool maximal = false;  ///< every vertex outside the set has a neighbor inside
};

inline MisCheck check_mis(const Graph& g, std::span<const Vertex> set) {
  std::vector<std::uint8_t> in(g.n(), 0);
  for (Vertex v : set)
    if (v < g.n()) in[v] = 1;
  MisCheck r{true, true};
  for (Vertex v : set)
    if (v >= g.n()) r.independent = false;
  for (auto [u, v] : g.edges())
    if (in[u] && in[v]) r.independent = false;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (in[v]) continue;
    bool dominated = false;
    for (Vertex u : g.neighbors(v)) dominated = dominated || in[u];
    if (!dominated) r.maximal = false;
  }
  return r;
}

inline MisCheck check_mis(const Graph& g, const IndependentSet& s) {
  const auto members = s.members();
  return check_mis(g, std::span<const Vertex>(members));
}

struct ColoringCheck {
  bool proper = false;          ///< no edge with two equal assigned colors
  bool total = false;           ///< every vertex colored
  bool within_palette = false;  ///< every assigned color in 1..k
};

/// `colors[v] == 0` means uncolored.
inline ColoringCheck check_coloring(const Graph& g, std::span<const Color> colors, Color k) {
  ColoringCheck r{true, colors.size() == g.n(), true};
  for (Vertex v = 0; v < colors.size(); ++v) {
    if (colors[v] == 0)
      r.total = false;
    else if (colors[v] > k)
      r.within_palette = false;
  }
  if (colors.size() != g.n()) return {false, false, r.within_palette};
  for (auto [u, v] : g.edges())
    if (colors[u] != 0 && colors[u] == colors[v]) r.proper = false;
  return r;
}

inline ColoringCheck check_coloring(const Graph& g, const PartialColoring& c, Color k) {
  return check_coloring(g, std::span<const Color>(c.colors()), k);
}

/// Components left active, with the finishing-size criteria evaluated.
struct ResidualReport {
  struct Part {
    std::vector<Vertex> vertices;
    std::size_t weak_diameter = 0;
  };
  std::vector<Part> components;
  std::size_t max_degree = 0;      ///< within the active set
  bool size_polylog = true;        ///< every size <= log^9 n
  bool weak_diameter_small = true;  ///< every weak diameter < 5 sqrt(log n)
  bool size_small = true;          ///< every size < delta_ref^4 log n
};

inline ResidualReport residual_stats(const Graph& g, const VertexSet& active, std::size_t delta_ref) {
  ResidualReport r;
  const std::size_t n = g.n();
  const double log_n = n > 1 ? std::log2(static_cast<double>(n)) : 0.0;
  std::vector<std::int64_t> comp(n, -1);
  for (Vertex v = 0; v < n; ++v) {
    if (!active.contains(v)) continue;
    std::size_t d = 0;
    for (Vertex u : g.neighbors(v)) d += active.contains(u) ? 1 : 0;
    r.max_degree = std::max(r.max_degree, d);
  }
  for (Vertex s = 0; s < n; ++s) {
    if (!active.contains(s) || comp[s] >= 0) continue;
    ResidualReport::Part part;
    std::deque<Vertex> queue{s};
    comp[s] = static_cast<std::int64_t>(r.components.size());
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop_front();
      part.vertices.push_back(v);
      for (Vertex u : g.neighbors(v))
        if (active.contains(u) && comp[u] < 0) {
          comp[u] = comp[s];
          queue.push_back(u);
        }
    }
    r.components.push_back(std::move(part));
  }
  std::vector<std::int64_t> dist(n, -1);
  for (auto& part : r.components) {
    for (Vertex src : part.vertices) {
      std::fill(dist.begin(), dist.end(), -1);
      std::deque<Vertex> queue{src};
      dist[src] = 0;
      while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (Vertex u : g.neighbors(v))
          if (dist[u] < 0) {
            dist[u] = dist[v] + 1;
            queue.push_back(u);
          }
      }
      for (Vertex w : part.vertices)
        part.weak_diameter = std::max(part.weak_diameter, static_cast<std::size_t>(dist[w]));
    }
    const double size = static_cast<double>(part.vertices.size());
    if (size > std::pow(log_n, 9.0)) r.size_polylog = false;
    if (static_cast<double>(part.weak_diameter) >= 5.0 * std::sqrt(log_n)) r.weak_diameter_small = false;
    if (size >= std::pow(static_cast<double>(delta_ref), 4.0) * log_n) r.size_small = false;
  }
  return r;
}

}  // namespace symbrk
