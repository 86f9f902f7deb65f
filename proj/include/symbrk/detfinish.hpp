#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "symbrk/engine.hpp"
#include "symbrk/graph.hpp"
#include "symbrk/metrics.hpp"

namespace symbrk {

enum class Problem { MM, MIS, Coloring };

/// List-coloring instance for one component: colors 1..palette, minus the
/// per-vertex forbidden colors (aligned with the component's vertex list).
struct ColoringProblem {
  std::uint32_t palette = 0;
  std::vector<std::vector<std::uint32_t>> forbidden;
};

struct GatherSolution {
  Vertex leader = 0;
  std::vector<Edge> matching;
  std::vector<Vertex> independent;
  std::vector<std::pair<Vertex, std::uint32_t>> colors;
  std::size_t induced_diameter = 0;
  std::size_t weak_diameter = 0;
  std::uint64_t rounds = 0;  ///< 2 * induced diameter + 2
};

/// Leader-based finishing: the minimum-id vertex of a connected component
/// learns the induced topology, solves greedily in ascending id order and
/// broadcasts the result. Holds scratch space so that many components of one
/// graph can be solved without reallocating.
class GatherSolver {
 public:
  explicit GatherSolver(const Graph& g) : g_(&g), ws_(g.n()), members_(g.n()) {}

  GatherSolution solve(std::span<const Vertex> component, Problem problem, const ColoringProblem* coloring = nullptr) {
    if (component.empty()) throw PreconditionError("gather_and_solve: empty component");
    if (problem == Problem::Coloring &&
        (coloring == nullptr || coloring->forbidden.size() != component.size()))
      throw std::invalid_argument("gather_and_solve: coloring constraints must align with the component");
    const Graph& g = *g_;
    std::vector<Vertex> verts(component.begin(), component.end());
    for (Vertex v : verts) members_.insert(v);
    struct Cleanup {
      VertexSet& m;
      const std::vector<Vertex>& vs;
      ~Cleanup() {
        for (Vertex v : vs) m.erase(v);
      }
    } cleanup{members_, verts};

    std::size_t reached = 0;
    ws_.run(
        g, verts.front(), [&](Vertex w) { return members_.contains(w); },
        [&](Vertex, std::uint32_t) {
          ++reached;
          return true;
        });
    if (reached != verts.size()) throw PreconditionError("gather_and_solve: component is not connected");

    GatherSolution out;
    out.induced_diameter = induced_diameter(g, verts, ws_, members_);
    out.weak_diameter = weak_diameter(g, verts, ws_, members_);
    out.rounds = 2 * out.induced_diameter + 2;

    std::vector<std::size_t> order(verts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.id(verts[a]) < g.id(verts[b]); });
    out.leader = verts[order.front()];

    switch (problem) {
      case Problem::MM: {
        std::vector<Vertex> mate_taken;
        for (std::size_t i : order) {
          Vertex v = verts[i];
          if (taken(v)) continue;
          const Vertex* best = nullptr;
          for (const Vertex& u : g.neighbors(v))
            if (members_.contains(u) && !taken(u) && (best == nullptr || g.id(u) < g.id(*best))) best = &u;
          if (best) {
            out.matching.emplace_back(std::min(v, *best), std::max(v, *best));
            mark(v, mate_taken);
            mark(*best, mate_taken);
          }
        }
        for (Vertex v : mate_taken) flags_[v] = 0;
        break;
      }
      case Problem::MIS: {
        std::vector<Vertex> joined;
        for (std::size_t i : order) {
          Vertex v = verts[i];
          bool blocked = false;
          for (Vertex u : g.neighbors(v)) blocked = blocked || (members_.contains(u) && taken(u));
          if (!blocked) {
            out.independent.push_back(v);
            mark(v, joined);
          }
        }
        for (Vertex v : joined) flags_[v] = 0;
        std::sort(out.independent.begin(), out.independent.end());
        break;
      }
      case Problem::Coloring: {
        colors_.resize(g.n(), 0);
        std::vector<std::uint8_t> used(coloring->palette + 2, 0);
        for (std::size_t i : order) {
          Vertex v = verts[i];
          std::fill(used.begin(), used.end(), 0);
          for (std::uint32_t c : coloring->forbidden[i])
            if (c < used.size()) used[c] = 1;
          for (Vertex u : g.neighbors(v))
            if (members_.contains(u) && colors_[u] != 0) used[colors_[u]] = 1;
          std::uint32_t pick = 0;
          for (std::uint32_t c = 1; c <= coloring->palette; ++c)
            if (!used[c]) {
              pick = c;
              break;
            }
          if (pick == 0) {
            for (Vertex u : verts) colors_[u] = 0;
            throw std::runtime_error("gather_and_solve: palette exhausted");
          }
          colors_[v] = pick;
          out.colors.emplace_back(v, pick);
        }
        for (Vertex u : verts) colors_[u] = 0;
        std::sort(out.colors.begin(), out.colors.end());
        break;
      }
    }
    return out;
  }

 private:
  bool taken(Vertex v) const { return v < flags_.size() && flags_[v] != 0; }
  void mark(Vertex v, std::vector<Vertex>& log) {
    if (flags_.size() < g_->n()) flags_.resize(g_->n(), 0);
    flags_[v] = 1;
    log.push_back(v);
  }

  const Graph* g_;
  BfsWorkspace ws_;
  VertexSet members_;
  std::vector<std::uint8_t> flags_;
  std::vector<std::uint32_t> colors_;
};

inline GatherSolution gather_and_solve(const Graph& g, std::span<const Vertex> component, Problem problem,
                                       const ColoringProblem* coloring = nullptr) {
  GatherSolver solver(g);
  return solver.solve(component, problem, coloring);
}

}  // namespace symbrk
