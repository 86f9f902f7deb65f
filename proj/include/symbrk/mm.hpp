#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "symbrk/config.hpp"
#include "symbrk/detfinish.hpp"
#include "symbrk/engine.hpp"
#include "symbrk/graph.hpp"
#include "symbrk/metrics.hpp"
#include "symbrk/solution.hpp"

namespace symbrk {

/// Stage thresholds of the matching algorithm.
struct MmParams {
  double max_degree = 0;
  double n = 1;
  double c1 = 1.0;
  double c2 = 4.0;
  double rho = std::sqrt(8.0 / 7.0);

  struct Stage {
    double delta;  ///< high-degree threshold
    double tau;    ///< low-degree threshold
    double nu;     ///< bound on the sum of neighbor degrees, delta * tau / 2
  };

  static MmParams make(std::size_t max_degree, std::size_t n, const Constants& k) {
    return {static_cast<double>(max_degree), static_cast<double>(n), k.c1, k.c2, k.rho};
  }

  Stage stage(std::size_t i) const {
    const double s = std::sqrt(c1 * std::log(n));
    const double r = std::pow(rho, static_cast<double>(i));
    return {max_degree * s / r, 2.0 * max_degree / (r * s), max_degree * max_degree / (r * r)};
  }

  /// ceil(c2 * log2 max_degree), with log2 floored at 2 so that graphs of
  /// degree <= 4 still get a few stages; zero for edgeless graphs.
  std::size_t stage_count() const {
    if (max_degree < 1) return 0;
    return static_cast<std::size_t>(std::ceil(c2 * std::max(std::log2(max_degree), 2.0)));
  }
};

/// Per-stage observations of the neighbor-degree-sum decay.
struct MmDecayProbe {
  struct Sample {
    std::size_t stage;
    std::size_t qualifying;  ///< vertices with deg2 >= nu/2 at stage start
    double max_ratio;        ///< max over those of deg2 after / deg2 before
  };
  std::vector<Sample> samples;
};

namespace detail {

struct MatchNode {
  Vertex mate = kNoVertex;
  std::uint32_t degree = 0;  // unmatched neighbors, refreshed at stage start
  bool u1 = false;
  bool u2 = false;
  Vertex choice = kNoVertex;  // F1 out-edge target
  Vertex f2_in = kNoVertex;   // source of the in-edge kept in F2
  bool f2_out = false;        // own F1 edge survived into F2
  std::uint8_t bit = 0;

  bool matched() const { return mate != kNoVertex; }
};

using MatchNet = Network<MatchNode>;

inline void refresh_degrees(MatchNet& net) {
  net.exchange([](const Node&, const MatchNode& s) { return s.matched(); },
               [](const Node&, MatchNode& s, Inbox<bool> in, NodeRng&) {
                 std::uint32_t d = 0;
                 for (auto e : in) d += e.msg ? 0 : 1;
                 s.degree = s.matched() ? 0 : d;
               });
}

/// The Match procedure on the u1/u2 flags currently held by the nodes.
inline void match(MatchNet& net) {
  // Unmatched U1 vertices pick a uniformly random unmatched U2 neighbor (F1).
  net.exchange([](const Node&, const MatchNode& s) { return s.u2 && !s.matched(); },
               [](const Node&, MatchNode& s, Inbox<bool> in, NodeRng& rng) {
                 s.choice = kNoVertex;
                 s.f2_in = kNoVertex;
                 s.f2_out = false;
                 s.bit = 0;
                 if (!s.u1 || s.matched()) return;
                 std::uint64_t eligible = 0;
                 for (auto e : in) eligible += e.msg ? 1 : 0;
                 if (eligible == 0) return;
                 std::uint64_t pick = rng.below(eligible);
                 for (auto e : in)
                   if (e.msg && pick-- == 0) {
                     s.choice = e.from;
                     break;
                   }
               });
  // Each chosen vertex keeps the in-edge from the maximum id (F2).
  net.exchange([](const Node&, const MatchNode& s) { return s.choice; },
               [](const Node& me, MatchNode& s, Inbox<Vertex> in, NodeRng&) {
                 bool any = false;
                 NodeId best = 0;
                 for (auto e : in)
                   if (e.msg == me.index && (!any || e.from_id > best)) {
                     any = true;
                     best = e.from_id;
                     s.f2_in = e.from;
                   }
               });
  // Learn whether the own out-edge survived, then fix bits: random inside a
  // path or cycle, 0 at a path start, 1 at a path end.
  net.exchange([](const Node&, const MatchNode& s) { return s.f2_in; },
               [](const Node& me, MatchNode& s, Inbox<Vertex> in, NodeRng& rng) {
                 if (s.choice != kNoVertex)
                   for (auto e : in)
                     if (e.from == s.choice) {
                       s.f2_out = e.msg == me.index;
                       break;
                     }
                 const bool has_in = s.f2_in != kNoVertex;
                 if (has_in && s.f2_out)
                   s.bit = rng.coin() ? 1 : 0;
                 else if (s.f2_out)
                   s.bit = 0;
                 else if (has_in)
                   s.bit = 1;
               });
  // Keep F2 edges (v, u) with b(v) = 0 and b(u) = 1.
  net.exchange([](const Node&, const MatchNode& s) { return s.bit; },
               [](const Node&, MatchNode& s, Inbox<std::uint8_t> in, NodeRng&) {
                 for (auto e : in) {
                   if (s.f2_out && e.from == s.choice && s.bit == 0 && e.msg == 1) s.mate = e.from;
                   if (s.f2_in == e.from && s.bit == 1 && e.msg == 0) s.mate = e.from;
                 }
               });
}

inline Gauges match_gauges(const MatchNet& net) {
  const Graph& g = net.graph();
  Gauges out;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (net.state(v).matched()) {
      ++out.matched;
      continue;
    }
    for (Vertex u : g.neighbors(v))
      if (!net.state(u).matched()) {
        ++out.active;
        break;
      }
  }
  return out;
}

inline std::vector<MatchNode> initial_match_nodes(const Matching* m, std::size_t n) {
  std::vector<MatchNode> init(n);
  if (m)
    for (Vertex v = 0; v < n; ++v)
      if (auto w = m->mate(v)) init[v].mate = *w;
  return init;
}

inline std::uint64_t sum_neighbor_degrees(const Graph& g, const MatchNet& net, Vertex v) {
  std::uint64_t s = 0;
  for (Vertex u : g.neighbors(v))
    if (!net.state(u).matched()) s += net.state(u).degree;
  return s;
}

}  // namespace detail

/// One Match(U1, U2, M) call; returns the edges it adds. Charged 3 rounds.
inline std::vector<Edge> match_round(const Graph& g, const VertexSet& u1, const VertexSet& u2, const Matching& m,
                                     TrialContext& ctx) {
  auto init = detail::initial_match_nodes(&m, g.n());
  for (Vertex v = 0; v < g.n(); ++v) {
    init[v].u1 = u1.contains(v);
    init[v].u2 = u2.contains(v);
  }
  detail::MatchNet net(g, ctx, std::move(init));
  detail::match(net);
  ctx.charge("phase1", "match", 3, detail::match_gauges(net));
  std::vector<Edge> added;
  for (Vertex v = 0; v < g.n(); ++v) {
    Vertex w = net.state(v).mate;
    if (w != kNoVertex && v < w && !m.is_matched(v)) added.emplace_back(v, w);
  }
  return added;
}

struct MmPhase1Result {
  Matching matching;
  VertexSet residual;  ///< unmatched vertices
  std::size_t stages_scheduled = 0;
  std::size_t stages_run = 0;
};

/// Phase I: stages of Match(V_lo, V_hi) followed by Match(V, V). The stage
/// schedule is fixed; once no edge joins two unmatched vertices the remaining
/// stages are no-ops and are charged without being simulated.
inline MmPhase1Result mm_phase1(const Graph& g, const MmParams& p, TrialContext& ctx, MmDecayProbe* probe = nullptr) {
  MmPhase1Result out;
  out.stages_scheduled = p.stage_count();
  detail::MatchNet net(g, ctx, detail::initial_match_nodes(nullptr, g.n()));
  std::vector<std::uint64_t> deg2_before;
  for (std::size_t i = 0; i < out.stages_scheduled; ++i) {
    // Matched status piggybacks on the previous commit round, so refreshing
    // degrees is not charged separately.
    detail::refresh_degrees(net);
    if (net.count([](const detail::MatchNode& s) { return s.degree > 0; }) == 0) {
      ctx.charge("phase1", "match-lo-hi", 3, detail::match_gauges(net));
      ctx.charge("phase1", "match-all", 3, detail::match_gauges(net));
      continue;
    }
    ++out.stages_run;
    const MmParams::Stage st = p.stage(i);
    if (probe) {
      deg2_before.assign(g.n(), 0);
      for (Vertex v = 0; v < g.n(); ++v)
        if (!net.state(v).matched()) deg2_before[v] = detail::sum_neighbor_degrees(g, net, v);
    }

    net.local([&](const Node&, detail::MatchNode& s, NodeRng&) {
      s.u1 = !s.matched() && s.degree <= st.tau;
      s.u2 = !s.matched() && s.degree > st.delta;
    });
    detail::match(net);
    ctx.charge("phase1", "match-lo-hi", 3, detail::match_gauges(net));

    net.local([](const Node&, detail::MatchNode& s, NodeRng&) { s.u1 = s.u2 = !s.matched(); });
    detail::match(net);
    ctx.charge("phase1", "match-all", 3, detail::match_gauges(net));

    if (probe) {
      detail::refresh_degrees(net);
      MmDecayProbe::Sample sample{i, 0, 0.0};
      for (Vertex v = 0; v < g.n(); ++v) {
        if (deg2_before[v] == 0 || static_cast<double>(deg2_before[v]) < st.nu / 2.0) continue;
        ++sample.qualifying;
        double after = net.state(v).matched() ? 0.0 : static_cast<double>(detail::sum_neighbor_degrees(g, net, v));
        sample.max_ratio = std::max(sample.max_ratio, after / static_cast<double>(deg2_before[v]));
      }
      if (sample.qualifying > 0) probe->samples.push_back(sample);
    }
  }
  out.matching = Matching(g.n());
  out.residual = VertexSet(g.n());
  for (Vertex v = 0; v < g.n(); ++v) {
    Vertex w = net.state(v).mate;
    if (w == kNoVertex)
      out.residual.insert(v);
    else if (v < w)
      out.matching.add(v, w);
  }
  ctx.trace().set_metric("mm.phase1.stages_scheduled", static_cast<double>(out.stages_scheduled));
  ctx.trace().set_metric("mm.phase1.stages_run", static_cast<double>(out.stages_run));
  return out;
}

/// Phase I followed by gather-and-solve on every residual component with an
/// edge. `n_global` is the network size known to every node.
inline Matching maximal_matching_in(const Graph& g, const Constants& k, TrialContext& ctx, std::size_t n_global,
                                    MmDecayProbe* probe = nullptr) {
  MmParams p = MmParams::make(g.max_degree(), n_global, k);
  MmPhase1Result r = mm_phase1(g, p, ctx, probe);
  Matching m = std::move(r.matching);

  const double size_bound = std::pow(std::log2(std::max<double>(2.0, static_cast<double>(n_global))), 9.0);
  std::size_t comps = 0, oversized = 0, oversized_vertices = 0, max_size = 0, max_wd = 0;
  std::uint64_t cost = 0;
  GatherSolver solver(g);
  for (const auto& comp : connected_components(g, r.residual)) {
    if (comp.size() < 2) continue;
    ++comps;
    max_size = std::max(max_size, comp.size());
    if (static_cast<double>(comp.size()) > size_bound) {
      ++oversized;
      oversized_vertices += comp.size();
    }
    GatherSolution sol = solver.solve(comp, Problem::MM);
    for (auto [u, v] : sol.matching) m.add(u, v);
    cost = std::max(cost, sol.rounds);
    max_wd = std::max(max_wd, sol.weak_diameter);
  }
  Trace& tr = ctx.trace();
  tr.set_metric("mm.phase2.components", static_cast<double>(comps));
  tr.set_metric("mm.phase2.max_component_size", static_cast<double>(max_size));
  tr.set_metric("mm.phase2.max_weak_diameter", static_cast<double>(max_wd));
  tr.set_metric("mm.phase2.oversized_components", static_cast<double>(oversized));
  tr.set_metric("mm.phase2.oversized_vertex_fraction",
                r.residual.empty() ? 0.0 : static_cast<double>(oversized_vertices) / static_cast<double>(r.residual.size()));
  if (cost > 0) {
    Gauges gg;
    gg.matched = static_cast<std::int64_t>(2 * m.size());
    ctx.charge("phase2", "gather-solve", cost, gg);
  }
  return m;
}

struct MmResult {
  Matching matching;
  Trace trace;
};

inline MmResult maximal_matching(const Graph& g, const TrialConfig& cfg, MmDecayProbe* probe = nullptr) {
  cfg.validate();
  TrialContext ctx(cfg.seed, cfg.round_cap(g.n()));
  Matching m = maximal_matching_in(g, cfg.constants, ctx, g.n(), probe);
  return {std::move(m), std::move(ctx.trace())};
}

}  // namespace symbrk
