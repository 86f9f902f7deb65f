#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "symbrk/config.hpp"
#include "symbrk/engine.hpp"
#include "symbrk/graph.hpp"
#include "symbrk/solution.hpp"

namespace symbrk {

/// Degree-reduction parameters for graphs of arboricity at most lambda.
struct ArbConfig {
  double lambda = 1.0;
  double t = 128.0;
  double c = 1.0;
  ArbMode mode = ArbMode::MIS;

  static ArbConfig from(const ArbSettings& s) { return {s.lambda, s.t, s.c, s.mode}; }

  double beta() const { return std::pow(t, 1.0 / 7.0); }
  double high_threshold() const { return t * lambda; }
  std::size_t quota() const { return static_cast<std::size_t>(std::ceil(t * lambda / 2.0)); }

  /// t >= max(lambda^8, (4 (c + 1) ln n)^7): where the failure bounds formally apply.
  bool guarantee_regime(std::size_t n) const {
    const double ln = std::log(std::max<double>(2.0, static_cast<double>(n)));
    return t >= std::max(std::pow(lambda, 8.0), std::pow(4.0 * (c + 1.0) * ln, 7.0));
  }

  /// Round budget ceil(8 log_t n) + 8.
  std::size_t round_cap(std::size_t n) const {
    if (n < 2 || t <= 1.0) return 8;
    return static_cast<std::size_t>(std::ceil(8.0 * std::log(static_cast<double>(n)) / std::log(t))) + 8;
  }
};

/// The vertex and edge partition used by one reduction round.
struct ArbClassification {
  VertexSet high;           ///< H: residual degree >= t lambda
  VertexSet crowded;        ///< J: H vertices with H-degree >= t lambda / 2
  VertexSet high_sparse;    ///< H' = H \ J
  VertexSet spoke;          ///< S: far endpoints of kept edges
  VertexSet bad_spoke;      ///< B_S
  VertexSet bad_high;       ///< B_H'
  std::vector<Edge> kept;   ///< E~ as (h, s) with h in H', s in S, sorted
  std::vector<Edge> bad_kept;  ///< B_E~, subset of kept
  std::size_t quota_shortfall = 0;  ///< H' vertices with fewer eligible neighbors than the quota

  /// Kept-edge endpoints of a spoke vertex or a high vertex.
  std::vector<std::vector<Vertex>> kept_adj;
};

namespace detail {

inline std::size_t degree_within(const Graph& g, Vertex v, const VertexSet& s) {
  std::size_t d = 0;
  for (Vertex u : g.neighbors(v)) d += s.contains(u) ? 1 : 0;
  return d;
}

}  // namespace detail

/// Classifies the graph induced by `alive`. Kept edges of an H' vertex go to
/// its lowest-id residual neighbors outside H.
inline ArbClassification classify(const Graph& g, const VertexSet& alive, const ArbConfig& cfg) {
  const std::size_t n = g.n();
  const double th = cfg.high_threshold();
  const double beta = cfg.beta();
  ArbClassification c{VertexSet(n), VertexSet(n), VertexSet(n), VertexSet(n), VertexSet(n), VertexSet(n), {}, {}, 0,
                      std::vector<std::vector<Vertex>>(n)};
  for (Vertex v = 0; v < n; ++v)
    if (alive.contains(v) && static_cast<double>(detail::degree_within(g, v, alive)) >= th) c.high.insert(v);
  for (Vertex v = 0; v < n; ++v) {
    if (!c.high.contains(v)) continue;
    if (static_cast<double>(detail::degree_within(g, v, c.high)) >= th / 2.0)
      c.crowded.insert(v);
    else
      c.high_sparse.insert(v);
  }

  const std::size_t quota = cfg.quota();
  std::vector<Vertex> eligible;
  for (Vertex v = 0; v < n; ++v) {
    if (!c.high_sparse.contains(v)) continue;
    eligible.clear();
    for (Vertex u : g.neighbors(v))
      if (alive.contains(u) && !c.high.contains(u)) eligible.push_back(u);
    std::sort(eligible.begin(), eligible.end(), [&](Vertex a, Vertex b) { return g.id(a) < g.id(b); });
    if (eligible.size() < quota) ++c.quota_shortfall;
    eligible.resize(std::min(eligible.size(), quota));
    for (Vertex u : eligible) {
      c.kept.emplace_back(v, u);
      c.kept_adj[v].push_back(u);
      c.kept_adj[u].push_back(v);
      c.spoke.insert(u);
    }
  }
  std::sort(c.kept.begin(), c.kept.end());

  for (Vertex u = 0; u < n; ++u) {
    if (!c.spoke.contains(u)) continue;
    const double kept_deg = static_cast<double>(c.kept_adj[u].size());
    const double spoke_deg = static_cast<double>(detail::degree_within(g, u, c.spoke));
    if (kept_deg >= beta || spoke_deg >= beta * beta) c.bad_spoke.insert(u);
  }
  for (const Edge& e : c.kept)
    if (c.bad_spoke.contains(e.second)) c.bad_kept.push_back(e);

  for (Vertex v = 0; v < n; ++v) {
    if (!c.high_sparse.contains(v)) continue;
    std::size_t good = 0;
    for (Vertex u : c.kept_adj[v]) good += c.bad_spoke.contains(u) ? 0 : 1;
    if (static_cast<double>(good) < th / 4.0) c.bad_high.insert(v);
  }
  return c;
}

inline ArbClassification classify(const Graph& g, const ArbConfig& cfg) {
  return classify(g, VertexSet(g.n(), true), cfg);
}

/// One local-maxima round among the good spoke vertices. Joiners and their
/// neighborhoods leave `alive`. Charged 3 rounds.
inline std::vector<Vertex> reduce_round_mis(const Graph& g, const ArbClassification& cls, VertexSet& alive,
                                            IndependentSet& set, TrialContext& ctx) {
  const std::uint64_t r = ctx.next_round_index();
  auto good = [&](Vertex u) { return cls.spoke.contains(u) && !cls.bad_spoke.contains(u); };
  std::vector<std::uint64_t> value(g.n(), 0);
  for (Vertex u = 0; u < g.n(); ++u)
    if (good(u)) value[u] = NodeRng(ctx.seed(), g.id(u), r).next();
  std::vector<Vertex> joined;
  for (Vertex u = 0; u < g.n(); ++u) {
    if (!good(u)) continue;
    bool top = true;
    for (Vertex w : g.neighbors(u))
      if (good(w) && (value[w] > value[u] || (value[w] == value[u] && g.id(w) > g.id(u)))) {
        top = false;
        break;
      }
    if (top) joined.push_back(u);
  }
  for (Vertex u : joined) {
    set.add(g, u);
    alive.erase(u);
    for (Vertex w : g.neighbors(u)) alive.erase(w);
  }
  Gauges gg;
  gg.active = static_cast<std::int64_t>(alive.size());
  gg.in_is = static_cast<std::int64_t>(set.size());
  ctx.charge("reduce", "mis-round", 3, gg);
  return joined;
}

/// One proposal round: good spoke vertices propose along a random good kept
/// edge; each good H' vertex accepts its lowest-id proposer. Charged 3 rounds.
inline std::vector<Edge> reduce_round_mm(const Graph& g, const ArbClassification& cls, VertexSet& alive,
                                         Matching& m, TrialContext& ctx) {
  const std::uint64_t r = ctx.next_round_index();
  constexpr Vertex none = kNoVertex;
  std::vector<Vertex> best(g.n(), none);
  for (Vertex u = 0; u < g.n(); ++u) {
    if (!cls.spoke.contains(u) || cls.bad_spoke.contains(u)) continue;
    const auto& opts = cls.kept_adj[u];
    if (opts.empty()) continue;
    NodeRng rng(ctx.seed(), g.id(u), r);
    Vertex h = opts[rng.below(opts.size())];
    if (cls.bad_high.contains(h)) continue;
    if (best[h] == none || g.id(u) < g.id(best[h])) best[h] = u;
  }
  std::vector<Edge> added;
  for (Vertex h = 0; h < g.n(); ++h) {
    if (best[h] == none) continue;
    m.add(h, best[h]);
    alive.erase(h);
    alive.erase(best[h]);
    added.emplace_back(std::min(h, best[h]), std::max(h, best[h]));
  }
  std::sort(added.begin(), added.end());
  Gauges gg;
  gg.active = static_cast<std::int64_t>(alive.size());
  gg.matched = static_cast<std::int64_t>(2 * m.size());
  ctx.charge("reduce", "mm-round", 3, gg);
  return added;
}

struct ArbReduceResult {
  Matching matching;          ///< MM mode
  IndependentSet independent;  ///< MIS mode
  VertexSet residual;          ///< V \ V(M) or V \ N[I]
  std::size_t rounds = 0;
  std::size_t round_cap = 0;
  bool complete = false;            ///< H became empty within the cap
  bool residual_within_bound = false;  ///< residual max degree <= t lambda
  bool guarantee_regime = false;
  std::vector<std::size_t> high_sizes;  ///< |H| before each round and at the end
  std::size_t residual_max_degree = 0;
};

/// Repeats classify + one elimination round until no high-degree vertex is
/// left or the round cap is hit. Requires t >= 2^7.
inline ArbReduceResult degree_reduce(const Graph& g, const ArbConfig& cfg, TrialContext& ctx) {
  if (!(cfg.t >= 128.0)) throw PreconditionError("degree_reduce: t must be at least 2^7");
  if (!(cfg.lambda > 0)) throw PreconditionError("degree_reduce: lambda must be positive");
  ArbReduceResult out;
  out.matching = Matching(g.n());
  out.independent = IndependentSet(g.n());
  out.residual = VertexSet(g.n(), true);
  out.round_cap = cfg.round_cap(g.n());
  out.guarantee_regime = cfg.guarantee_regime(g.n());
  for (;;) {
    ArbClassification cls = classify(g, out.residual, cfg);
    out.high_sizes.push_back(cls.high.size());
    if (cls.high.empty()) {
      out.complete = true;
      break;
    }
    if (out.rounds >= out.round_cap) break;
    if (out.rounds == 0) {
      Gauges gg;
      gg.active = static_cast<std::int64_t>(out.residual.size());
      ctx.charge("reduce", "classify", 2, gg);
    }
    if (cfg.mode == ArbMode::MIS)
      reduce_round_mis(g, cls, out.residual, out.independent, ctx);
    else
      reduce_round_mm(g, cls, out.residual, out.matching, ctx);
    ++out.rounds;
  }
  for (Vertex v = 0; v < g.n(); ++v)
    if (out.residual.contains(v))
      out.residual_max_degree = std::max(out.residual_max_degree, detail::degree_within(g, v, out.residual));
  out.residual_within_bound = static_cast<double>(out.residual_max_degree) <= cfg.high_threshold();

  Trace& tr = ctx.trace();
  tr.set_metric("arb.rounds", static_cast<double>(out.rounds));
  tr.set_metric("arb.complete", out.complete ? 1.0 : 0.0);
  tr.set_metric("arb.residual_max_degree", static_cast<double>(out.residual_max_degree));
  tr.set_metric("arb.residual_within_bound", out.residual_within_bound ? 1.0 : 0.0);
  tr.set_metric("arb.guarantee_regime", out.guarantee_regime ? 1.0 : 0.0);
  return out;
}

/// The three counting facts for a graph of arboricity at most lambda.
struct SparsityReport {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t high_vertices = 0;  ///< degree >= t
  std::size_t high_edges = 0;     ///< both endpoints of degree >= t
  double edge_bound = 0;          ///< lambda n
  double vertex_bound = 0;        ///< lambda n / (t - lambda)
  double high_edge_bound = 0;     ///< lambda m / (t - lambda)
  bool part1 = false;
  bool part2 = false;
  bool part3 = false;
};

inline SparsityReport sparsity_predicates(const Graph& g, double lambda, double t) {
  SparsityReport r;
  r.n = g.n();
  r.m = g.m();
  for (Vertex v = 0; v < g.n(); ++v) r.high_vertices += static_cast<double>(g.degree(v)) >= t ? 1 : 0;
  for (auto [u, v] : g.edges())
    r.high_edges += (static_cast<double>(g.degree(u)) >= t && static_cast<double>(g.degree(v)) >= t) ? 1 : 0;
  const double inf = std::numeric_limits<double>::infinity();
  r.edge_bound = lambda * static_cast<double>(r.n);
  r.vertex_bound = t > lambda ? lambda * static_cast<double>(r.n) / (t - lambda) : inf;
  r.high_edge_bound = t > lambda ? lambda * static_cast<double>(r.m) / (t - lambda) : inf;
  r.part1 = static_cast<double>(r.m) <= r.edge_bound;
  r.part2 = static_cast<double>(r.high_vertices) <= r.vertex_bound;
  r.part3 = static_cast<double>(r.high_edges) <= r.high_edge_bound;
  return r;
}

}  // namespace symbrk
