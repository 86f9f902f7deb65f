#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "symbrk/arbreduce.hpp"
#include "symbrk/coloring.hpp"
#include "symbrk/config.hpp"
#include "symbrk/engine.hpp"
#include "symbrk/graph.hpp"
#include "symbrk/mis.hpp"
#include "symbrk/mm.hpp"
#include "symbrk/solution.hpp"
#include "symbrk/verify.hpp"

namespace symbrk {

/// Degree reduction in MIS mode, then iterated halving on the residual.
inline MisResult arb_mis(const Graph& g, const TrialConfig& cfg) {
  cfg.validate();
  TrialContext ctx(cfg.seed, cfg.round_cap(g.n()));
  ArbConfig ac = ArbConfig::from(cfg.arb);
  ac.mode = ArbMode::MIS;
  ArbReduceResult red = degree_reduce(g, ac, ctx);
  InducedSubgraph sub = induced_subgraph(g, red.residual);
  IndependentSet out = std::move(red.independent);
  {
    Gauges offset;
    offset.in_is = static_cast<std::int64_t>(out.size());
    NestedScope scope(ctx, offset, "");
    IndependentSet inner = mis_general_in(sub.graph, cfg.constants, cfg.variant, ctx, g.n());
    for (Vertex v : inner.members()) out.add(g, sub.to_parent[v]);
  }
  return {std::move(out), std::move(ctx.trace())};
}

/// Degree reduction in MM mode, then the two-phase matching on the residual.
inline MmResult arb_mm(const Graph& g, const TrialConfig& cfg) {
  cfg.validate();
  TrialContext ctx(cfg.seed, cfg.round_cap(g.n()));
  ArbConfig ac = ArbConfig::from(cfg.arb);
  ac.mode = ArbMode::MM;
  ArbReduceResult red = degree_reduce(g, ac, ctx);
  InducedSubgraph sub = induced_subgraph(g, red.residual);
  Matching out = std::move(red.matching);
  {
    Gauges offset;
    offset.matched = static_cast<std::int64_t>(2 * out.size());
    NestedScope scope(ctx, offset, "");
    Matching inner = maximal_matching_in(sub.graph, cfg.constants, ctx, g.n());
    for (auto [u, v] : inner.edges()) out.add(sub.to_parent[u], sub.to_parent[v]);
  }
  return {std::move(out), std::move(ctx.trace())};
}

/// Result of one trial of any algorithm, already checked by the verifiers.
struct Outcome {
  std::optional<Matching> matching;
  std::optional<IndependentSet> independent;
  std::optional<PartialColoring> coloring;
  Trace trace;
  bool valid = false;
  bool maximal_or_total = false;
  std::size_t solution_size = 0;
  std::map<std::string, bool> bound_flags;
};

namespace detail {

inline void halve_flags(const Trace& tr, HalveVariant variant, std::map<std::string, bool>& flags) {
  if (!tr.has_metric("halve.calls")) return;
  flags["halve_postcondition"] = tr.metric("halve.postcondition_failures") == 0;
  const char* key = variant == HalveVariant::WeakDiameter ? "halve.diameter_failures" : "halve.size_failures";
  flags["halve_criterion"] = tr.metric(key) == 0;
}

inline void arb_flags(const Trace& tr, std::map<std::string, bool>& flags) {
  flags["reduction_complete"] = tr.metric("arb.complete") != 0;
  flags["residual_degree"] = tr.metric("arb.residual_within_bound") != 0;
}

inline void finish(Outcome& o, const Graph& g, Matching m) {
  MatchingCheck c = check_matching(g, m);
  o.valid = c.valid;
  o.maximal_or_total = c.maximal;
  o.solution_size = m.size();
  o.matching = std::move(m);
}

inline void finish(Outcome& o, const Graph& g, IndependentSet s) {
  MisCheck c = check_mis(g, s);
  o.valid = c.independent;
  o.maximal_or_total = c.maximal;
  o.solution_size = s.size();
  o.independent = std::move(s);
}

inline void finish(Outcome& o, const Graph& g, PartialColoring col) {
  ColoringCheck c = check_coloring(g, col, static_cast<Color>(g.max_degree() + 1));
  o.valid = c.proper && c.within_palette;
  o.maximal_or_total = c.total;
  Color used = 0;
  for (Color q : col.colors()) used = std::max(used, q);
  o.solution_size = used;
  o.coloring = std::move(col);
}

}  // namespace detail

/// Runs the configured algorithm and verifies its output.
inline Outcome run_algorithm(const Graph& g, const TrialConfig& cfg) {
  Outcome o;
  auto& flags = o.bound_flags;
  const double log_n = g.n() > 1 ? std::log2(static_cast<double>(g.n())) : 0.0;
  switch (cfg.algorithm) {
    case Algorithm::MM: {
      auto r = maximal_matching(g, cfg);
      o.trace = std::move(r.trace);
      detail::finish(o, g, std::move(r.matching));
      flags["phase2_size"] = o.trace.metric("mm.phase2.oversized_components") == 0;
      break;
    }
    case Algorithm::MIS: {
      auto r = mis_general(g, cfg);
      o.trace = std::move(r.trace);
      detail::finish(o, g, std::move(r.set));
      detail::halve_flags(o.trace, cfg.variant, flags);
      break;
    }
    case Algorithm::MisGirth: {
      auto r = mis_high_girth(g, cfg);
      o.trace = std::move(r.trace);
      detail::finish(o, g, std::move(r.set));
      detail::halve_flags(o.trace, cfg.variant, flags);
      break;
    }
    case Algorithm::MisTree: {
      auto r = mis_tree(g, cfg);
      o.trace = std::move(r.trace);
      detail::finish(o, g, std::move(r.set));
      flags["bad_components"] = o.trace.metric("tree.max_bad_component") <= 3.0 * log_n;
      break;
    }
    case Algorithm::Coloring: {
      auto r = delta_plus_one(g, cfg);
      o.trace = std::move(r.trace);
      detail::finish(o, g, std::move(r.coloring));
      flags["residual_audit"] = o.trace.metric("coloring.audit_violations") == 0;
      flags["high_degree_bound"] = o.trace.metric("coloring.high_within_bound", 1.0) != 0;
      break;
    }
    case Algorithm::ArbReduce: {
      if (cfg.arb.mode == ArbMode::MIS) {
        auto r = arb_mis(g, cfg);
        o.trace = std::move(r.trace);
        detail::finish(o, g, std::move(r.set));
        detail::halve_flags(o.trace, cfg.variant, flags);
      } else {
        auto r = arb_mm(g, cfg);
        o.trace = std::move(r.trace);
        detail::finish(o, g, std::move(r.matching));
        flags["phase2_size"] = o.trace.metric("mm.phase2.oversized_components") == 0;
      }
      detail::arb_flags(o.trace, flags);
      break;
    }
  }
  return o;
}

}  // namespace symbrk
