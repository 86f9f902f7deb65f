#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symbrk/arbreduce.hpp"
#include "symbrk/config.hpp"
#include "symbrk/detfinish.hpp"
#include "symbrk/engine.hpp"
#include "symbrk/graph.hpp"
#include "symbrk/metrics.hpp"
#include "symbrk/solution.hpp"

namespace symbrk {

/// Parameters of one halving call.
struct HalveConfig {
  HalveVariant variant = HalveVariant::WeakDiameter;
  double c6 = 4.0;
  std::size_t n = 1;  ///< network size known to every node

  double log_n() const { return n > 1 ? std::log2(static_cast<double>(n)) : 0.0; }

  /// Stage count: c6 sqrt(log n) or c6 log delta, at least 1.
  std::size_t kappa(std::size_t delta) const {
    const double l = variant == HalveVariant::WeakDiameter
                         ? std::sqrt(log_n())
                         : (delta > 1 ? std::log2(static_cast<double>(delta)) : 0.0);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(c6 * l)));
  }

  double diameter_bound() const { return 5.0 * std::sqrt(log_n()); }
  double size_bound(std::size_t delta) const { return std::pow(static_cast<double>(delta), 4.0) * log_n(); }
};

/// Survival counts of high-degree probe vertices, pairwise at distance >= 5.
struct HalveProbe {
  std::size_t samples = 0;
  std::size_t survivors = 0;
  double rate() const { return samples ? static_cast<double>(survivors) / static_cast<double>(samples) : 0.0; }
};

/// What the finishing step of one halving call observed.
struct HalveStats {
  std::size_t kappa = 0;
  std::size_t stages_run = 0;
  std::size_t components = 0;
  std::size_t diameter_failures = 0;  ///< components with weak diameter >= 5 sqrt(log n)
  std::size_t size_failures = 0;      ///< components with size >= delta^4 log n
  std::size_t max_weak_diameter = 0;
  std::size_t max_component_size = 0;
  bool postcondition = true;  ///< residual active degree < delta / 2

  /// Whether the criterion of the configured variant held for every component.
  bool criterion_held(HalveVariant v) const {
    return v == HalveVariant::WeakDiameter ? diameter_failures == 0 : size_failures == 0;
  }
};

namespace detail {

struct MisNode {
  bool in_set = false;
  bool covered = false;   // in the set or adjacent to it
  bool eligible = true;   // takes part in the current subroutine
  bool selected = false;
  bool joined = false;
  std::uint64_t value = 0;

  bool active() const { return !covered && eligible; }
};

/// Shared machinery for the MIS algorithms: node states on one graph, plus
/// observer-side helpers for the finishing steps.
class MisRun {
 public:
  MisRun(const Graph& g, TrialContext& ctx, const VertexSet* active = nullptr)
      : g_(&g), ctx_(&ctx), net_(g, ctx, initial(g, active)), ws_(g.n()) {}

  const Graph& graph() const { return *g_; }
  TrialContext& context() { return *ctx_; }
  const MisNode& state(Vertex v) const { return net_.state(v); }
  bool active(Vertex v) const { return net_.state(v).active(); }

  std::size_t active_count() const {
    return net_.count([](const MisNode& s) { return s.active(); });
  }

  Gauges gauges() const {
    Gauges g;
    g.active = static_cast<std::int64_t>(active_count());
    g.in_is = static_cast<std::int64_t>(net_.count([](const MisNode& s) { return s.in_set; }));
    return g;
  }

  /// Number of active neighbors of each active vertex (0 elsewhere).
  std::vector<std::uint32_t> active_degrees() const {
    std::vector<std::uint32_t> deg(g_->n(), 0);
    for (Vertex v = 0; v < g_->n(); ++v) {
      if (!active(v)) continue;
      for (Vertex u : g_->neighbors(v)) deg[v] += active(u) ? 1 : 0;
    }
    return deg;
  }

  VertexSet active_set() const {
    VertexSet s(g_->n());
    for (Vertex v = 0; v < g_->n(); ++v)
      if (active(v)) s.insert(v);
    return s;
  }

  template <class Pred>
  void set_eligible(Pred&& pred) {
    for (Vertex v = 0; v < g_->n(); ++v) net_.mutable_state(v).eligible = pred(v);
  }

  /// Each active vertex selects itself with probability 1 / (delta + 1) and
  /// joins if no active neighbor selected itself. Charged 2 rounds.
  std::vector<Vertex> halve_stage(std::size_t delta, std::string_view phase, HalveProbe* probe = nullptr) {
    std::vector<Vertex> probes;
    if (probe) probes = pick_probes(delta);
    net_.local([delta](const Node&, MisNode& s, NodeRng& rng) {
      s.joined = false;
      s.selected = s.active() && rng.below(static_cast<std::uint64_t>(delta) + 1) == 0;
    });
    net_.exchange([](const Node&, const MisNode& s) { return s.selected; },
                  [](const Node&, MisNode& s, Inbox<bool> in, NodeRng&) {
                    if (!s.selected) return;
                    for (auto e : in)
                      if (e.msg) return;
                    s.joined = true;
                  });
    std::vector<Vertex> joined = commit();
    ctx_->charge(phase, "halve-stage", 2, gauges());
    if (probe) {
      probe->samples += probes.size();
      for (Vertex v : probes) probe->survivors += active(v) ? 1 : 0;
    }
    return joined;
  }

  /// Active vertices whose (random value, id) beats every active neighbor join.
  /// Charged 2 rounds.
  std::vector<Vertex> metivier_round(std::string_view phase) {
    net_.local([](const Node&, MisNode& s, NodeRng& rng) {
      s.joined = false;
      s.value = s.active() ? rng.next() : 0;
    });
    net_.exchange([](const Node&, const MisNode& s) { return std::pair<bool, std::uint64_t>{s.active(), s.value}; },
                  [](const Node& me, MisNode& s, Inbox<std::pair<bool, std::uint64_t>> in, NodeRng&) {
                    if (!s.active()) return;
                    for (auto e : in) {
                      const auto& [act, val] = e.msg;
                      if (act && (val > s.value || (val == s.value && e.from_id > me.id))) return;
                    }
                    s.joined = true;
                  });
    std::vector<Vertex> joined = commit();
    ctx_->charge(phase, "metivier-round", 2, gauges());
    return joined;
  }

  /// One halving call: kappa stages, then every component of the vertices
  /// that kept degree >= delta / 2 is solved by gathering.
  HalveStats halve(std::size_t delta, const HalveConfig& hc, HalveProbe* probe = nullptr) {
    HalveStats st;
    st.kappa = hc.kappa(delta);
    for (std::size_t i = 0; i < st.kappa; ++i) {
      halve_stage(delta, "phase1", probe);
      ++st.stages_run;
    }
    auto deg = active_degrees();
    VertexSet u(g_->n());
    for (Vertex v = 0; v < g_->n(); ++v)
      if (active(v) && 2 * static_cast<std::size_t>(deg[v]) >= delta) u.insert(v);
    const auto sols = solve_components(u, "phase2", "halve-finish");
    for (const auto& sol : sols) {
      ++st.components;
      const std::size_t size = sol.second;
      st.max_component_size = std::max(st.max_component_size, size);
      st.max_weak_diameter = std::max(st.max_weak_diameter, sol.first);
      if (static_cast<double>(sol.first) >= hc.diameter_bound()) ++st.diameter_failures;
      if (static_cast<double>(size) >= hc.size_bound(delta)) ++st.size_failures;
    }
    deg = active_degrees();
    for (Vertex v = 0; v < g_->n(); ++v)
      if (active(v) && 2 * static_cast<std::size_t>(deg[v]) >= delta) st.postcondition = false;

    Trace& tr = ctx_->trace();
    tr.add_metric("halve.calls", 1);
    tr.add_metric("halve.u_components", static_cast<double>(st.components));
    tr.add_metric("halve.diameter_failures", static_cast<double>(st.diameter_failures));
    tr.add_metric("halve.size_failures", static_cast<double>(st.size_failures));
    tr.add_metric("halve.postcondition_failures", st.postcondition ? 0.0 : 1.0);
    tr.max_metric("halve.max_weak_diameter", static_cast<double>(st.max_weak_diameter));
    tr.max_metric("halve.max_component_size", static_cast<double>(st.max_component_size));
    return st;
  }

  /// Gathers and solves MIS on every component of G(s), whose vertices must
  /// be undecided; returns (weak diameter, size) per component. The round
  /// charge is the most expensive component, since they run in parallel.
  std::vector<std::pair<std::size_t, std::size_t>> solve_components(const VertexSet& s, std::string_view phase,
                                                                    std::string_view step) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (s.empty()) return out;
    GatherSolver solver(*g_);
    std::uint64_t cost = 0;
    for (const auto& comp : connected_components(*g_, s)) {
      GatherSolution sol = solver.solve(comp, Problem::MIS);
      join_all(sol.independent);
      cost = std::max(cost, sol.rounds);
      out.emplace_back(sol.weak_diameter, comp.size());
    }
    ctx_->charge(phase, step, cost, gauges());
    return out;
  }

  /// Applies an externally computed independent set of undecided vertices.
  void join_all(std::span<const Vertex> vs) {
    for (Vertex v : vs) {
      MisNode& s = net_.mutable_state(v);
      if (s.covered) throw std::logic_error("joining vertex is already covered");
      s.in_set = true;
      s.covered = true;
    }
    for (Vertex v : vs)
      for (Vertex u : g_->neighbors(v)) {
        MisNode& w = net_.mutable_state(u);
        if (w.in_set) throw std::logic_error("joined vertices are not independent");
        w.covered = true;
      }
  }

  IndependentSet result() const {
    IndependentSet out(g_->n());
    for (Vertex v = 0; v < g_->n(); ++v)
      if (net_.state(v).in_set) out.add(*g_, v);
    return out;
  }

 private:
  static std::vector<MisNode> initial(const Graph& g, const VertexSet* active) {
    std::vector<MisNode> init(g.n());
    if (active)
      for (Vertex v = 0; v < g.n(); ++v) init[v].covered = !active->contains(v);
    return init;
  }

  /// Announces joins; joiners enter the set and their neighbors are covered.
  std::vector<Vertex> commit() {
    std::vector<Vertex> joined;
    for (Vertex v = 0; v < g_->n(); ++v)
      if (net_.state(v).joined) joined.push_back(v);
    net_.exchange([](const Node&, const MisNode& s) { return s.joined; },
                  [](const Node&, MisNode& s, Inbox<bool> in, NodeRng&) {
                    if (s.joined) {
                      s.joined = false;
                      s.in_set = true;
                      s.covered = true;
                      return;
                    }
                    for (auto e : in)
                      if (e.msg) {
                        s.covered = true;
                        return;
                      }
                  });
    return joined;
  }

  /// Greedy set of active vertices with degree >= delta / 2, pairwise at
  /// distance >= 5 in G.
  std::vector<Vertex> pick_probes(std::size_t delta) {
    auto deg = active_degrees();
    std::vector<std::uint8_t> blocked(g_->n(), 0);
    std::vector<Vertex> probes;
    for (Vertex v = 0; v < g_->n(); ++v) {
      if (!active(v) || blocked[v] || 2 * static_cast<std::size_t>(deg[v]) < delta) continue;
      probes.push_back(v);
      ws_.run(
          *g_, v, [](Vertex) { return true; },
          [&](Vertex w, std::uint32_t) {
            blocked[w] = 1;
            return true;
          },
          4);
    }
    return probes;
  }

  const Graph* g_;
  TrialContext* ctx_;
  Network<MisNode> net_;
  BfsWorkspace ws_;
};

inline std::size_t max_active_degree(const MisRun& run) {
  auto deg = run.active_degrees();
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

}  // namespace detail

/// One halving stage on `active` with degree bound `delta`; returns joiners.
inline std::vector<Vertex> halve_stage(const Graph& g, const VertexSet& active, std::size_t delta, TrialContext& ctx) {
  detail::MisRun run(g, ctx, &active);
  return run.halve_stage(delta, "phase1");
}

struct HalveResult {
  std::vector<Vertex> joined;
  VertexSet residual;
  HalveStats stats;
};

/// One halving call on `active`; the residual has active degree < delta / 2.
inline HalveResult halve(const Graph& g, const VertexSet& active, std::size_t delta, const HalveConfig& hc,
                         TrialContext& ctx, HalveProbe* probe = nullptr) {
  detail::MisRun run(g, ctx, &active);
  HalveResult out;
  out.stats = run.halve(delta, hc, probe);
  for (Vertex v = 0; v < g.n(); ++v)
    if (run.state(v).in_set) out.joined.push_back(v);
  out.residual = run.active_set();
  return out;
}

/// One local-maxima round on `active`; returns joiners.
inline std::vector<Vertex> metivier_round(const Graph& g, const VertexSet& active, TrialContext& ctx) {
  detail::MisRun run(g, ctx, &active);
  return run.metivier_round("phase1");
}

namespace detail {

/// Halving with bounds delta, delta / 2, ..., 0. The schedule is fixed, so
/// calls after everything is decided still run (as no-ops) and are charged.
inline void iterated_halving(MisRun& run, std::size_t delta, const HalveConfig& hc, HalveProbe* probe = nullptr) {
  for (;;) {
    run.halve(delta, hc, probe);
    if (delta == 0) return;
    delta /= 2;
  }
}

/// Runs iterated halving on G(s) as a nested pipeline and joins the result.
inline void nested_mis(MisRun& run, const VertexSet& s, const Constants& k, HalveVariant variant,
                       std::size_t n_global) {
  if (s.empty()) return;
  const Graph& g = run.graph();
  InducedSubgraph sub = induced_subgraph(g, s);
  Gauges offset = run.gauges();
  offset.active -= static_cast<std::int64_t>(sub.graph.n());
  NestedScope scope(run.context(), offset, "phase2");
  MisRun inner(sub.graph, run.context());
  iterated_halving(inner, sub.graph.max_degree(), HalveConfig{variant, k.c6, n_global});
  std::vector<Vertex> joined;
  for (Vertex v = 0; v < sub.graph.n(); ++v)
    if (inner.state(v).in_set) joined.push_back(sub.to_parent[v]);
  std::sort(joined.begin(), joined.end());
  run.join_all(joined);
}

}  // namespace detail

struct MisResult {
  IndependentSet set;
  Trace trace;
};

/// Iterated halving on `g` within an existing trial. `n_global` is the
/// network size known to the nodes.
inline IndependentSet mis_general_in(const Graph& g, const Constants& k, HalveVariant variant, TrialContext& ctx,
                                     std::size_t n_global, HalveProbe* probe = nullptr) {
  detail::MisRun run(g, ctx);
  detail::iterated_halving(run, g.max_degree(), HalveConfig{variant, k.c6, n_global}, probe);
  return run.result();
}

inline MisResult mis_general(const Graph& g, const TrialConfig& cfg, HalveProbe* probe = nullptr) {
  cfg.validate();
  TrialContext ctx(cfg.seed, cfg.round_cap(g.n()));
  IndependentSet s = mis_general_in(g, cfg.constants, cfg.variant, ctx, g.n(), probe);
  return {std::move(s), std::move(ctx.trace())};
}

/// Local-maxima rounds, then the high- and low-degree remainders are each
/// finished by iterated halving. Requires girth > 6.
inline MisResult mis_high_girth(const Graph& g, const TrialConfig& cfg) {
  cfg.validate();
  if (Girth gi = girth(g); gi && *gi <= 6) throw PreconditionError("mis_high_girth: girth must exceed 6");
  TrialContext ctx(cfg.seed, cfg.round_cap(g.n()));
  const Constants& k = cfg.constants;
  const double log_n = g.n() > 1 ? std::log2(static_cast<double>(g.n())) : 0.0;
  const double loglog_n = log_n > 1 ? std::log2(log_n) : 0.0;
  const double log_delta = g.max_degree() > 1 ? std::log2(static_cast<double>(g.max_degree())) : 0.0;
  const auto rounds = static_cast<std::size_t>(std::ceil(std::max(0.0, k.c * log_delta * loglog_n)));

  detail::MisRun run(g, ctx);
  std::size_t done = 0;
  for (; done < rounds; ++done) run.metivier_round("phase1");

  auto deg = run.active_degrees();
  VertexSet high(g.n());
  for (Vertex v = 0; v < g.n(); ++v)
    if (run.active(v) && static_cast<double>(deg[v]) >= k.c_prime * log_n) high.insert(v);
  detail::nested_mis(run, high, k, cfg.variant, g.n());
  detail::nested_mis(run, run.active_set(), k, cfg.variant, g.n());

  Trace& tr = ctx.trace();
  tr.set_metric("girth.metivier_rounds", static_cast<double>(done));
  tr.set_metric("girth.high_vertices", static_cast<double>(high.size()));
  return {run.result(), std::move(ctx.trace())};
}

/// Forest MIS: optional degree pre-reduction, epochs of local-maxima rounds
/// with bad-vertex marking, then the high/low split finished by local-maxima
/// rounds to exhaustion and bad components finished by gathering.
inline MisResult mis_tree(const Graph& g, const TrialConfig& cfg) {
  cfg.validate();
  if (!is_forest(g)) throw PreconditionError("mis_tree: input must be a forest");
  TrialContext ctx(cfg.seed, cfg.round_cap(g.n()));
  const Constants& k = cfg.constants;
  Trace& tr = ctx.trace();
  const std::size_t n = g.n();
  const double log_n = n > 1 ? std::log2(static_cast<double>(n)) : 0.0;
  const double loglog_n = log_n > 1 ? std::log2(log_n) : 0.0;

  detail::MisRun run(g, ctx);
  const double reduce_limit =
      loglog_n > 0 ? std::exp2(std::sqrt(log_n / loglog_n)) : std::numeric_limits<double>::infinity();
  if (static_cast<double>(g.max_degree()) > reduce_limit) {
    ArbConfig ac{1.0, std::max(128.0, reduce_limit), cfg.arb.c, ArbMode::MIS};
    ArbReduceResult red = degree_reduce(g, ac, ctx);
    run.join_all(red.independent.members());
    tr.set_metric("tree.pre_reduction_t", ac.t);
  }

  const std::size_t delta = detail::max_active_degree(run);
  const double log_delta = delta > 1 ? std::log2(static_cast<double>(delta)) : 0.0;
  const double floor_threshold = k.c_prime * log_delta;
  const auto epochs = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(log_delta)));
  const auto epoch_len = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(k.c * (log_delta > 1 ? std::log2(log_delta) : 0.0))));
  const std::size_t max_shift = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(log_delta)));

  std::vector<std::uint8_t> bad(n, 0);
  std::size_t bad_count = 0;
  for (std::size_t i = 1; i <= epochs; ++i) {
    for (std::size_t r = 0; r < epoch_len; ++r) run.metivier_round("phase1");
    // Each vertex learns its neighbors' degrees and checks the decay profile.
    auto deg = run.active_degrees();
    std::vector<Vertex> marked;
    for (Vertex v = 0; v < n; ++v) {
      if (!run.active(v)) continue;
      for (std::size_t d = 1; d <= max_shift; ++d) {
        const double high = static_cast<double>(delta) * std::exp2(static_cast<double>(d) - static_cast<double>(i));
        const double limit = std::max(static_cast<double>(delta) * std::exp2(-static_cast<double>(i + d)),
                                      floor_threshold);
        std::size_t count = 0;
        for (Vertex w : g.neighbors(v)) count += (run.active(w) && static_cast<double>(deg[w]) > high) ? 1 : 0;
        if (static_cast<double>(count) >= limit) {
          marked.push_back(v);
          break;
        }
      }
    }
    for (Vertex v : marked) bad[v] = 1;
    bad_count += marked.size();
    run.set_eligible([&](Vertex v) { return bad[v] == 0; });
    ctx.charge("phase1", "bad-check", 1, run.gauges());
  }

  auto deg = run.active_degrees();
  std::vector<std::uint8_t> high(n, 0);
  for (Vertex v = 0; v < n; ++v) high[v] = run.active(v) && static_cast<double>(deg[v]) >= floor_threshold;
  run.set_eligible([&](Vertex v) { return high[v] != 0; });
  while (run.active_count() > 0) run.metivier_round("phase2");
  run.set_eligible([&](Vertex v) { return bad[v] == 0; });
  while (run.active_count() > 0) run.metivier_round("phase2");

  run.set_eligible([](Vertex) { return true; });
  VertexSet leftover(n);
  for (Vertex v = 0; v < n; ++v)
    if (bad[v] && run.active(v)) leftover.insert(v);
  std::size_t max_bad = 0;
  for (const auto& [wd, size] : run.solve_components(leftover, "phase2", "bad-components"))
    max_bad = std::max(max_bad, size);

  tr.set_metric("tree.epochs", static_cast<double>(epochs));
  tr.set_metric("tree.epoch_length", static_cast<double>(epoch_len));
  tr.set_metric("tree.bad_vertices", static_cast<double>(bad_count));
  tr.set_metric("tree.max_bad_component", static_cast<double>(max_bad));
  return {run.result(), std::move(ctx.trace())};
}

/// Local-maxima MIS written purely as a node state machine, for the generic
/// driver: even steps compare values, odd steps commit joins.
struct MetivierProtocol {
  struct State {
    bool active = true;
    bool in_set = false;
    bool joined = false;
    std::uint64_t value = 0;
    std::uint64_t step = 0;
  };
  struct Message {
    bool active;
    std::uint64_t value;
    bool joined;
  };

  State init(const Node&, NodeRng& rng) const {
    State s;
    s.value = rng.next();
    return s;
  }

  Message send(const Node&, const State& s) const { return {s.active, s.value, s.joined}; }

  void receive(const Node& me, State& s, Inbox<Message> in, NodeRng& rng) const {
    if (s.step++ % 2 == 0) {
      s.joined = true;
      for (auto e : in)
        if (e.msg.active && (e.msg.value > s.value || (e.msg.value == s.value && e.from_id > me.id))) {
          s.joined = false;
          break;
        }
      return;
    }
    if (s.joined) {
      s.in_set = true;
      s.active = false;
      return;
    }
    for (auto e : in)
      if (e.msg.joined) {
        s.active = false;
        return;
      }
    s.value = rng.next();
  }

  bool halted(const State& s) const { return !s.active; }

  StepInfo step_info(std::uint64_t step) const {
    return {"phase1", step % 2 == 0 ? "metivier-compare" : "metivier-commit", 1};
  }

  Gauges gauges(std::span<const State> all) const {
    Gauges g;
    for (const State& s : all) {
      g.active += s.active ? 1 : 0;
      g.in_is += s.in_set ? 1 : 0;
    }
    return g;
  }

  std::vector<Vertex> output(std::span<const State> all) const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < all.size(); ++v)
      if (all[v].in_set) out.push_back(v);
    return out;
  }
};

}  // namespace symbrk
