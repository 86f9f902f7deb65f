#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "symbrk/config.hpp"
#include "symbrk/detfinish.hpp"
#include "symbrk/engine.hpp"
#include "symbrk/graph.hpp"
#include "symbrk/metrics.hpp"
#include "symbrk/solution.hpp"

namespace symbrk {

/// Stage schedule of the (delta + 1)-coloring algorithm.
struct ColoringParams {
  double c7 = 1.0;
  std::size_t n = 1;
  std::size_t max_degree = 0;

  /// d* = 32 c7 ln n.
  double d_star() const { return 32.0 * c7 * std::log(std::max<double>(2.0, static_cast<double>(n))); }

  /// r = ceil(log_{16/15} delta), and 1 when delta <= 1.
  std::size_t stages() const {
    if (max_degree <= 1) return 1;
    return static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(max_degree)) / std::log(16.0 / 15.0)));
  }

  double residual_bound() const { return 512.0 * d_star(); }

  /// Stages given to each residual class before gathering: ceil(4 log2 d*).
  std::size_t residual_stages() const {
    return static_cast<std::size_t>(std::ceil(4.0 * std::log2(std::max(2.0, d_star()))));
  }
};

/// Palette minus the colors of colored neighbors, ascending.
inline std::vector<Color> available_palette(const Graph& g, const PartialColoring& c, Vertex v) {
  std::vector<std::uint8_t> used(c.palette() + 1, 0);
  for (Vertex u : g.neighbors(v))
    if (c.is_colored(u)) used[c[u]] = 1;
  std::vector<Color> out;
  for (Color q = 1; q <= c.palette(); ++q)
    if (!used[q]) out.push_back(q);
  return out;
}

/// Per-color weights seen by an uncolored vertex and the exact probability
/// that no uncolored neighbor picks each color.
struct WeightReport {
  std::vector<Color> palette;
  std::vector<double> weight;        ///< sum over holders u of 1 / |palette(u)|
  std::vector<double> availability;  ///< product over holders u of (1 - 1 / |palette(u)|)
  std::size_t uncolored_degree = 0;
};

inline WeightReport weight_diagnostics(const Graph& g, const PartialColoring& c, Vertex v) {
  WeightReport r;
  r.palette = available_palette(g, c, v);
  r.weight.assign(r.palette.size(), 0.0);
  r.availability.assign(r.palette.size(), 1.0);
  std::vector<std::uint8_t> blocked(c.palette() + 1, 0);
  for (Vertex u : g.neighbors(v)) {
    if (c.is_colored(u)) continue;
    ++r.uncolored_degree;
    std::size_t distinct = 0;
    for (Vertex w : g.neighbors(u))
      if (c.is_colored(w) && !blocked[c[w]]) {
        blocked[c[w]] = 1;
        ++distinct;
      }
    const double size = static_cast<double>(c.palette() - distinct);
    for (std::size_t j = 0; j < r.palette.size(); ++j)
      if (!blocked[r.palette[j]]) {
        r.weight[j] += 1.0 / size;
        r.availability[j] *= 1.0 - 1.0 / size;
      }
    for (Vertex w : g.neighbors(u))
      if (c.is_colored(w)) blocked[c[w]] = 0;
  }
  return r;
}

/// Statistics gathered while stages run on the whole graph.
struct ColoringProbe {
  std::size_t pairs_checked = 0;  ///< sampled (v, q)
  std::size_t violations = 0;     ///< availability < (1/4)^w(q)
  std::size_t happy_samples = 0;  ///< happy vertex-stages
  std::size_t happy_colored = 0;
  double happy_rate() const {
    return happy_samples ? static_cast<double>(happy_colored) / static_cast<double>(happy_samples) : 0.0;
  }
};

namespace detail {

struct ColorNode {
  Color color = kUncolored;
  Color pick = kUncolored;
  bool eligible = true;
  std::vector<Color> palette;  // refreshed at the start of each stage
};

class ColorRun {
 public:
  ColorRun(const Graph& g, TrialContext& ctx, Color palette)
      : g_(&g), ctx_(&ctx), palette_(palette), net_(g, ctx, std::vector<ColorNode>(g.n())) {}

  ColorRun(const Graph& g, TrialContext& ctx, const PartialColoring& initial)
      : g_(&g), ctx_(&ctx), palette_(initial.palette()), net_(g, ctx, seed(initial)) {}

  bool uncolored(Vertex v) const { return net_.state(v).color == kUncolored; }
  bool participating(Vertex v) const { return uncolored(v) && net_.state(v).eligible; }

  std::size_t participating_count() const {
    return net_.count([](const ColorNode& s) { return s.color == kUncolored && s.eligible; });
  }

  Gauges gauges() const {
    Gauges g;
    g.colored = static_cast<std::int64_t>(net_.count([](const ColorNode& s) { return s.color != kUncolored; }));
    g.active = static_cast<std::int64_t>(participating_count());
    return g;
  }

  template <class Pred>
  void set_eligible(Pred&& pred) {
    for (Vertex v = 0; v < g_->n(); ++v) net_.mutable_state(v).eligible = pred(v);
  }

  PartialColoring coloring() const {
    PartialColoring c(g_->n(), palette_);
    for (Vertex v = 0; v < g_->n(); ++v)
      if (!uncolored(v)) c.assign(v, net_.state(v).color);
    return c;
  }

  /// Uncolored neighbors of each uncolored vertex.
  std::vector<std::uint32_t> uncolored_degrees() const {
    std::vector<std::uint32_t> deg(g_->n(), 0);
    for (Vertex v = 0; v < g_->n(); ++v) {
      if (!uncolored(v)) continue;
      for (Vertex u : g_->neighbors(v)) deg[v] += uncolored(u) ? 1 : 0;
    }
    return deg;
  }

  /// Participants pick a uniform color from their available palette and keep
  /// it unless an uncolored neighbor picked the same. Charged 2 rounds.
  void stage(std::string_view phase, std::string_view step, ColoringProbe* probe = nullptr) {
    const Color k = palette_;
    // Colors are announced; each participant rebuilds its palette and picks.
    net_.exchange([](const Node&, const ColorNode& s) { return s.color; },
                  [k](const Node&, ColorNode& s, Inbox<Color> in, NodeRng& rng) {
                    s.pick = kUncolored;
                    if (s.color != kUncolored || !s.eligible) return;
                    std::vector<std::uint8_t> used(k + 1, 0);
                    for (auto e : in) used[e.msg] = 1;
                    s.palette.clear();
                    for (Color q = 1; q <= k; ++q)
                      if (!used[q]) s.palette.push_back(q);
                    if (s.palette.empty()) return;
                    s.pick = s.palette[rng.below(s.palette.size())];
                  });
    if (probe) observe(*probe);
    net_.exchange([](const Node&, const ColorNode& s) { return s.pick; },
                  [](const Node&, ColorNode& s, Inbox<Color> in, NodeRng&) {
                    if (s.pick == kUncolored) return;
                    for (auto e : in)
                      if (e.msg == s.pick) {
                        s.pick = kUncolored;
                        return;
                      }
                    s.color = s.pick;
                  });
    if (probe) settle(*probe);
    ctx_->charge(phase, step, 2, gauges());
  }

  /// Gathers every component of uncolored vertices in `s` and colors it
  /// greedily around the colors already fixed outside. Returns the component
  /// count.
  std::size_t gather(const VertexSet& s, std::string_view phase, std::string_view step) {
    if (s.empty()) return 0;
    GatherSolver solver(*g_);
    std::uint64_t cost = 0;
    std::size_t comps = 0;
    for (const auto& comp : connected_components(*g_, s)) {
      ColoringProblem problem{palette_, {}};
      problem.forbidden.resize(comp.size());
      for (std::size_t i = 0; i < comp.size(); ++i)
        for (Vertex u : g_->neighbors(comp[i]))
          if (!uncolored(u)) problem.forbidden[i].push_back(net_.state(u).color);
      GatherSolution sol = solver.solve(comp, Problem::Coloring, &problem);
      for (auto [v, q] : sol.colors) net_.mutable_state(v).color = q;
      cost = std::max(cost, sol.rounds);
      ++comps;
    }
    ctx_->charge(phase, step, cost, gauges());
    return comps;
  }

 private:
  static std::vector<ColorNode> seed(const PartialColoring& c) {
    std::vector<ColorNode> init(c.size());
    for (Vertex v = 0; v < c.size(); ++v) init[v].color = c[v];
    return init;
  }

  // Before the commit: availability bound per (v, q) and which colors remain
  // unclaimed by neighbors' picks.
  void observe(ColoringProbe& probe) {
    const Graph& g = *g_;
    const PartialColoring c = coloring();
    happy_.clear();
    std::vector<std::uint8_t> claimed(palette_ + 1, 0);
    for (Vertex v = 0; v < g.n(); ++v) {
      if (!participating(v)) continue;
      WeightReport w = weight_diagnostics(g, c, v);
      for (std::size_t j = 0; j < w.palette.size(); ++j) {
        ++probe.pairs_checked;
        if (w.availability[j] < std::pow(0.25, w.weight[j]) - 1e-12) ++probe.violations;
      }
      const auto& mine = net_.state(v).palette;
      for (Vertex u : g.neighbors(v))
        if (participating(u)) claimed[net_.state(u).pick] = 1;
      std::size_t free = 0;
      for (Color q : mine) free += claimed[q] ? 0 : 1;
      for (Vertex u : g.neighbors(v))
        if (participating(u)) claimed[net_.state(u).pick] = 0;
      if (8 * free >= mine.size()) happy_.push_back(v);
    }
  }

  void settle(ColoringProbe& probe) {
    probe.happy_samples += happy_.size();
    for (Vertex v : happy_) probe.happy_colored += uncolored(v) ? 0 : 1;
  }

  const Graph* g_;
  TrialContext* ctx_;
  Color palette_;
  Network<ColorNode> net_;
  std::vector<Vertex> happy_;
};

}  // namespace detail

/// One coloring stage on `c` with every uncolored vertex participating.
inline PartialColoring color_stage(const Graph& g, const PartialColoring& c, TrialContext& ctx,
                                   ColoringProbe* probe = nullptr) {
  detail::ColorRun run(g, ctx, c);
  run.stage("phase1", "color-stage", probe);
  return run.coloring();
}

struct ColoringResult {
  PartialColoring coloring;
  Trace trace;
};

/// (delta + 1)-coloring: r stages on the whole graph, then the low-degree
/// and the high-degree residual classes each get further stages followed by
/// gathering.
inline PartialColoring delta_plus_one_in(const Graph& g, const Constants& k, TrialContext& ctx, std::size_t n_global,
                                         ColoringProbe* probe = nullptr) {
  ColoringParams p{k.c7, n_global, g.max_degree()};
  const Color palette = static_cast<Color>(g.max_degree() + 1);
  detail::ColorRun run(g, ctx, palette);
  Trace& tr = ctx.trace();

  std::size_t done = 0;
  for (; done < p.stages(); ++done) run.stage("phase1", "color-stage", probe);
  tr.set_metric("coloring.stages", static_cast<double>(done));

  const double d_star = p.d_star();
  auto deg = run.uncolored_degrees();
  std::size_t audit = 0;
  for (Vertex v = 0; v < g.n(); ++v) {
    std::size_t heavy = 0;
    for (Vertex u : g.neighbors(v)) heavy += (run.uncolored(u) && static_cast<double>(deg[u]) >= d_star) ? 1 : 0;
    if (static_cast<double>(heavy) >= p.residual_bound()) ++audit;
  }
  tr.set_metric("coloring.audit_violations", static_cast<double>(audit));

  std::vector<std::uint8_t> low(g.n(), 0), high(g.n(), 0);
  std::size_t low_count = 0, high_count = 0, high_max_degree = 0;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!run.uncolored(v)) continue;
    if (static_cast<double>(deg[v]) < d_star) {
      low[v] = 1;
      ++low_count;
    } else {
      high[v] = 1;
      ++high_count;
    }
  }
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!high[v]) continue;
    std::size_t d = 0;
    for (Vertex u : g.neighbors(v)) d += high[u];
    high_max_degree = std::max(high_max_degree, d);
  }
  tr.set_metric("coloring.low_vertices", static_cast<double>(low_count));
  tr.set_metric("coloring.high_vertices", static_cast<double>(high_count));
  tr.set_metric("coloring.high_max_degree", static_cast<double>(high_max_degree));
  tr.set_metric("coloring.high_within_bound", static_cast<double>(high_max_degree) < p.residual_bound() ? 1.0 : 0.0);
  tr.set_metric("coloring.split_branch", high_count > 0 ? 1.0 : 0.0);

  std::size_t comps = 0;
  for (const auto* cls : {&low, &high}) {
    const std::string_view label = cls == &low ? "low" : "high";
    run.set_eligible([&](Vertex v) { return (*cls)[v] != 0; });
    for (std::size_t i = 0; i < p.residual_stages(); ++i)
      run.stage("phase2", label == "low" ? "color-stage-low" : "color-stage-high");
    VertexSet rest(g.n());
    for (Vertex v = 0; v < g.n(); ++v)
      if (run.participating(v)) rest.insert(v);
    comps += run.gather(rest, "phase2", label == "low" ? "gather-low" : "gather-high");
  }
  tr.set_metric("coloring.gather_components", static_cast<double>(comps));
  return run.coloring();
}

inline ColoringResult delta_plus_one(const Graph& g, const TrialConfig& cfg, ColoringProbe* probe = nullptr) {
  cfg.validate();
  TrialContext ctx(cfg.seed, cfg.round_cap(g.n()));
  PartialColoring c = delta_plus_one_in(g, cfg.constants, ctx, g.n(), probe);
  return {std::move(c), std::move(ctx.trace())};
}

}  // namespace symbrk
