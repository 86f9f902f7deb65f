#pragma once

#include <concepts>
#include <cstdint>
#include <iterator>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "symbrk/config.hpp"
#include "symbrk/graph.hpp"
#include "symbrk/rng.hpp"
#include "symbrk/trace.hpp"

namespace symbrk {

/// What a node knows about itself.
struct Node {
  Vertex index;
  NodeId id;
  std::size_t degree;
};

/// Round accounting and randomness source shared by every step of one trial.
class TrialContext {
 public:
  TrialContext(std::uint64_t seed, std::uint64_t round_cap) : seed_(seed), cap_(round_cap) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t round_cap() const { return cap_; }

  /// Fresh index for keying node randomness; distinct for every exchange.
  std::uint64_t next_round_index() { return draw_index_++; }

  /// Appends a record for a logical step costing `rounds` synchronous rounds.
  void charge(std::string_view phase, std::string_view step, std::uint64_t rounds, Gauges g) {
    if (rounds == 0) throw std::logic_error("a charged step must cost at least one round");
    trace_.append({trace_.total_rounds(), phase_override.empty() ? std::string(phase) : phase_override,
                   std::string(step), rounds, g + offset});
    if (trace_.total_rounds() > cap_) throw TrialAborted(cap_, trace_);
  }

  Trace& trace() { return trace_; }
  const Trace& trace() const { return trace_; }

  /// Added to gauges of every record; lets nested runs on subgraphs report
  /// progress of the whole pipeline.
  Gauges offset;

  /// When non-empty, replaces the phase label of every charge; lets a nested
  /// pipeline be booked under the outer algorithm's phase.
  std::string phase_override;

 private:
  std::uint64_t seed_;
  std::uint64_t cap_;
  std::uint64_t draw_index_ = 0;
  Trace trace_;
};

/// Saves and restores the gauge offset and phase override around a nested run.
class NestedScope {
 public:
  NestedScope(TrialContext& ctx, Gauges offset, std::string phase)
      : ctx_(ctx), offset_(ctx.offset), phase_(ctx.phase_override) {
    ctx.offset = offset;
    ctx.phase_override = std::move(phase);
  }
  NestedScope(const NestedScope&) = delete;
  NestedScope& operator=(const NestedScope&) = delete;
  ~NestedScope() {
    ctx_.offset = offset_;
    ctx_.phase_override = std::move(phase_);
  }

 private:
  TrialContext& ctx_;
  Gauges offset_;
  std::string phase_;
};

/// The messages a node received in one round, one per neighbor.
template <class Msg>
class Inbox {
 public:
  struct Entry {
    Vertex from;
    NodeId from_id;
    const Msg& msg;
  };

  class iterator {
   public:
    using value_type = Entry;
    using difference_type = std::ptrdiff_t;
    iterator(const Inbox* box, std::size_t i) : box_(box), i_(i) {}
    Entry operator*() const {
      Vertex u = box_->nbrs_[i_];
      return {u, box_->graph_->id(u), box_->msgs_[u]};
    }
    iterator& operator++() {
      ++i_;
      return *this;
    }
    bool operator==(const iterator& o) const { return i_ == o.i_; }

   private:
    const Inbox* box_;
    std::size_t i_;
  };

  Inbox(const Graph& g, std::span<const Msg> msgs, Vertex v) : graph_(&g), nbrs_(g.neighbors(v)), msgs_(msgs) {}

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, nbrs_.size()}; }
  std::size_t size() const { return nbrs_.size(); }

 private:
  const Graph* graph_;
  std::span<const Vertex> nbrs_;
  std::span<const Msg> msgs_;
};

/// Lockstep LOCAL-model network of per-node state machines.
///
/// In an exchange every node first broadcasts a message computed from its own
/// state only; after the barrier every node updates its own state from its
/// inbox and its private random stream. Neither callback is given access to
/// any other node's state.
template <class State>
class Network {
 public:
  Network(const Graph& g, TrialContext& ctx, std::vector<State> init)
      : graph_(&g), ctx_(&ctx), states_(std::move(init)) {
    if (states_.size() != g.n()) throw std::invalid_argument("one initial state per vertex required");
  }

  Node node(Vertex v) const { return {v, graph_->id(v), graph_->degree(v)}; }

  /// One synchronous round: send(Node, const State&) -> Msg, then
  /// recv(Node, State&, Inbox<Msg>, NodeRng&).
  template <class Send, class Recv>
  void exchange(Send&& send, Recv&& recv) {
    using Msg = std::decay_t<std::invoke_result_t<Send&, const Node&, const State&>>;
    const std::size_t n = graph_->n();
    // A plain array rather than std::vector, which would pack bool messages.
    auto out = std::make_unique<Msg[]>(n);
    for (Vertex v = 0; v < n; ++v) out[v] = send(node(v), std::as_const(states_[v]));
    const std::uint64_t r = ctx_->next_round_index();
    const std::span<const Msg> view(out.get(), n);
    for (Vertex v = 0; v < n; ++v) {
      NodeRng rng(ctx_->seed(), graph_->id(v), r);
      recv(node(v), states_[v], Inbox<Msg>(*graph_, view, v), rng);
    }
  }

  /// Communication-free computation: fn(Node, State&, NodeRng&).
  template <class Fn>
  void local(Fn&& fn) {
    const std::uint64_t r = ctx_->next_round_index();
    for (Vertex v = 0; v < graph_->n(); ++v) {
      NodeRng rng(ctx_->seed(), graph_->id(v), r);
      fn(node(v), states_[v], rng);
    }
  }

  template <class Pred>
  std::size_t count(Pred&& pred) const {
    std::size_t c = 0;
    for (const auto& s : states_) c += pred(s) ? 1 : 0;
    return c;
  }

  const State& state(Vertex v) const { return states_[v]; }
  std::span<const State> states() const { return states_; }
  /// Harness-side overwrite of a node state (initial setup and locality probes only).
  State& mutable_state(Vertex v) { return states_[v]; }

  const Graph& graph() const { return *graph_; }
  TrialContext& context() { return *ctx_; }

 private:
  const Graph* graph_;
  TrialContext* ctx_;
  std::vector<State> states_;
};

// ---------------------------------------------------------------------------
// Generic driver for protocols written purely as node state machines.

struct StepInfo {
  std::string phase;
  std::string step;
  std::uint64_t rounds = 1;
};

template <class P>
concept NodeProtocol = requires(const P& p, const Node& node, typename P::State& s, const typename P::State& cs,
                                Inbox<typename P::Message> inbox, NodeRng& rng,
                                std::span<const typename P::State> all, std::uint64_t step) {
  { p.init(node, rng) } -> std::same_as<typename P::State>;
  { p.send(node, cs) } -> std::same_as<typename P::Message>;
  p.receive(node, s, inbox, rng);
  { p.halted(cs) } -> std::convertible_to<bool>;
  { p.step_info(step) } -> std::same_as<StepInfo>;
  { p.gauges(all) } -> std::same_as<Gauges>;
  p.output(all);
};

template <class Output>
struct RunResult {
  Output output;
  Trace trace;
};

/// Runs `protocol` until every node has halted. Each exchange is charged
/// according to the protocol's step_info.
template <NodeProtocol P>
auto run(const P& protocol, const Graph& g, const TrialConfig& cfg) {
  using State = typename P::State;
  TrialContext ctx(cfg.seed, cfg.round_cap(g.n()));
  std::vector<State> init;
  init.reserve(g.n());
  {
    const std::uint64_t r = ctx.next_round_index();
    for (Vertex v = 0; v < g.n(); ++v) {
      NodeRng rng(cfg.seed, g.id(v), r);
      init.push_back(protocol.init(Node{v, g.id(v), g.degree(v)}, rng));
    }
  }
  Network<State> net(g, ctx, std::move(init));
  auto all_halted = [&] { return net.count([&](const State& s) { return !protocol.halted(s); }) == 0; };
  for (std::uint64_t step = 0; !all_halted(); ++step) {
    net.exchange([&](const Node& node, const State& s) { return protocol.send(node, s); },
                 [&](const Node& node, State& s, Inbox<typename P::Message> inbox, NodeRng& rng) {
                   if (!protocol.halted(s)) protocol.receive(node, s, inbox, rng);
                 });
    StepInfo info = protocol.step_info(step);
    ctx.charge(info.phase, info.step, info.rounds, protocol.gauges(net.states()));
  }
  using Output = decltype(protocol.output(net.states()));
  return RunResult<Output>{protocol.output(net.states()), std::move(ctx.trace())};
}

}  // namespace symbrk
