#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "symbrk/graph.hpp"

namespace symbrk {

inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

/// A set of vertex-disjoint edges, tracked through a mate array.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::size_t n) : mate_(n, kNoVertex) {}

  /// Adds (u, v); throws std::logic_error if either endpoint is already matched.
  void add(Vertex u, Vertex v) {
    if (u == v || mate_[u] != kNoVertex || mate_[v] != kNoVertex)
      throw std::logic_error("matching edge is not vertex-disjoint");
    mate_[u] = v;
    mate_[v] = u;
    ++size_;
  }

  bool is_matched(Vertex v) const { return mate_[v] != kNoVertex; }
  std::optional<Vertex> mate(Vertex v) const {
    if (mate_[v] == kNoVertex) return std::nullopt;
    return mate_[v];
  }
  std::size_t size() const { return size_; }
  std::size_t universe() const { return mate_.size(); }

  /// Edges (u, v) with u < v, sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(size_);
    for (Vertex v = 0; v < mate_.size(); ++v)
      if (mate_[v] != kNoVertex && v < mate_[v]) out.emplace_back(v, mate_[v]);
    return out;
  }

 private:
  std::vector<Vertex> mate_;
  std::size_t size_ = 0;
};

/// Membership of an independent set together with its closed neighborhood.
class IndependentSet {
 public:
  IndependentSet() = default;
  explicit IndependentSet(std::size_t n) : in_(n, 0), covered_(n, 0) {}

  /// Adds v; throws std::logic_error if v is already covered.
  void add(const Graph& g, Vertex v) {
    if (covered_[v]) throw std::logic_error("independent set vertex is already covered");
    in_[v] = 1;
    covered_[v] = 1;
    ++size_;
    for (Vertex u : g.neighbors(v)) covered_[u] = 1;
  }

  bool contains(Vertex v) const { return in_[v] != 0; }
  /// v is in the set or adjacent to it.
  bool covers(Vertex v) const { return covered_[v] != 0; }
  std::size_t size() const { return size_; }
  std::size_t universe() const { return in_.size(); }

  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    out.reserve(size_);
    for (Vertex v = 0; v < in_.size(); ++v)
      if (in_[v]) out.push_back(v);
    return out;
  }

 private:
  std::vector<std::uint8_t> in_;
  std::vector<std::uint8_t> covered_;
  std::size_t size_ = 0;
};

/// Colors 1..k with 0 meaning uncolored.
using Color = std::uint32_t;
inline constexpr Color kUncolored = 0;

class PartialColoring {
 public:
  PartialColoring() = default;
  PartialColoring(std::size_t n, Color palette) : color_(n, kUncolored), palette_(palette) {}

  Color palette() const { return palette_; }
  Color operator[](Vertex v) const { return color_[v]; }
  bool is_colored(Vertex v) const { return color_[v] != kUncolored; }

  void assign(Vertex v, Color c) {
    if (c == kUncolored || c > palette_) throw std::logic_error("color outside the palette");
    if (color_[v] == kUncolored) ++colored_;
    color_[v] = c;
  }

  std::size_t colored_count() const { return colored_; }
  std::size_t size() const { return color_.size(); }
  const std::vector<Color>& colors() const { return color_; }

 private:
  std::vector<Color> color_;
  Color palette_ = 0;
  std::size_t colored_ = 0;
};

}  // namespace symbrk
