#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace symbrk {

enum class Algorithm { MM, MIS, MisTree, MisGirth, Coloring, ArbReduce };
enum class HalveVariant { WeakDiameter, SmallComponents };
enum class ArbMode { MIS, MM };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::MM: return "mm";
    case Algorithm::MIS: return "mis";
    case Algorithm::MisTree: return "mis-tree";
    case Algorithm::MisGirth: return "mis-girth";
    case Algorithm::Coloring: return "coloring";
    case Algorithm::ArbReduce: return "arb-reduce";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (Algorithm a : {Algorithm::MM, Algorithm::MIS, Algorithm::MisTree, Algorithm::MisGirth, Algorithm::Coloring,
                      Algorithm::ArbReduce})
    if (to_string(a) == s) return a;
  return std::nullopt;
}

inline std::string_view to_string(HalveVariant v) {
  return v == HalveVariant::WeakDiameter ? "weak-diameter" : "small-components";
}

inline std::optional<HalveVariant> parse_variant(std::string_view s) {
  if (s == "weak-diameter") return HalveVariant::WeakDiameter;
  if (s == "small-components") return HalveVariant::SmallComponents;
  return std::nullopt;
}

inline std::string_view to_string(ArbMode m) { return m == ArbMode::MIS ? "mis" : "mm"; }

inline std::optional<ArbMode> parse_arb_mode(std::string_view s) {
  if (s == "mis") return ArbMode::MIS;
  if (s == "mm") return ArbMode::MM;
  return std::nullopt;
}

/// Tunable constants of the algorithms; every one must be positive.
struct Constants {
  double c1 = 1.0;       ///< matching thresholds: sqrt(c1 ln n) scaling
  double c2 = 4.0;       ///< matching Phase I stage count factor
  double c6 = 4.0;       ///< halving stage count factor
  double c7 = 1.0;       ///< coloring degree threshold d* = 32 c7 ln n
  double c = 2.0;        ///< Metivier epoch length factor
  double c_prime = 4.0;  ///< Metivier degree threshold factor
  double rho = std::sqrt(8.0 / 7.0);
};

/// Degree-reduction settings for bounded-arboricity inputs.
struct ArbSettings {
  double lambda = 1.0;
  double t = 128.0;
  double c = 1.0;  ///< failure-probability exponent in the guarantee-regime bound
  ArbMode mode = ArbMode::MIS;
};

struct TrialConfig {
  std::uint64_t seed = 1;
  Algorithm algorithm = Algorithm::MM;
  Constants constants;
  ArbSettings arb;
  HalveVariant variant = HalveVariant::WeakDiameter;
  std::optional<std::uint64_t> max_rounds;

  void validate() const {
    const Constants& k = constants;
    for (double x : {k.c1, k.c2, k.c6, k.c7, k.c, k.c_prime, k.rho})
      if (!(x > 0)) throw std::invalid_argument("all constants must be > 0");
    if (!(k.rho * k.rho < 2.0)) throw std::invalid_argument("rho^2 must be < 2");
    if (!(arb.lambda > 0) || !(arb.t > 0) || !(arb.c > 0)) throw std::invalid_argument("arb settings must be > 0");
    if (max_rounds && *max_rounds < 1) throw std::invalid_argument("max rounds must be >= 1");
  }

  /// Safety cap: explicit value or 64 (log2 n + 2)^2.
  std::uint64_t round_cap(std::size_t n) const {
    if (max_rounds) return *max_rounds;
    double l = n > 1 ? std::log2(static_cast<double>(n)) : 0.0;
    return static_cast<std::uint64_t>(std::ceil(64.0 * (l + 2.0) * (l + 2.0)));
  }
};

}  // namespace symbrk
