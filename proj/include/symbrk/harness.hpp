#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "symbrk/config.hpp"
#include "symbrk/generators.hpp"
#include "symbrk/graph.hpp"
#include "symbrk/pipeline.hpp"

namespace symbrk {

/// Raised for invalid run specifications; maps to exit code 1.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { Csv, Json };

/// Where the graph of each trial comes from.
struct GraphSource {
  std::string generator = "degree-capped";
  std::size_t n = 1024;
  std::size_t delta = 16;  ///< degree cap for capped generators
  double density = 1.0;    ///< edge target as a fraction of n * delta / 2
  std::size_t forests = 2;
  std::size_t hubs = 4;
  std::string path;                       ///< for generator "file"
  std::optional<std::uint64_t> graph_seed;  ///< fixed graph; otherwise the trial seed

  void validate() const {
    static const char* known[] = {"degree-capped", "forest-union", "tree",  "high-girth", "hub-forest",
                                  "file",          "empty",        "path",  "cycle",      "star",
                                  "clique"};
    if (std::find(std::begin(known), std::end(known), generator) == std::end(known))
      throw SpecError("unknown graph generator: " + generator);
    if (generator == "file") {
      if (path.empty()) throw SpecError("graph file path required");
      return;
    }
    if (n < 1) throw SpecError("n must be >= 1");
    if (generator == "degree-capped" && delta >= n) throw SpecError("degree cap must be < n");
    if (generator == "high-girth" && delta < 2) throw SpecError("high-girth requires delta >= 2");
    if ((generator == "forest-union" || generator == "hub-forest") && forests < 1)
      throw SpecError("forest count must be >= 1");
    if (generator == "hub-forest" && (hubs < 1 || hubs > n)) throw SpecError("hub count must be in 1..n");
    if (generator == "cycle" && n < 3) throw SpecError("cycle requires n >= 3");
    if (!(density > 0) || density > 1) throw SpecError("density must be in (0, 1]");
  }
};

inline Graph make_graph(const GraphSource& src, std::uint64_t seed) {
  const std::string& gen = src.generator;
  if (gen == "degree-capped") return gen_degree_capped(src.n, src.delta, src.density, seed);
  if (gen == "forest-union") return gen_forest_union(src.n, src.forests, seed);
  if (gen == "tree") return gen_tree(src.n, seed);
  if (gen == "high-girth") return gen_high_girth(src.n, src.delta, seed);
  if (gen == "hub-forest") return gen_hub_forest_union(src.n, src.forests, src.hubs, seed);
  if (gen == "empty") return make_empty(src.n);
  if (gen == "path") return make_path(src.n);
  if (gen == "cycle") return make_cycle(src.n);
  if (gen == "star") return make_star(src.n - 1);
  if (gen == "clique") return make_clique(src.n);
  if (gen == "file") {
    std::ifstream in(src.path);
    if (!in) throw SpecError("cannot open graph file: " + src.path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_graph(ss.str());
  }
  throw SpecError("unknown graph generator: " + gen);
}

struct RunSpec {
  GraphSource graph;
  TrialConfig config;
  std::size_t trials = 1;
  OutputFormat format = OutputFormat::Csv;
  std::string out;      ///< empty means standard output
  bool timing = false;  ///< include wall time (makes output nondeterministic)

  void validate() const {
    if (trials < 1) throw SpecError("trials must be >= 1");
    graph.validate();
    try {
      config.validate();
    } catch (const std::invalid_argument& e) {
      throw SpecError(e.what());
    }
  }
};

struct TrialReport {
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::MM;
  std::size_t n = 0;
  std::size_t delta = 0;
  double lambda = 0;
  std::uint64_t rounds_total = 0;
  std::uint64_t rounds_phase1 = 0;
  std::uint64_t rounds_phase2 = 0;
  bool valid = false;
  bool maximal_or_total = false;
  std::map<std::string, bool> bound_flags;
  std::size_t solution_size = 0;
  bool aborted = false;
  std::optional<std::string> error;  ///< precondition failures and aborts
  std::map<std::string, std::uint64_t> phase_rounds;
  std::map<std::string, double> metrics;
  std::optional<double> wall_ms;

  bool bounds_ok() const {
    return std::all_of(bound_flags.begin(), bound_flags.end(), [](const auto& kv) { return kv.second; });
  }
  /// Completed but produced an output the verifiers reject.
  bool failed_verification() const { return !aborted && !error && !(valid && maximal_or_total); }
};

inline TrialReport run_trial(const RunSpec& spec, std::uint64_t seed, const Graph* fixed = nullptr) {
  TrialReport r;
  r.seed = seed;
  r.algorithm = spec.config.algorithm;
  r.lambda = spec.config.arb.lambda;
  const auto start = std::chrono::steady_clock::now();
  std::optional<Graph> owned;
  if (!fixed) owned = make_graph(spec.graph, spec.graph.graph_seed.value_or(seed));
  const Graph& g = fixed ? *fixed : *owned;
  r.n = g.n();
  r.delta = g.max_degree();
  TrialConfig cfg = spec.config;
  cfg.seed = seed;
  auto absorb = [&](const Trace& tr) {
    r.rounds_total = tr.total_rounds();
    r.rounds_phase1 = tr.rounds_in("phase1");
    r.rounds_phase2 = tr.rounds_in("phase2");
    r.phase_rounds = tr.totals();
    r.metrics = tr.metrics();
  };
  try {
    Outcome o = run_algorithm(g, cfg);
    absorb(o.trace);
    r.valid = o.valid;
    r.maximal_or_total = o.maximal_or_total;
    r.solution_size = o.solution_size;
    r.bound_flags = std::move(o.bound_flags);
  } catch (const TrialAborted& e) {
    absorb(e.partial_trace());
    r.aborted = true;
    r.error = e.what();
  } catch (const PreconditionError& e) {
    r.error = e.what();
  }
  if (spec.timing)
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Worker count from SYMBRK_WORKERS, else the available parallelism.
inline std::size_t default_workers() {
  if (const char* env = std::getenv("SYMBRK_WORKERS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs trials with seeds seed, seed + 1, ... on a worker pool. Reports come
/// back in seed order whatever the completion order.
inline std::vector<TrialReport> run_trials(const RunSpec& spec, std::size_t workers = default_workers()) {
  spec.validate();
  std::optional<Graph> fixed;
  if (spec.graph.generator == "file") fixed = make_graph(spec.graph, 0);
  std::vector<TrialReport> out(spec.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < spec.trials && !failed; i = next++) {
      try {
        out[i] = run_trial(spec, spec.config.seed + i, fixed ? &*fixed : nullptr);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, spec.trials));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct Summary {
  std::size_t trials = 0;
  double median_rounds_total = 0;
  double median_rounds_phase1 = 0;
  double median_rounds_phase2 = 0;
  double mean_rounds_total = 0;
  double p90_rounds_total = 0;
  double valid_rate = 0;
  double maximal_rate = 0;
  double bound_ok_rate = 0;
  double median_solution_size = 0;
  std::size_t aborted = 0;
  std::size_t failed = 0;  ///< completed trials rejected by the verifiers
};

inline double median(std::vector<double> xs) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  const std::size_t k = xs.size() / 2;
  return xs.size() % 2 ? xs[k] : (xs[k - 1] + xs[k]) / 2.0;
}

/// Nearest-rank quantile.
inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(xs.size())));
  return xs[std::clamp<std::size_t>(rank, 1, xs.size()) - 1];
}

/// Aggregates; round statistics use the trials that completed.
inline Summary summarize(const std::vector<TrialReport>& reports) {
  Summary s;
  s.trials = reports.size();
  std::vector<double> total, p1, p2, size;
  std::size_t valid = 0, maximal = 0, bounds = 0;
  for (const auto& r : reports) {
    valid += r.valid ? 1 : 0;
    maximal += r.maximal_or_total ? 1 : 0;
    bounds += (!r.aborted && !r.error && r.bounds_ok()) ? 1 : 0;
    s.aborted += r.aborted ? 1 : 0;
    s.failed += r.failed_verification() ? 1 : 0;
    if (r.aborted || r.error) continue;
    total.push_back(static_cast<double>(r.rounds_total));
    p1.push_back(static_cast<double>(r.rounds_phase1));
    p2.push_back(static_cast<double>(r.rounds_phase2));
    size.push_back(static_cast<double>(r.solution_size));
  }
  const double count = static_cast<double>(std::max<std::size_t>(1, reports.size()));
  s.median_rounds_total = median(total);
  s.median_rounds_phase1 = median(p1);
  s.median_rounds_phase2 = median(p2);
  double sum = 0;
  for (double x : total) sum += x;
  s.mean_rounds_total = total.empty() ? 0 : sum / static_cast<double>(total.size());
  s.p90_rounds_total = quantile(total, 0.9);
  s.valid_rate = static_cast<double>(valid) / count;
  s.maximal_rate = static_cast<double>(maximal) / count;
  s.bound_ok_rate = static_cast<double>(bounds) / count;
  s.median_solution_size = median(size);
  return s;
}

// ---------------------------------------------------------------------------
// Output

inline std::string format_number(double x) {
  if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e15) return std::to_string(static_cast<long long>(x));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string encode_flags(const std::map<std::string, bool>& flags) {
  std::string out;
  for (const auto& [k, v] : flags) {
    if (!out.empty()) out += ';';
    out += k + '=' + (v ? '1' : '0');
  }
  return out;
}

inline constexpr const char* kCsvHeader =
    "seed,algo,n,delta,lambda,rounds_total,rounds_phase1,rounds_phase2,valid,maximal_or_total,bound_flags,"
    "solution_size,aborted";

inline std::string to_csv(const std::vector<TrialReport>& reports, const RunSpec& spec) {
  std::ostringstream os;
  os << kCsvHeader << (spec.timing ? ",wall_ms" : "") << '\n';
  auto b = [](bool x) { return x ? "true" : "false"; };
  std::size_t n = 0, delta = 0;
  for (const auto& r : reports) {
    n = std::max(n, r.n);
    delta = std::max(delta, r.delta);
    os << r.seed << ',' << to_string(r.algorithm) << ',' << r.n << ',' << r.delta << ',' << format_number(r.lambda)
       << ',' << r.rounds_total << ',' << r.rounds_phase1 << ',' << r.rounds_phase2 << ',' << b(r.valid) << ','
       << b(r.maximal_or_total) << ',' << encode_flags(r.bound_flags) << ',' << r.solution_size << ','
       << b(r.aborted);
    if (spec.timing) os << ',' << format_number(r.wall_ms.value_or(0));
    os << '\n';
  }
  // Summary row: medians for round and size columns, rates for booleans,
  // and the abort count.
  const Summary s = summarize(reports);
  os << "summary," << to_string(spec.config.algorithm) << ',' << n << ',' << delta << ','
     << format_number(spec.config.arb.lambda) << ',' << format_number(s.median_rounds_total) << ','
     << format_number(s.median_rounds_phase1) << ',' << format_number(s.median_rounds_phase2) << ','
     << format_number(s.valid_rate) << ',' << format_number(s.maximal_rate) << ",bound_ok_rate="
     << format_number(s.bound_ok_rate) << ',' << format_number(s.median_solution_size) << ',' << s.aborted;
  if (spec.timing) os << ',';
  os << '\n';
  return os.str();
}

inline nlohmann::json to_json(const TrialReport& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["algo"] = std::string(to_string(r.algorithm));
  j["n"] = r.n;
  j["delta"] = r.delta;
  j["lambda"] = r.lambda;
  j["rounds_total"] = r.rounds_total;
  j["rounds_phase1"] = r.rounds_phase1;
  j["rounds_phase2"] = r.rounds_phase2;
  j["phase_rounds"] = r.phase_rounds;
  j["valid"] = r.valid;
  j["maximal_or_total"] = r.maximal_or_total;
  j["bound_flags"] = r.bound_flags;
  j["solution_size"] = r.solution_size;
  j["aborted"] = r.aborted;
  j["error"] = r.error ? nlohmann::json(*r.error) : nlohmann::json(nullptr);
  j["metrics"] = r.metrics;
  j["wall_ms"] = r.wall_ms ? nlohmann::json(*r.wall_ms) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const Summary& s) {
  return {{"trials", s.trials},
          {"median_rounds_total", s.median_rounds_total},
          {"median_rounds_phase1", s.median_rounds_phase1},
          {"median_rounds_phase2", s.median_rounds_phase2},
          {"mean_rounds_total", s.mean_rounds_total},
          {"p90_rounds_total", s.p90_rounds_total},
          {"valid_rate", s.valid_rate},
          {"maximal_rate", s.maximal_rate},
          {"bound_ok_rate", s.bound_ok_rate},
          {"median_solution_size", s.median_solution_size},
          {"aborted", s.aborted},
          {"failed", s.failed}};
}

inline std::string to_json_text(const std::vector<TrialReport>& reports) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& r : reports) trials.push_back(to_json(r));
  nlohmann::json doc{{"trials", std::move(trials)}, {"summary", to_json(summarize(reports))}};
  return doc.dump(2) + "\n";
}

inline std::string render(const std::vector<TrialReport>& reports, const RunSpec& spec) {
  return spec.format == OutputFormat::Csv ? to_csv(reports, spec) : to_json_text(reports);
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepAxis {
  std::string name;  ///< n, delta, lambda, t, density, forests, c1, c2, c6, c7, c, c_prime
  std::vector<double> values;
};

inline void apply_axis(RunSpec& spec, const std::string& name, double v) {
  auto count = [&](const char* what) {
    if (!(v >= 0) || v != std::floor(v)) throw SpecError(std::string(what) + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
  };
  Constants& k = spec.config.constants;
  if (name == "n")
    spec.graph.n = count("n");
  else if (name == "delta")
    spec.graph.delta = count("delta");
  else if (name == "lambda") {
    spec.config.arb.lambda = v;
    spec.graph.forests = count("lambda");
  } else if (name == "t")
    spec.config.arb.t = v;
  else if (name == "density")
    spec.graph.density = v;
  else if (name == "forests")
    spec.graph.forests = count("forests");
  else if (name == "c1")
    k.c1 = v;
  else if (name == "c2")
    k.c2 = v;
  else if (name == "c6")
    k.c6 = v;
  else if (name == "c7")
    k.c7 = v;
  else if (name == "c")
    k.c = v;
  else if (name == "c_prime")
    k.c_prime = v;
  else
    throw SpecError("unknown sweep axis: " + name);
}

struct SweepRow {
  double value = 0;
  Summary summary;
};

inline std::vector<SweepRow> sweep(const RunSpec& base, const SweepAxis& axis, std::size_t workers = default_workers()) {
  if (axis.values.empty()) throw SpecError("sweep axis needs at least one value");
  std::vector<SweepRow> rows;
  for (double v : axis.values) {
    RunSpec spec = base;
    apply_axis(spec, axis.name, v);
    rows.push_back({v, summarize(run_trials(spec, workers))});
  }
  return rows;
}

inline constexpr const char* kSweepHeader =
    "axis,value,trials,median_rounds_total,median_rounds_phase1,median_rounds_phase2,mean_rounds_total,"
    "p90_rounds_total,valid_rate,maximal_rate,bound_ok_rate,aborted";

inline std::string sweep_csv(const SweepAxis& axis, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kSweepHeader << '\n';
  for (const auto& r : rows) {
    const Summary& s = r.summary;
    os << axis.name << ',' << format_number(r.value) << ',' << s.trials << ',' << format_number(s.median_rounds_total)
       << ',' << format_number(s.median_rounds_phase1) << ',' << format_number(s.median_rounds_phase2) << ','
       << format_number(s.mean_rounds_total) << ',' << format_number(s.p90_rounds_total) << ','
       << format_number(s.valid_rate) << ',' << format_number(s.maximal_rate) << ','
       << format_number(s.bound_ok_rate) << ',' << s.aborted << '\n';
  }
  return os.str();
}

inline std::string sweep_json(const SweepAxis& axis, const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j = to_json(r.summary);
    j["axis"] = axis.name;
    j["value"] = r.value;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Spec files (JSON)

struct SpecFile {
  RunSpec spec;
  std::optional<SweepAxis> axis;
};

inline SpecFile parse_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("spec must be a JSON object");
  SpecFile f;
  RunSpec& s = f.spec;
  auto check_keys = [](const nlohmann::json& obj, std::initializer_list<const char*> allowed, const char* where) {
    for (const auto& [key, _] : obj.items())
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end())
        throw SpecError(std::string("unknown key in ") + where + ": " + key);
  };
  try {
    check_keys(j, {"algorithm", "graph", "seed", "trials", "constants", "arb", "variant", "max_rounds", "format", "sweep",
                   "timing"},
               "spec");
    if (j.contains("algorithm")) {
      auto a = parse_algorithm(j.at("algorithm").get<std::string>());
      if (!a) throw SpecError("unknown algorithm: " + j.at("algorithm").get<std::string>());
      s.config.algorithm = *a;
    }
    if (j.contains("graph")) {
      const auto& gj = j.at("graph");
      check_keys(gj, {"generator", "n", "delta", "density", "forests", "hubs", "path", "seed"}, "graph");
      GraphSource& g = s.graph;
      g.generator = gj.value("generator", g.generator);
      g.n = gj.value("n", g.n);
      g.delta = gj.value("delta", g.delta);
      g.density = gj.value("density", g.density);
      g.forests = gj.value("forests", g.forests);
      g.hubs = gj.value("hubs", g.hubs);
      g.path = gj.value("path", g.path);
      if (gj.contains("seed")) g.graph_seed = gj.at("seed").get<std::uint64_t>();
    }
    s.config.seed = j.value("seed", s.config.seed);
    s.trials = j.value("trials", s.trials);
    if (j.contains("constants")) {
      const auto& cj = j.at("constants");
      check_keys(cj, {"c1", "c2", "c6", "c7", "c", "c_prime", "rho"}, "constants");
      Constants& k = s.config.constants;
      k.c1 = cj.value("c1", k.c1);
      k.c2 = cj.value("c2", k.c2);
      k.c6 = cj.value("c6", k.c6);
      k.c7 = cj.value("c7", k.c7);
      k.c = cj.value("c", k.c);
      k.c_prime = cj.value("c_prime", k.c_prime);
      k.rho = cj.value("rho", k.rho);
    }
    if (j.contains("arb")) {
      const auto& aj = j.at("arb");
      check_keys(aj, {"lambda", "t", "c", "mode"}, "arb");
      ArbSettings& a = s.config.arb;
      a.lambda = aj.value("lambda", a.lambda);
      a.t = aj.value("t", a.t);
      a.c = aj.value("c", a.c);
      if (aj.contains("mode")) {
        auto m = parse_arb_mode(aj.at("mode").get<std::string>());
        if (!m) throw SpecError("unknown arb mode");
        a.mode = *m;
      }
    }
    if (j.contains("variant")) {
      auto v = parse_variant(j.at("variant").get<std::string>());
      if (!v) throw SpecError("unknown halving variant");
      s.config.variant = *v;
    }
    if (j.contains("max_rounds") && !j.at("max_rounds").is_null())
      s.config.max_rounds = j.at("max_rounds").get<std::uint64_t>();
    if (j.contains("format")) {
      const auto fmt = j.at("format").get<std::string>();
      if (fmt == "csv")
        s.format = OutputFormat::Csv;
      else if (fmt == "json")
        s.format = OutputFormat::Json;
      else
        throw SpecError("unknown format: " + fmt);
    }
    s.timing = j.value("timing", s.timing);
    if (j.contains("sweep")) {
      const auto& sj = j.at("sweep");
      check_keys(sj, {"axis", "values"}, "sweep");
      f.axis = SweepAxis{sj.at("axis").get<std::string>(), sj.at("values").get<std::vector<double>>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed spec: ") + e.what());
  }
  return f;
}

inline SpecFile load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file: " + path);
  try {
    return parse_spec(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("spec is not valid JSON: ") + e.what());
  }
}

}  // namespace symbrk
