// Command-line front end: run trials, sweep a parameter, or generate graphs.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "symbrk/symbrk.hpp"

namespace {

using namespace symbrk;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kVerificationFailed = 2;

/// Flag values; unset options leave the spec file's values alone.
struct Overrides {
  std::optional<std::string> spec;
  std::optional<std::string> algo;
  std::optional<std::string> graph;
  std::optional<std::string> path;
  std::optional<std::size_t> n;
  std::optional<std::size_t> delta;
  std::optional<double> density;
  std::optional<double> lambda;
  std::optional<std::size_t> hubs;
  std::optional<double> t;
  std::optional<std::string> arb_mode;
  std::optional<std::string> variant;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> graph_seed;
  std::optional<std::size_t> trials;
  std::optional<double> c1, c2, c6, c7, c, c_prime;
  std::optional<std::uint64_t> cap;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool timing = false;
  std::optional<std::size_t> workers;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--spec", o.spec, "JSON spec file; flags override its fields")->check(CLI::ExistingFile);
  app->add_option("--algo", o.algo, "mm | mis | mis-tree | mis-girth | coloring | arb-reduce");
  app->add_option("--graph", o.graph,
                  "degree-capped | forest-union | tree | high-girth | hub-forest | file | empty | path | cycle | "
                  "star | clique");
  app->add_option("--path", o.path, "edge-list file for --graph file");
  app->add_option("--n", o.n, "vertex count");
  app->add_option("--delta", o.delta, "degree cap for capped generators");
  app->add_option("--density", o.density, "edge target as a fraction of n * delta / 2");
  app->add_option("--lambda", o.lambda, "arboricity bound; also the forest count of forest generators");
  app->add_option("--hubs", o.hubs, "hub count for hub-forest");
  app->add_option("--t", o.t, "degree-reduction parameter");
  app->add_option("--arb-mode", o.arb_mode, "mis | mm (pipeline after degree reduction)");
  app->add_option("--variant", o.variant, "weak-diameter | small-components");
  app->add_option("--seed", o.seed, "first trial seed");
  app->add_option("--graph-seed", o.graph_seed, "fix the generated graph across trials");
  app->add_option("--trials", o.trials, "number of trials");
  app->add_option("--c1", o.c1);
  app->add_option("--c2", o.c2);
  app->add_option("--c6", o.c6);
  app->add_option("--c7", o.c7);
  app->add_option("--c", o.c);
  app->add_option("--c-prime", o.c_prime);
  app->add_option("--cap", o.cap, "round safety cap");
  app->add_option("--out", o.out, "output path (default: stdout)");
  app->add_option("--format", o.format, "csv | json");
  app->add_flag("--timing", o.timing, "include wall time per trial");
  app->add_option("--workers", o.workers, "worker threads (default: SYMBRK_WORKERS or all cores)");
}

SpecFile build_spec(const Overrides& o) {
  SpecFile f = o.spec ? load_spec_file(*o.spec) : SpecFile{};
  RunSpec& s = f.spec;
  if (o.algo) {
    auto a = parse_algorithm(*o.algo);
    if (!a) throw SpecError("unknown algorithm: " + *o.algo);
    s.config.algorithm = *a;
  }
  if (o.graph) s.graph.generator = *o.graph;
  if (o.path) s.graph.path = *o.path;
  if (o.n) s.graph.n = *o.n;
  if (o.delta) s.graph.delta = *o.delta;
  if (o.density) s.graph.density = *o.density;
  if (o.lambda) {
    apply_axis(s, "lambda", *o.lambda);
  }
  if (o.hubs) s.graph.hubs = *o.hubs;
  if (o.t) s.config.arb.t = *o.t;
  if (o.arb_mode) {
    auto m = parse_arb_mode(*o.arb_mode);
    if (!m) throw SpecError("unknown arb mode: " + *o.arb_mode);
    s.config.arb.mode = *m;
  }
  if (o.variant) {
    auto v = parse_variant(*o.variant);
    if (!v) throw SpecError("unknown variant: " + *o.variant);
    s.config.variant = *v;
  }
  if (o.seed) s.config.seed = *o.seed;
  if (o.graph_seed) s.graph.graph_seed = *o.graph_seed;
  if (o.trials) s.trials = *o.trials;
  Constants& k = s.config.constants;
  if (o.c1) k.c1 = *o.c1;
  if (o.c2) k.c2 = *o.c2;
  if (o.c6) k.c6 = *o.c6;
  if (o.c7) k.c7 = *o.c7;
  if (o.c) k.c = *o.c;
  if (o.c_prime) k.c_prime = *o.c_prime;
  if (o.cap) s.config.max_rounds = *o.cap;
  if (o.out) s.out = *o.out;
  if (o.format) {
    if (*o.format == "csv")
      s.format = OutputFormat::Csv;
    else if (*o.format == "json")
      s.format = OutputFormat::Json;
    else
      throw SpecError("unknown format: " + *o.format);
  }
  if (o.timing) s.timing = true;
  s.validate();
  return f;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError("cannot write output file: " + path);
  out << text;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t end = csv.find(',', pos);
    if (end == std::string::npos) end = csv.size();
    const std::string item = csv.substr(pos, end - pos);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) throw SpecError("bad sweep value: '" + item + "'");
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized symmetry breaking in a simulated LOCAL network"};
  app.require_subcommand(1);

  Overrides run_opts;
  auto* run = app.add_subcommand("run", "run trials and print one row per trial plus a summary");
  add_common(run, run_opts);

  Overrides sweep_opts;
  std::optional<std::string> axis, values;
  auto* sweep_cmd = app.add_subcommand("sweep", "run trials for each value of one parameter");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--axis", axis, "n | delta | lambda | t | density | forests | c1 | c2 | c6 | c7 | c | c_prime");
  sweep_cmd->add_option("--values", values, "comma-separated axis values");

  Overrides gen_opts;
  auto* gen = app.add_subcommand("gen", "write a generated graph as an edge list");
  add_common(gen, gen_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*run) {
      SpecFile f = build_spec(run_opts);
      auto reports = run_trials(f.spec, run_opts.workers.value_or(default_workers()));
      emit(render(reports, f.spec), f.spec.out);
      for (const auto& r : reports)
        if (r.failed_verification()) return kVerificationFailed;
      return kOk;
    }
    if (*sweep_cmd) {
      SpecFile f = build_spec(sweep_opts);
      if (axis || values) {
        if (!axis || !values) throw SpecError("--axis and --values go together");
        f.axis = SweepAxis{*axis, parse_values(*values)};
      }
      if (!f.axis) throw SpecError("sweep needs an axis (flags or the spec's sweep block)");
      auto rows = sweep(f.spec, *f.axis, sweep_opts.workers.value_or(default_workers()));
      emit(f.spec.format == OutputFormat::Csv ? sweep_csv(*f.axis, rows) : sweep_json(*f.axis, rows), f.spec.out);
      for (const auto& r : rows)
        if (r.summary.failed > 0) return kVerificationFailed;
      return kOk;
    }
    if (*gen) {
      SpecFile f = build_spec(gen_opts);
      emit(format_graph(make_graph(f.spec.graph, f.spec.config.seed)), f.spec.out);
      return kOk;
    }
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
