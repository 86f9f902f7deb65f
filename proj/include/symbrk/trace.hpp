#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace symbrk {

/// Progress gauges sampled at the end of each charged step.
struct Gauges {
  std::int64_t active = 0;
  std::int64_t matched = 0;
  std::int64_t in_is = 0;
  std::int64_t colored = 0;

  Gauges& operator+=(const Gauges& o) {
    active += o.active;
    matched += o.matched;
    in_is += o.in_is;
    colored += o.colored;
    return *this;
  }
  friend Gauges operator+(Gauges a, const Gauges& b) { return a += b; }
  friend bool operator==(const Gauges&, const Gauges&) = default;
};

struct RoundRecord {
  std::uint64_t round = 0;  ///< global index of the first round charged by this record
  std::string phase;
  std::string step;
  std::uint64_t rounds = 0;
  Gauges gauges;
};

/// Per-round log of one trial, plus named metrics that algorithms attach
/// (bound-criterion flags, audit counters, guarantee-regime status).
class Trace {
 public:
  const std::vector<RoundRecord>& records() const { return records_; }
  void append(RoundRecord r) {
    total_ += r.rounds;
    records_.push_back(std::move(r));
  }

  std::uint64_t total_rounds() const { return total_; }

  std::uint64_t rounds_in(const std::string& phase) const {
    std::uint64_t sum = 0;
    for (const auto& r : records_)
      if (r.phase == phase) sum += r.rounds;
    return sum;
  }

  std::map<std::string, std::uint64_t> totals() const {
    std::map<std::string, std::uint64_t> out;
    for (const auto& r : records_) out[r.phase] += r.rounds;
    return out;
  }

  void set_metric(const std::string& name, double value) { metrics_[name] = value; }
  void add_metric(const std::string& name, double delta) { metrics_[name] += delta; }
  void max_metric(const std::string& name, double value) {
    auto [it, inserted] = metrics_.emplace(name, value);
    if (!inserted && value > it->second) it->second = value;
  }
  bool has_metric(const std::string& name) const { return metrics_.count(name) != 0; }
  double metric(const std::string& name, double fallback = 0.0) const {
    auto it = metrics_.find(name);
    return it == metrics_.end() ? fallback : it->second;
  }
  const std::map<std::string, double>& metrics() const { return metrics_; }

  nlohmann::json to_json() const {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : records_) {
      recs.push_back({{"round", r.round},
                      {"phase", r.phase},
                      {"step", r.step},
                      {"rounds", r.rounds},
                      {"active", r.gauges.active},
                      {"matched", r.gauges.matched},
                      {"in_is", r.gauges.in_is},
                      {"colored", r.gauges.colored}});
    }
    return {{"records", recs}, {"totals", totals()}, {"metrics", metrics_}, {"total_rounds", total_}};
  }

 private:
  std::vector<RoundRecord> records_;
  std::map<std::string, double> metrics_;
  std::uint64_t total_ = 0;
};

/// Thrown when a trial exceeds its round cap; carries the trace so far.
class TrialAborted : public std::runtime_error {
 public:
  TrialAborted(std::uint64_t cap, Trace partial)
      : std::runtime_error("round cap of " + std::to_string(cap) + " exceeded"), partial_(std::move(partial)) {}
  const Trace& partial_trace() const { return partial_; }

 private:
  Trace partial_;
};

/// Raised when an algorithm's input hypothesis does not hold (e.g. girth, forest).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace symbrk
