#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "riskstream/detector.hpp"
#include "riskstream/errors.hpp"
#include "riskstream/event.hpp"
#include "riskstream/generator.hpp"
#include "riskstream/samplers.hpp"

namespace riskstream {

struct SweepConfig {
  GeneratorConfig generator;
  DetectorConfig detector;
  std::vector<PolicyKind> methods{PolicyKind::kVanilla, PolicyKind::kRiskyOnly,
                                  PolicyKind::kCombination};
  std::vector<double> rates{0.35, 0.30, 0.25, 0.20};
  double posterior_high = 0.8;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  bool include_baseline = true;  // adds the NONE policy once per seed

  void validate() const {
    generator.validate();
    detector.validate();
    if (methods.empty()) throw ConfigError("sweep: methods must not be empty");
    for (double r : rates) {
      if (!(r > 0.0 && r <= 1.0)) throw ConfigError("sweep: rates must lie in (0, 1]");
    }
    if (rates.empty()) throw ConfigError("sweep: rates must not be empty");
    if (seeds.empty()) throw ConfigError("sweep: seeds must not be empty");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
      throw ConfigError("sweep: seeds must be distinct");
    }
  }
};

// Scores one trial. Recall denominators count every labeled anomaly of the
// class, sampled or not; precision is overall (true detections over all
// detections), 1.0 when nothing was flagged. Unlabeled events never enter
// recall or precision.
inline std::vector<MetricsRow> evaluate_trial(std::span<const Event> stream,
                                              std::span<const DetectionRecord> records,
                                              PolicyKind method, double rate,
                                              std::uint64_t seed) {
  if (records.size() != stream.size()) {
    throw InputError("evaluate_trial: record count does not match stream length");
  }
  struct Counts {
    std::uint64_t events = 0;
    std::uint64_t sampled = 0;
    std::uint64_t anomalies = 0;
    std::uint64_t detected = 0;
  };
  Counts high, low;
  std::uint64_t flagged_labeled = 0;
  std::uint64_t true_detections = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const Event& e = stream[i];
    const DetectionRecord& r = records[i];
    if (r.seq != e.seq) {
      throw InputError("evaluate_trial: record seq mismatch at position " + std::to_string(i));
    }
    Counts& c = e.risk == RiskClass::kHigh ? high : low;
    c.events += 1;
    if (r.admitted) c.sampled += 1;
    if (e.label == Label::kAnomaly) {
      c.anomalies += 1;
      if (r.flagged) c.detected += 1;
    }
    if (r.flagged && e.labeled()) {
      flagged_labeled += 1;
      if (e.is_anomaly()) true_detections += 1;
    }
  }
  const double precision =
      flagged_labeled > 0 ? static_cast<double>(true_detections) / static_cast<double>(flagged_labeled)
                          : 1.0;
  const Counts all{high.events + low.events, high.sampled + low.sampled,
                   high.anomalies + low.anomalies, high.detected + low.detected};
  std::vector<MetricsRow> rows;
  rows.reserve(3);
  const std::pair<MetricClass, const Counts*> classes[] = {
      {MetricClass::kHigh, &high}, {MetricClass::kLow, &low}, {MetricClass::kAll, &all}};
  for (const auto& [cls, c] : classes) {
    MetricsRow row;
    row.method = method;
    row.rate = rate;
    row.seed = seed;
    row.risk_class = cls;
    row.recall = c->anomalies > 0
                     ? static_cast<double>(c->detected) / static_cast<double>(c->anomalies)
                     : 0.0;
    row.precision_overall = precision;
    row.detected = c->detected;
    row.anomalies_total = c->anomalies;
    row.sampled = c->sampled;
    row.events_total = c->events;
    rows.push_back(row);
  }
  return rows;
}

// Seed-averaged view of one (method, rate, class) cell.
struct SummaryRow {
  PolicyKind method = PolicyKind::kNone;
  double rate = 1.0;
  MetricClass risk_class = MetricClass::kAll;
  double recall_mean = 0.0;
  double recall_stderr = 0.0;
  double precision_mean = 1.0;
  double precision_stderr = 0.0;
  std::uint32_t seeds = 0;
};

namespace detail {

inline std::tuple<int, double, std::uint64_t, int> canonical_key(const MetricsRow& row) {
  return {static_cast<int>(row.method), row.rate, row.seed, static_cast<int>(row.risk_class)};
}

inline std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

}  // namespace detail

inline std::vector<SummaryRow> summarize(std::span<const MetricsRow> trials) {
  std::map<std::tuple<int, double, int>, std::pair<std::vector<double>, std::vector<double>>> cells;
  for (const MetricsRow& row : trials) {
    auto& cell = cells[{static_cast<int>(row.method), row.rate, static_cast<int>(row.risk_class)}];
    cell.first.push_back(row.recall);
    cell.second.push_back(row.precision_overall);
  }
  std::vector<SummaryRow> summary;
  summary.reserve(cells.size());
  for (const auto& [key, cell] : cells) {
    SummaryRow row;
    row.method = static_cast<PolicyKind>(std::get<0>(key));
    row.rate = std::get<1>(key);
    row.risk_class = static_cast<MetricClass>(std::get<2>(key));
    std::tie(row.recall_mean, row.recall_stderr) = detail::mean_stderr(cell.first);
    std::tie(row.precision_mean, row.precision_stderr) = detail::mean_stderr(cell.second);
    row.seeds = static_cast<std::uint32_t>(cell.first.size());
    summary.push_back(row);
  }
  return summary;
}

struct SweepResult {
  std::vector<MetricsRow> trials;   // canonical (method, rate, seed, class) order
  std::vector<SummaryRow> summary;  // canonical (method, rate, class) order
  std::vector<std::pair<std::uint64_t, std::uint64_t>> stream_checksums;  // seed -> digest
};

// Runs the full methods x rates x seeds grid. One stream is generated per
// seed and shared by every trial of that seed, so method comparisons are
// paired; the admission draw for a given (seed, seq) is likewise shared.
inline SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  SweepResult result;
  for (std::uint64_t seed : config.seeds) {
    GeneratorConfig gen = config.generator;
    gen.seed = seed;
    const std::vector<UserProfile> profiles = build_population(gen);
    const std::vector<Event> stream = generate_stream(profiles, gen);
    result.stream_checksums.emplace_back(seed, stream_checksum(stream));
    auto run_one = [&](const SamplingPolicy& policy, double rate_for_row) {
      const std::vector<DetectionRecord> records =
          run_detection(stream, policy, config.detector, seed);
      std::vector<MetricsRow> rows =
          evaluate_trial(stream, records, policy.kind, rate_for_row, seed);
      result.trials.insert(result.trials.end(), rows.begin(), rows.end());
    };
    for (PolicyKind method : config.methods) {
      for (double rate : config.rates) {
        run_one({method, rate, config.posterior_high, gen.risk_prior_high}, rate);
      }
    }
    if (config.include_baseline) {
      run_one({PolicyKind::kNone, 1.0, config.posterior_high, gen.risk_prior_high}, 1.0);
    }
  }
  std::sort(result.trials.begin(), result.trials.end(),
            [](const MetricsRow& a, const MetricsRow& b) {
              return detail::canonical_key(a) < detail::canonical_key(b);
            });
  result.summary = summarize(result.trials);
  return result;
}

// First-order analytic model: the chance the anomaly is admitted times the
// full-data detection rate. Ignores the thinning of user histories.
inline double expected_recall(PolicyKind method, double rate, double posterior_high,
                              double prior_high, MetricClass cls, double base_recall) {
  if (!(base_recall > 0.0 && base_recall < 1.0)) {
    throw ConfigError("expected_recall: base_recall must lie in (0, 1)");
  }
  const SamplingPolicy policy{method, rate, posterior_high, prior_high};
  const AdmissionProbabilities probs = admission_probabilities(policy);
  double p_class = 0.0;
  switch (cls) {
    case MetricClass::kHigh: p_class = probs.p_high; break;
    case MetricClass::kLow: p_class = probs.p_low; break;
    case MetricClass::kAll:
      p_class = prior_high * probs.p_high + (1.0 - prior_high) * probs.p_low;
      break;
  }
  return p_class * base_recall;
}

struct OrderingCheck {
  double rate = 0.0;
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct OrderingReport {
  std::vector<OrderingCheck> checks;
  bool all_pass = true;

  std::string render() const {
    std::string out;
    char line[160];
    for (const OrderingCheck& c : checks) {
      std::snprintf(line, sizeof(line), "%-4s  rate %.2f  %-34s  %8.4f vs %8.4f  margin %+8.4f\n",
                    c.pass ? "PASS" : "FAIL", c.rate, c.name.c_str(), c.lhs, c.rhs, c.lhs - c.rhs);
      out += line;
    }
    out += all_pass ? "orderings: all hold\n" : "orderings: violations present\n";
    return out;
  }
};

// Seed-averaged recall orderings at each rate:
//   low-risk:  vanilla >= combination >= risky_only, and risky_only == 0
//   high-risk: risky_only >= combination >= vanilla
inline OrderingReport check_orderings(std::span<const SummaryRow> summary) {
  std::map<std::pair<double, int>, std::map<int, double>> recall;  // (rate, class) -> method -> mean
  for (const SummaryRow& row : summary) {
    if (row.method == PolicyKind::kNone) continue;
    if (row.risk_class == MetricClass::kAll) continue;
    recall[{row.rate, static_cast<int>(row.risk_class)}][static_cast<int>(row.method)] =
        row.recall_mean;
  }
  std::set<double> rates;
  for (const auto& [key, by_method] : recall) rates.insert(key.first);
  if (rates.empty()) {
    throw InputError("check_orderings: no per-class summary rows for any rate");
  }
  const PolicyKind required[] = {PolicyKind::kVanilla, PolicyKind::kRiskyOnly,
                                 PolicyKind::kCombination};
  OrderingReport report;
  auto expect = [&report](double rate, std::string name, double lhs, double rhs, bool equality) {
    const bool pass = equality ? lhs == rhs : !(lhs < rhs);
    report.checks.push_back({rate, std::move(name), lhs, rhs, pass});
    report.all_pass = report.all_pass && pass;
  };
  for (double rate : rates) {
    for (MetricClass cls : {MetricClass::kLow, MetricClass::kHigh}) {
      const auto it = recall.find({rate, static_cast<int>(cls)});
      std::string missing;
      for (PolicyKind m : required) {
        if (it == recall.end() || !it->second.contains(static_cast<int>(m))) {
          missing += missing.empty() ? "" : ", ";
          missing += to_string(m);
        }
      }
      if (!missing.empty()) {
        throw InputError("check_orderings: missing methods: " + missing + " (rate " +
                         std::to_string(rate) + ", class " + std::string(to_string(cls)) + ")");
      }
    }
    const auto& low = recall[{rate, static_cast<int>(MetricClass::kLow)}];
    const auto& high = recall[{rate, static_cast<int>(MetricClass::kHigh)}];
    const auto m = [](PolicyKind k) { return static_cast<int>(k); };
    expect(rate, "low: vanilla >= combination", low.at(m(PolicyKind::kVanilla)),
           low.at(m(PolicyKind::kCombination)), false);
    expect(rate, "low: combination >= risky_only", low.at(m(PolicyKind::kCombination)),
           low.at(m(PolicyKind::kRiskyOnly)), false);
    expect(rate, "low: risky_only == 0", low.at(m(PolicyKind::kRiskyOnly)), 0.0, true);
    expect(rate, "high: risky_only >= combination", high.at(m(PolicyKind::kRiskyOnly)),
           high.at(m(PolicyKind::kCombination)), false);
    expect(rate, "high: combination >= vanilla", high.at(m(PolicyKind::kCombination)),
           high.at(m(PolicyKind::kVanilla)), false);
  }
  return report;
}

}  // namespace riskstream
