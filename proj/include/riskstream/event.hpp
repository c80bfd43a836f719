#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskstream/errors.hpp"

namespace riskstream {

enum class RiskClass : std::uint8_t { kHigh, kLow };

// Ground-truth anomaly label. Simulated streams are fully labeled; ingested
// production logs may carry no label at all.
enum class Label : std::uint8_t { kNormal, kAnomaly, kUnlabeled };

// One monitored transaction.
struct Event {
  std::uint64_t seq = 0;      // strictly increasing within a stream
  std::uint64_t user_id = 0;
  double value = 0.0;
  RiskClass risk = RiskClass::kLow;
  Label label = Label::kNormal;

  bool is_anomaly() const { return label == Label::kAnomaly; }
  bool labeled() const { return label != Label::kUnlabeled; }

  friend bool operator==(const Event&, const Event&) = default;
};

// Generator-side truth for one simulated user.
struct UserProfile {
  std::uint64_t user_id = 0;
  double mu = 0.0;
  double sigma = 1.0;      // > 0
  std::uint64_t n_events = 1;

  friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

enum class PolicyKind : std::uint8_t { kVanilla, kRiskyOnly, kCombination, kNone };

// Admission strategy plus its parameters. `rate` is the target overall
// fraction of the stream to admit; `posterior_high` is the target HIGH share
// of the admitted sample (combination only); `prior_high` is the assumed HIGH
// share of the raw stream.
struct SamplingPolicy {
  PolicyKind kind = PolicyKind::kNone;
  double rate = 1.0;
  double posterior_high = 0.8;
  double prior_high = 0.3;

  void validate() const {
    if (!(rate >= 0.0 && rate <= 1.0)) {
      throw ConfigError("sampling policy: rate must lie in [0, 1]");
    }
    if (!(posterior_high >= 0.0 && posterior_high <= 1.0)) {
      throw ConfigError("sampling policy: posterior_high must lie in [0, 1]");
    }
    if (!(prior_high > 0.0 && prior_high < 1.0)) {
      throw ConfigError("sampling policy: prior_high must lie in (0, 1)");
    }
  }
};

// Running per-user statistics over admitted observations. count = 0 keeps
// mean = m2 = 0; sample variance is m2 / (count - 1) once count >= 2.
struct UserModel {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

enum class MetricClass : std::uint8_t { kHigh, kLow, kAll };

// One evaluation result row. recall is per risk class against all generated
// anomalies of that class (unsampled ones count as misses); precision is
// overall, not per class, and repeats on every row of a trial.
struct MetricsRow {
  PolicyKind method = PolicyKind::kNone;
  double rate = 1.0;
  std::uint64_t seed = 0;
  MetricClass risk_class = MetricClass::kAll;
  double recall = 0.0;
  double precision_overall = 1.0;
  std::uint64_t detected = 0;
  std::uint64_t anomalies_total = 0;
  std::uint64_t sampled = 0;
  std::uint64_t events_total = 0;
};

inline std::string_view to_string(RiskClass risk) {
  return risk == RiskClass::kHigh ? "high" : "low";
}

inline std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kVanilla: return "vanilla";
    case PolicyKind::kRiskyOnly: return "risky_only";
    case PolicyKind::kCombination: return "combination";
    case PolicyKind::kNone: return "none";
  }
  return "unknown";
}

inline std::string_view to_string(MetricClass cls) {
  switch (cls) {
    case MetricClass::kHigh: return "high";
    case MetricClass::kLow: return "low";
    case MetricClass::kAll: return "all";
  }
  return "unknown";
}

inline PolicyKind parse_policy_kind(std::string_view name) {
  if (name == "vanilla") return PolicyKind::kVanilla;
  if (name == "risky_only") return PolicyKind::kRiskyOnly;
  if (name == "combination") return PolicyKind::kCombination;
  if (name == "none") return PolicyKind::kNone;
  throw ConfigError("unknown sampling method: " + std::string(name));
}

struct StreamViolation {
  std::size_t position = 0;  // index into the sequence under validation
  std::string message;
};

struct StreamValidation {
  bool ok = true;
  std::vector<StreamViolation> violations;  // at most the first 10
};

// Checks seq monotonicity and value finiteness. Violations are data, not
// faults; collection stops after the first 10.
inline StreamValidation validate_stream(std::span<const Event> events) {
  constexpr std::size_t kMaxViolations = 10;
  StreamValidation result;
  auto add = [&result](std::size_t pos, std::string message) {
    result.ok = false;
    if (result.violations.size() < kMaxViolations) {
      result.violations.push_back({pos, std::move(message)});
    }
  };
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (i > 0) {
      const std::uint64_t prev = events[i - 1].seq;
      if (e.seq == prev) {
        add(i, "duplicate seq " + std::to_string(e.seq));
      } else if (e.seq < prev) {
        add(i, "decreasing seq " + std::to_string(e.seq) + " after " + std::to_string(prev));
      }
    }
    if (!std::isfinite(e.value)) {
      add(i, "non-finite value at seq " + std::to_string(e.seq));
    }
    if (!result.ok && result.violations.size() >= kMaxViolations) break;
  }
  return result;
}

// Order-sensitive FNV-1a digest of a stream, used to prove that paired
// trials saw identical input.
inline std::uint64_t stream_checksum(std::span<const Event> events) {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFFu;
      h *= 1099511628211ULL;
    }
  };
  for (const Event& e : events) {
    mix(e.seq);
    mix(e.user_id);
    mix(std::bit_cast<std::uint64_t>(e.value));
    mix(static_cast<std::uint64_t>(e.risk) | (static_cast<std::uint64_t>(e.label) << 8));
  }
  return h;
}

}  // namespace riskstream
