#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "riskstream/errors.hpp"
#include "riskstream/event.hpp"
#include "riskstream/samplers.hpp"

namespace riskstream {

struct DetectorConfig {
  double k_sigma = 3.0;      // flag threshold in estimated standard deviations
  std::uint64_t n_min = 2;   // observations required before flagging is allowed
  double sigma_floor = 0.0;  // below this stddev, any value != mean is flagged

  void validate() const {
    if (!(k_sigma > 0.0) || !std::isfinite(k_sigma)) {
      throw ConfigError("detector: k_sigma must be positive");
    }
    if (n_min < 2) {
      throw ConfigError("detector: n_min must be at least 2");
    }
    if (!(sigma_floor >= 0.0) || !std::isfinite(sigma_floor)) {
      throw ConfigError("detector: sigma_floor must be non-negative");
    }
  }
};

// Welford's recurrence; matches the two-pass mean and sum of squared
// deviations of the full history to ~1e-12 relative error.
inline UserModel welford_update(UserModel model, double value) {
  if (!std::isfinite(value)) {
    throw InputError("welford_update: non-finite value");
  }
  model.count += 1;
  const double delta = value - model.mean;
  model.mean += delta / static_cast<double>(model.count);
  model.m2 += delta * (value - model.mean);
  if (model.m2 < 0.0) model.m2 = 0.0;  // rounding can leave a tiny negative residue
  return model;
}

struct ObserveResult {
  bool flagged = false;
  UserModel model;
};

// Compare-then-incorporate: the value is judged against the pre-update
// model, then folded into it whether or not it was flagged.
inline ObserveResult observe(const UserModel& model, double value, const DetectorConfig& config) {
  if (!std::isfinite(value)) {
    throw InputError("observe: non-finite value");
  }
  bool flagged = false;
  if (model.count >= config.n_min) {
    const double s = std::sqrt(model.m2 / static_cast<double>(model.count - 1));
    flagged = s > config.sigma_floor
                  ? std::abs(value - model.mean) > config.k_sigma * s
                  : value != model.mean;
  }
  return {flagged, welford_update(model, value)};
}

struct DetectionRecord {
  std::uint64_t seq = 0;
  bool admitted = false;
  bool flagged = false;
};

// Single-pass admission + detection over a stream. Memory is one UserModel
// per distinct user seen. With adaptive_prior the assumed HIGH share is
// re-estimated from the events seen so far instead of taken from the policy.
class DetectionPipeline {
 public:
  DetectionPipeline(const SamplingPolicy& policy, const DetectorConfig& config,
                    std::uint64_t seed, bool adaptive_prior = false)
      : policy_(policy),
        config_(config),
        seed_(seed),
        adaptive_prior_(adaptive_prior),
        probs_(admission_probabilities(policy)) {
    config_.validate();
  }

  DetectionRecord step(const Event& event) {
    if (adaptive_prior_) {
      SamplingPolicy p = policy_;
      p.prior_high = (static_cast<double>(high_seen_) + 1.0) /
                     (static_cast<double>(total_seen_) + 2.0);
      probs_ = admission_probabilities(p);
      total_seen_ += 1;
      if (event.risk == RiskClass::kHigh) high_seen_ += 1;
    }
    DetectionRecord record{event.seq, admit_with(probs_, event.risk, seed_, event.seq), false};
    if (record.admitted) {
      UserModel& model = models_[event.user_id];
      ObserveResult result = observe(model, event.value, config_);
      record.flagged = result.flagged;
      model = result.model;
    }
    return record;
  }

  std::size_t user_count() const { return models_.size(); }

  const AdmissionProbabilities& probabilities() const { return probs_; }

 private:
  SamplingPolicy policy_;
  DetectorConfig config_;
  std::uint64_t seed_;
  bool adaptive_prior_;
  AdmissionProbabilities probs_;
  std::uint64_t high_seen_ = 0;
  std::uint64_t total_seen_ = 0;
  std::unordered_map<std::uint64_t, UserModel> models_;
};

inline std::vector<DetectionRecord> run_detection(std::span<const Event> stream,
                                                  const SamplingPolicy& policy,
                                                  const DetectorConfig& config,
                                                  std::uint64_t seed) {
  DetectionPipeline pipeline(policy, config, seed);
  std::vector<DetectionRecord> records;
  records.reserve(stream.size());
  for (const Event& event : stream) {
    records.push_back(pipeline.step(event));
  }
  return records;
}

}  // namespace riskstream
