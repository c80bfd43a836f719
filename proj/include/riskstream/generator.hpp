#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "riskstream/errors.hpp"
#include "riskstream/event.hpp"
#include "riskstream/rng.hpp"

namespace riskstream {

enum class ActivityMode : std::uint8_t { kUniform, kHeavyTail };

struct GeneratorConfig {
  std::uint64_t n_users = 1000;
  std::uint64_t obs_per_user = 300;
  double anomaly_rate = 0.01;
  double risk_prior_high = 0.30;
  double delta = 3.2;  // anomaly mean shift in units of the user's sigma
  std::pair<double, double> mu_range{0.0, 100.0};
  std::pair<double, double> sigma_range{1.0, 10.0};
  ActivityMode activity = ActivityMode::kUniform;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_users == 0 || n_users > std::numeric_limits<std::uint32_t>::max()) {
      throw ConfigError("generator: n_users must be in [1, 2^32)");
    }
    if (obs_per_user == 0) throw ConfigError("generator: obs_per_user must be positive");
    if (!(anomaly_rate >= 0.0 && anomaly_rate < 1.0)) {
      throw ConfigError("generator: anomaly_rate must lie in [0, 1)");
    }
    if (!(risk_prior_high > 0.0 && risk_prior_high < 1.0)) {
      throw ConfigError("generator: risk_prior_high must lie in (0, 1)");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
      throw ConfigError("generator: delta must be positive");
    }
    if (!(mu_range.first <= mu_range.second)) {
      throw ConfigError("generator: mu_range low must not exceed high");
    }
    if (!(sigma_range.first > 0.0) || !(sigma_range.first <= sigma_range.second)) {
      throw ConfigError("generator: sigma_range must be positive and ordered");
    }
  }
};

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// Solves Phi(delta - 3) + Phi(-delta - 3) = target_recall for delta by
// bisection on [0, 10], to absolute tolerance 1e-6. This is the idealized
// (known mean and sigma) detection rate of a 3-sigma rule against a
// one-sided mean shift of delta sigmas.
inline double calibrate_delta(double target_recall) {
  if (!(target_recall > 0.0 && target_recall < 1.0)) {
    throw ConfigError("calibrate_delta: target_recall must lie in (0, 1)");
  }
  const auto excess = [target_recall](double delta) {
    return normal_cdf(delta - 3.0) + normal_cdf(-delta - 3.0) - target_recall;
  };
  double lo = 0.0;
  double hi = 10.0;
  if (excess(lo) > 0.0) {
    throw ConfigError("calibrate_delta: target_recall below the 2*Phi(-3) false-positive floor");
  }
  if (excess(hi) < 0.0) {
    throw ConfigError("calibrate_delta: target_recall unreachable on delta in [0, 10]");
  }
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

// Heavy-tail activity: lognormal with median obs_per_user / 3. The shape
// keeps well over 80% of users below 1000 events at the default 300
// observations per user.
inline constexpr double kHeavyTailShape = 1.5;

inline std::uint64_t heavy_tail_cap(const GeneratorConfig& config) {
  return 100 * config.obs_per_user;
}

}  // namespace detail

// Draws the user population. Fully determined by config.seed; each user's
// draws are keyed by user id, so the population is stable under resizing.
inline std::vector<UserProfile> build_population(const GeneratorConfig& config) {
  config.validate();
  std::vector<UserProfile> profiles(config.n_users);
  for (std::uint64_t u = 0; u < config.n_users; ++u) {
    UserProfile& p = profiles[u];
    p.user_id = u;
    p.mu = config.mu_range.first +
           rng::uniform(config.seed, rng::Substream::kProfileMu, u) *
               (config.mu_range.second - config.mu_range.first);
    p.sigma = config.sigma_range.first +
              rng::uniform(config.seed, rng::Substream::kProfileSigma, u) *
                  (config.sigma_range.second - config.sigma_range.first);
    p.n_events = config.obs_per_user;
  }
  if (config.activity == ActivityMode::kHeavyTail) {
    const double cap = static_cast<double>(detail::heavy_tail_cap(config));
    const double log_median = std::log(static_cast<double>(config.obs_per_user) / 3.0);
    std::vector<double> raw(config.n_users);
    double total = 0.0;
    for (std::uint64_t u = 0; u < config.n_users; ++u) {
      const double z = rng::normal(config.seed, rng::Substream::kProfileCount, u);
      raw[u] = std::clamp(std::exp(log_median + detail::kHeavyTailShape * z), 1.0, cap);
      total += raw[u];
    }
    // Rescale so the stream stays near n_users * obs_per_user events.
    const double scale = static_cast<double>(config.n_users) *
                         static_cast<double>(config.obs_per_user) / total;
    for (std::uint64_t u = 0; u < config.n_users; ++u) {
      const double scaled = std::clamp(std::round(raw[u] * scale), 1.0, cap);
      profiles[u].n_events = static_cast<std::uint64_t>(scaled);
    }
  }
  return profiles;
}

// Lazily emits the simulated stream in a seed-determined interleaved order.
// Every per-event draw is keyed by the event's seq, so values can be
// re-derived independently of how the stream is consumed.
class StreamGenerator {
 public:
  StreamGenerator(std::vector<UserProfile> profiles, const GeneratorConfig& config)
      : profiles_(std::move(profiles)), config_(config) {
    config_.validate();
    if (profiles_.empty()) {
      throw InputError("stream generator: profile list is empty");
    }
    std::uint64_t total = 0;
    for (const UserProfile& p : profiles_) {
      if (!(p.sigma > 0.0)) throw InputError("stream generator: profile sigma must be positive");
      if (p.n_events == 0) throw InputError("stream generator: profile n_events must be positive");
      if (p.n_events > std::numeric_limits<std::uint32_t>::max() ||
          p.user_id > std::numeric_limits<std::uint32_t>::max()) {
        throw InputError("stream generator: user_id and n_events must fit 32 bits");
      }
      total += p.n_events;
    }
    order_.reserve(total);
    for (std::uint32_t u = 0; u < profiles_.size(); ++u) {
      const UserProfile& p = profiles_[u];
      const std::uint64_t key_base = p.user_id << 32;
      const double inv_n = 1.0 / static_cast<double>(p.n_events);
      for (std::uint32_t j = 0; j < p.n_events; ++j) {
        // Round-robin with jitter: the j-th event of a user lands near
        // progress fraction j / n_events, shuffled within each round.
        const double jitter = rng::uniform(config_.seed, rng::Substream::kInterleave, key_base | j);
        order_.push_back({(static_cast<double>(j) + jitter) * inv_n, u, j});
      }
    }
    std::sort(order_.begin(), order_.end(), [](const Slot& a, const Slot& b) {
      return std::tie(a.score, a.user, a.ordinal) < std::tie(b.score, b.user, b.ordinal);
    });
  }

  std::uint64_t total_events() const { return order_.size(); }
  bool done() const { return pos_ >= order_.size(); }

  Event next() {
    const Slot& slot = order_[pos_];
    const UserProfile& p = profiles_[slot.user];
    const std::uint64_t seq = pos_++;
    const bool anomalous =
        rng::uniform(config_.seed, rng::Substream::kAnomalyLabel, seq) < config_.anomaly_rate;
    const double z = rng::normal(config_.seed, rng::Substream::kValue, seq);
    Event e;
    e.seq = seq;
    e.user_id = p.user_id;
    e.value = p.mu + (anomalous ? config_.delta * p.sigma : 0.0) + p.sigma * z;
    e.risk = rng::uniform(config_.seed, rng::Substream::kRiskLabel, seq) < config_.risk_prior_high
                 ? RiskClass::kHigh
                 : RiskClass::kLow;
    e.label = anomalous ? Label::kAnomaly : Label::kNormal;
    return e;
  }

 private:
  struct Slot {
    double score;
    std::uint32_t user;
    std::uint32_t ordinal;
  };

  std::vector<UserProfile> profiles_;
  GeneratorConfig config_;
  std::vector<Slot> order_;
  std::uint64_t pos_ = 0;
};

inline std::vector<Event> generate_stream(std::span<const UserProfile> profiles,
                                          const GeneratorConfig& config) {
  StreamGenerator gen({profiles.begin(), profiles.end()}, config);
  std::vector<Event> events;
  events.reserve(gen.total_events());
  while (!gen.done()) {
    events.push_back(gen.next());
  }
  return events;
}

}  // namespace riskstream
