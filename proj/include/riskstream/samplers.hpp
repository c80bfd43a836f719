#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "riskstream/errors.hpp"
#include "riskstream/event.hpp"
#include "riskstream/rng.hpp"

namespace riskstream {

// Per-class Bernoulli admission rates realizing a policy. For every policy
// the expected admitted fraction p_high * prior + p_low * (1 - prior) equals
// the target rate whenever the budget is achievable.
struct AdmissionProbabilities {
  double p_high = 1.0;
  double p_low = 1.0;
};

inline AdmissionProbabilities admission_probabilities(const SamplingPolicy& policy) {
  policy.validate();
  switch (policy.kind) {
    case PolicyKind::kNone:
      return {1.0, 1.0};
    case PolicyKind::kVanilla:
      return {policy.rate, policy.rate};
    case PolicyKind::kRiskyOnly:
      return {std::min(1.0, policy.rate / policy.prior_high), 0.0};
    case PolicyKind::kCombination: {
      const double r = policy.rate;
      const double q = policy.posterior_high;
      const double pi = policy.prior_high;
      double p_high = r * q / pi;
      double p_low = r * (1.0 - q) / (1.0 - pi);
      if (p_high >= 1.0) {
        // HIGH cannot supply its quota; the leftover budget goes to LOW.
        p_high = 1.0;
        p_low = std::min(1.0, (r - pi) / (1.0 - pi));
      } else if (p_low >= 1.0) {
        p_low = 1.0;
        p_high = std::min(1.0, (r - (1.0 - pi)) / pi);
      }
      return {p_high, p_low};
    }
  }
  throw ConfigError("sampling policy: unknown kind");
}

// Admission decision for a known pair of per-class rates. Keyed by
// (seed, seq) only: the decision never looks at the event value, and equal
// keys give equal draws regardless of processing order.
inline bool admit_with(const AdmissionProbabilities& probs, RiskClass risk,
                       std::uint64_t seed, std::uint64_t seq) {
  const double p = risk == RiskClass::kHigh ? probs.p_high : probs.p_low;
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return rng::uniform(seed, rng::Substream::kAdmission, seq) < p;
}

inline bool admit(const SamplingPolicy& policy, const Event& event, std::uint64_t seed) {
  return admit_with(admission_probabilities(policy), event.risk, seed, event.seq);
}

// Add-one smoothed estimate of the HIGH share of the stream; keeps the
// estimate inside (0, 1) so it is always a usable prior.
inline double estimate_prior(std::uint64_t high_seen, std::uint64_t total_seen) {
  if (total_seen == 0) {
    throw InputError("estimate_prior: needs at least one observed event");
  }
  if (high_seen > total_seen) {
    throw InputError("estimate_prior: high_seen exceeds total_seen");
  }
  return (static_cast<double>(high_seen) + 1.0) / (static_cast<double>(total_seen) + 2.0);
}

// Fixed-budget uniform sample per risk class (Algorithm R per stratum), for
// the archival path. Detection admission stays Bernoulli: a reservoir
// eviction cannot retract an already-raised detection.
class StratifiedReservoir {
 public:
  StratifiedReservoir(std::size_t capacity_high, std::size_t capacity_low, std::uint64_t seed)
      : high_{capacity_high, {}, 0}, low_{capacity_low, {}, 0}, seed_(seed) {
    high_.slots.reserve(capacity_high);
    low_.slots.reserve(capacity_low);
  }

  // Returns the evicted event if the offer replaced a stored one.
  std::optional<Event> offer(const Event& event) {
    return offer_to(event.risk == RiskClass::kHigh ? high_ : low_, event);
  }

  std::span<const Event> stratum(RiskClass risk) const {
    const Stratum& s = risk == RiskClass::kHigh ? high_ : low_;
    return {s.slots.data(), s.slots.size()};
  }

  std::uint64_t seen(RiskClass risk) const {
    return (risk == RiskClass::kHigh ? high_ : low_).seen;
  }

 private:
  struct Stratum {
    std::size_t capacity;
    std::vector<Event> slots;
    std::uint64_t seen;
  };

  std::optional<Event> offer_to(Stratum& s, const Event& event) {
    s.seen += 1;
    if (s.slots.size() < s.capacity) {
      s.slots.push_back(event);
      return std::nullopt;
    }
    if (s.capacity == 0) return std::nullopt;
    const rng::Block blk = rng::block(seed_, rng::Substream::kReservoir, event.seq);
    // Keep with probability capacity / seen.
    if (rng::to_unit(blk.a) * static_cast<double>(s.seen) >= static_cast<double>(s.capacity)) {
      return std::nullopt;
    }
    const std::size_t slot = std::min(
        s.capacity - 1, static_cast<std::size_t>(rng::to_unit(blk.b) * static_cast<double>(s.capacity)));
    Event evicted = s.slots[slot];
    s.slots[slot] = event;
    return evicted;
  }

  Stratum high_;
  Stratum low_;
  std::uint64_t  seed_;
};

inline std::optional<Event> reservoir_offer(StratifiedReservoir& reservoir, const Event& event) {
  return reservoir.offer(event);
}

}  // namespace riskstream
