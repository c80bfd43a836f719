#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "riskstream/detector.hpp"
#include "riskstream/event.hpp"
#include "riskstream/generator.hpp"
#include "riskstream/samplers.hpp"

namespace riskstream {

struct BenchConfig {
  std::uint64_t events = 5'000'000;
  std::uint64_t obs_per_user = 300;
  SamplingPolicy policy{PolicyKind::kCombination, 0.2, 0.8, 0.3};
  DetectorConfig detector;
  std::uint64_t seed = 1;
};

struct BenchResult {
  std::uint64_t events = 0;
  double generate_eps = 0.0;  // events per second, generation alone
  double sample_eps = 0.0;    // admission decisions alone
  double pipeline_eps = 0.0;  // generate + admit + detect
  std::size_t peak_users = 0;
  std::uint64_t admitted = 0;
  std::uint64_t flagged = 0;
  std::uint64_t value_digest = 0;  // xor of generated value bits; pins the loop down

  std::string render() const {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "events processed:  %llu\n"
                  "generate-only:     %.0f events/s\n"
                  "sample-only:       %.0f events/s\n"
                  "full pipeline:     %.0f events/s\n"
                  "peak user models:  %zu\n"
                  "admitted:          %llu (%.2f%%)\n"
                  "flagged:           %llu\n",
                  static_cast<unsigned long long>(events), generate_eps, sample_eps, pipeline_eps,
                  peak_users, static_cast<unsigned long long>(admitted),
                  events > 0 ? 100.0 * static_cast<double>(admitted) / static_cast<double>(events)
                             : 0.0,
                  static_cast<unsigned long long>(flagged));
    return buf;
  }
};

// Times the synthetic pipeline stage by stage over an in-memory stream.
// No file I/O happens inside any timed region.
inline BenchResult run_bench(const BenchConfig& config) {
  GeneratorConfig gen;
  gen.n_users =
      std::max<std::uint64_t>(1, (config.events + config.obs_per_user - 1) / config.obs_per_user);
  gen.obs_per_user = config.obs_per_user;
  gen.seed = config.seed;

  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };

  BenchResult result;
  result.events = config.events;

  // Generation, including the interleave ordering work.
  std::uint64_t sink = 0;
  const auto t0 = clock::now();
  {
    StreamGenerator stream(build_population(gen), gen);
    for (std::uint64_t i = 0; i < config.events && !stream.done(); ++i) {
      sink ^= std::bit_cast<std::uint64_t>(stream.next().value);
    }
  }
  const auto t1 = clock::now();
  result.generate_eps = static_cast<double>(config.events) / seconds(t0, t1);

  // Admission alone, over prematerialized (seq, risk) pairs.
  std::vector<RiskClass> risks(config.events);
  {
    StreamGenerator stream(build_population(gen), gen);
    for (std::uint64_t i = 0; i < config.events && !stream.done(); ++i) {
      risks[i] = stream.next().risk;
    }
  }
  const AdmissionProbabilities probs = admission_probabilities(config.policy);
  const auto t2 = clock::now();
  std::uint64_t admitted = 0;
  for (std::uint64_t i = 0; i < config.events; ++i) {
    admitted += admit_with(probs, risks[i], config.seed, i) ? 1 : 0;
  }
  const auto t3 = clock::now();
  result.sample_eps = static_cast<double>(config.events) / seconds(t2, t3);
  result.admitted = admitted;

  // Full pipeline: generate, admit, detect, single thread.
  const auto t4 = clock::now();
  {
    StreamGenerator stream(build_population(gen), gen);
    DetectionPipeline pipeline(config.policy, config.detector, config.seed);
    std::uint64_t flagged = 0;
    for (std::uint64_t i = 0; i < config.events && !stream.done(); ++i) {
      flagged += pipeline.step(stream.next()).flagged ? 1 : 0;
    }
    result.flagged = flagged;
    result.peak_users = pipeline.user_count();
  }
  const auto t5 = clock::now();
  result.pipeline_eps = static_cast<double>(config.events) / seconds(t4, t5);

  result.value_digest = sink;
  return result;
}

}  // namespace riskstream
