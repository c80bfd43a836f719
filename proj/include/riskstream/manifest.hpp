#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "riskstream/detector.hpp"
#include "riskstream/event.hpp"
#include "riskstream/generator.hpp"
#include "riskstream/ioutil.hpp"
#include "riskstream/samplers.hpp"
#include "riskstream/version.hpp"

namespace riskstream {

// Every output directory carries one manifest.json: the full parameter
// snapshot plus content digests, so a run can be reproduced and its outputs
// verified byte for byte. Nothing time- or host-dependent goes in.

inline nlohmann::json to_json(const GeneratorConfig& g) {
  return {
      {"users", g.n_users},
      {"obs_per_user", g.obs_per_user},
      {"anomaly_rate", g.anomaly_rate},
      {"risk_prior", g.risk_prior_high},
      {"delta", g.delta},
      {"mu_min", g.mu_range.first},
      {"mu_max", g.mu_range.second},
      {"sigma_min", g.sigma_range.first},
      {"sigma_max", g.sigma_range.second},
      {"activity", g.activity == ActivityMode::kHeavyTail ? "heavy_tail" : "uniform"},
      {"seed", g.seed},
  };
}

inline nlohmann::json to_json(const DetectorConfig& d) {
  return {
      {"k_sigma", d.k_sigma},
      {"n_min", d.n_min},
      {"sigma_floor", d.sigma_floor},
  };
}

inline nlohmann::json to_json(const SamplingPolicy& p, const AdmissionProbabilities& probs) {
  return {
      {"method", to_string(p.kind)},
      {"rate", p.rate},
      {"posterior_high", p.posterior_high},
      {"prior_high", p.prior_high},
      {"p_high", probs.p_high},
      {"p_low", probs.p_low},
  };
}

inline nlohmann::json manifest_base(std::string command) {
  nlohmann::json m;
  m["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  m["command"] = std::move(command);
  return m;
}

inline nlohmann::json file_stamp(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  return {{"bytes", content.size()}, {"fnv1a64", fnv1a64_hex(content)}};
}

inline std::string render_manifest(const nlohmann::json& manifest) {
  return manifest.dump(2) + "\n";
}

inline void write_manifest(const std::filesystem::path& directory, const nlohmann::json& manifest) {
  atomic_write_file(directory / "manifest.json", render_manifest(manifest));
}

}  // namespace riskstream
