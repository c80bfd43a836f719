#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "riskstream/errors.hpp"
#include "riskstream/generator.hpp"
#include "riskstream/harness.hpp"
#include "riskstream/ioutil.hpp"

namespace riskstream {

// Sweep configuration file: flat `key = value` lines, '#' comments, lists
// comma-separated. Unknown keys are rejected.
//
//   users = 1000
//   rates = 0.35, 0.3, 0.25, 0.2
//   methods = vanilla, risky_only, combination
//   seeds = 1, 2, 3

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    if (comma == std::string_view::npos) comma = value.size();
    const std::string_view item = trim(value.substr(start, comma - start));
    if (!item.empty()) items.emplace_back(item);
    start = comma + 1;
    if (comma == value.size()) break;
  }
  return items;
}

inline double config_double(std::string_view value, const std::string& key) {
  try {
    return parse_double(value, "key " + key);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
}

inline std::uint64_t config_u64(std::string_view value, const std::string& key) {
  try {
    return parse_u64(value, "key " + key);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
}

inline bool config_bool(std::string_view value, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("key " + key + ": expected true or false, got '" + std::string(value) + "'");
}

}  // namespace detail

// Parses config text on top of the given defaults.
inline SweepConfig parse_sweep_config(std::string_view text, SweepConfig config = {}) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    line_no += 1;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key{detail::trim(line.substr(0, eq))};
    const std::string_view value = detail::trim(line.substr(eq + 1));

    if (key == "users") {
      config.generator.n_users = detail::config_u64(value, key);
    } else if (key == "obs_per_user") {
      config.generator.obs_per_user = detail::config_u64(value, key);
    } else if (key == "anomaly_rate") {
      config.generator.anomaly_rate = detail::config_double(value, key);
    } else if (key == "risk_prior") {
      config.generator.risk_prior_high = detail::config_double(value, key);
    } else if (key == "delta") {
      config.generator.delta = detail::config_double(value, key);
    } else if (key == "target_recall") {
      config.generator.delta = calibrate_delta(detail::config_double(value, key));
    } else if (key == "mu_min") {
      config.generator.mu_range.first = detail::config_double(value, key);
    } else if (key == "mu_max") {
      config.generator.mu_range.second = detail::config_double(value, key);
    } else if (key == "sigma_min") {
      config.generator.sigma_range.first = detail::config_double(value, key);
    } else if (key == "sigma_max") {
      config.generator.sigma_range.second = detail::config_double(value, key);
    } else if (key == "activity") {
      if (value == "uniform") {
        config.generator.activity = ActivityMode::kUniform;
      } else if (value == "heavy_tail") {
        config.generator.activity = ActivityMode::kHeavyTail;
      } else {
        throw ConfigError("key activity: expected uniform or heavy_tail, got '" +
                          std::string(value) + "'");
      }
    } else if (key == "k_sigma") {
      config.detector.k_sigma = detail::config_double(value, key);
    } else if (key == "n_min") {
      config.detector.n_min = detail::config_u64(value, key);
    } else if (key == "sigma_floor") {
      config.detector.sigma_floor = detail::config_double(value, key);
    } else if (key == "methods") {
      config.methods.clear();
      for (const std::string& item : detail::split_list(value)) {
        config.methods.push_back(parse_policy_kind(item));
      }
    } else if (key == "rates") {
      config.rates.clear();
      for (const std::string& item : detail::split_list(value)) {
        config.rates.push_back(detail::config_double(item, key));
      }
    } else if (key == "seeds") {
      config.seeds.clear();
      for (const std::string& item : detail::split_list(value)) {
        config.seeds.push_back(detail::config_u64(item, key));
      }
    } else if (key == "posterior_high") {
      config.posterior_high = detail::config_double(value, key);
    } else if (key == "include_baseline") {
      config.include_baseline = detail::config_bool(value, key);
    } else {
      throw ConfigError("unknown key: " + key);
    }
    if (nl == text.size()) break;
  }
  return config;
}

}  // namespace riskstream
