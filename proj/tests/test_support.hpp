#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "riskstream/detector.hpp"
#include "riskstream/event.hpp"
#include "riskstream/ioutil.hpp"

namespace test_support {

// Independent batch oracle for the streaming detector: two-pass mean and
// sum of squared deviations, recomputed from scratch for each prefix.
struct TwoPassStats {
  double mean = 0.0;
  double m2 = 0.0;
};

inline TwoPassStats two_pass(std::span<const double> values) {
  TwoPassStats stats;
  if (values.empty()) return stats;
  for (double v : values) stats.mean += v;
  stats.mean /= static_cast<double>(values.size());
  for (double v : values) stats.m2 += (v - stats.mean) * (v - stats.mean);
  return stats;
}

// Flag decision for each position from two-pass statistics of the values
// before it; mirrors the detector contract without sharing its code path.
inline std::vector<bool> batch_flags(std::span<const double> values,
                                     const riskstream::DetectorConfig& config) {
  std::vector<bool> flags(values.size(), false);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i < config.n_min) continue;
    const TwoPassStats stats = two_pass(values.subspan(0, i));
    const double s = std::sqrt(stats.m2 / static_cast<double>(i - 1));
    flags[i] = s > config.sigma_floor
                   ? std::abs(values[i] - stats.mean) > config.k_sigma * s
                   : values[i] != stats.mean;
  }
  return flags;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the built CLI in `workdir`, capturing stdout/stderr.
inline CliResult run_cli(const std::string& args, const std::filesystem::path& workdir) {
  namespace fs = std::filesystem;
  fs::create_directories(workdir);
  const fs::path out_file = workdir / "_stdout.txt";
  const fs::path err_file = workdir / "_stderr.txt";
  const std::string command = "cd '" + workdir.string() + "' && '" + RISKSTREAM_CLI_PATH + "' " +
                              args + " > '" + out_file.string() + "' 2> '" + err_file.string() +
                              "'";
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = riskstream::read_file(out_file);
  result.err = riskstream::read_file(err_file);
  return result;
}

// Fresh scratch directory under the system temp root.
inline std::filesystem::path scratch_dir(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("riskstream_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace test_support
