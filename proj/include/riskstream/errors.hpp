#pragma once

#include <stdexcept>

namespace riskstream {

// Error taxonomy, mirrored by the CLI exit codes:
//   ConfigError -> 2 (bad parameters, unknown config keys)
//   InputError  -> 3 (malformed or inconsistent data)
//   IoError     -> 3 (filesystem and parse failures)
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace riskstream
