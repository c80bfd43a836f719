#pragma once

#include <string_view>

namespace riskstream {

inline constexpr std::string_view kToolName = "riskstream";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace riskstream
