#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace riskstream::rng {

// Counter-based draws: every random number is a pure function of
// (seed, substream, index). Events can therefore be generated, replayed or
// re-checked in any order (or in parallel) with identical results.
//
// Underlying generator: Philox4x32-10 (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3", SC'11).

enum class Substream : std::uint32_t {
  kProfileMu = 1,
  kProfileSigma = 2,
  kProfileCount = 3,
  kInterleave = 4,
  kAnomalyLabel = 5,
  kValue = 6,
  kRiskLabel = 7,
  kAdmission = 8,
  kReservoir = 9,
};

namespace detail {

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

}  // namespace detail

// One 128-bit block, exposed as two 64-bit words.
struct Block {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

inline Block block(std::uint64_t seed, Substream stream, std::uint64_t index) {
  const auto words = detail::philox4x32(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
       static_cast<std::uint32_t>(stream), 0u},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  return {words[0] | (static_cast<std::uint64_t>(words[1]) << 32),
          words[2] | (static_cast<std::uint64_t>(words[3]) << 32)};
}

// Maps 64 random bits onto [0, 1) with 53-bit resolution.
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, Substream stream, std::uint64_t index) {
  return to_unit(block(seed, stream, index).a);
}

// Standard normal draw; Box-Muller on the two words of a single block.
inline double normal(std::uint64_t seed, Substream stream, std::uint64_t index) {
  const Block blk = block(seed, stream, index);
  const double u1 = (static_cast<double>(blk.a >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = to_unit(blk.b);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace riskstream::rng
