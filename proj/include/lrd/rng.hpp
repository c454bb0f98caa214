#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace lrd {

/// Philox4x32-10 counter-based generator (Salmon et al. 2011): a keyed
/// bijection of a 128-bit counter, so any draw is addressable directly.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u, kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u, kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Random stream keyed by (seed, stream); draws are indexed by (time, slot).
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t k = splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  }

  std::array<std::uint32_t, 4> block(std::uint64_t t, std::uint32_t slot) const {
    return philox4x32({static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32), slot, 0u},
                      key_);
  }

  /// Two uniforms in (0, 1) with 53-bit resolution.
  std::array<double, 2> uniform2(std::uint64_t t, std::uint32_t slot) const {
    const auto w = block(t, slot);
    auto to_unit = [](std::uint32_t hi, std::uint32_t lo) {
      const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
      return (static_cast<double>(bits & ((1ull << 53) - 1)) + 0.5) * 0x1.0p-53;
    };
    return {to_unit(w[0], w[1]), to_unit(w[2], w[3])};
  }

  double uniform(std::uint64_t t, std::uint32_t slot) const { return uniform2(t, slot)[0]; }

  /// Standard normal by Box-Muller.
  double normal(std::uint64_t t, std::uint32_t slot) const {
    const auto u = uniform2(t, slot);
    return std::sqrt(-2.0 * std::log(u[0])) * std::cos(2.0 * std::numbers::pi * u[1]);
  }

private:
  std::array<std::uint32_t, 2> key_;
};

}  // namespace lrd
