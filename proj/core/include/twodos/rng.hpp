#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace twodos {

// Deterministic random source. The mt19937_64 engine output is fully
// specified by the standard; the distributions below are implemented here
// because the std:: distribution objects are implementation-defined and
// would break the same-seed-same-result contract across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; every second draw comes from the cache.
  double gaussian();

  // Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);

  int bit() { return static_cast<int>(bits() >> 63); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Derives an independent stream seed from a master seed plus structured
// labels (sweep point, frame index, role tag, ...). Distinct label sequences
// collide only as often as a 64-bit hash does.
std::uint64_t seed_mix(std::initializer_list<std::uint64_t> labels);

// Role tags used when deriving stream seeds.
inline constexpr std::uint64_t kSeedRoleMessage = 0x01;
inline constexpr std::uint64_t kSeedRoleNoise = 0x02;
inline constexpr std::uint64_t kSeedRolePage = 0x03;
inline constexpr std::uint64_t kSeedRoleDraws = 0x04;
inline constexpr std::uint64_t kSeedRoleConstruction = 0x05;

}  // namespace twodos
