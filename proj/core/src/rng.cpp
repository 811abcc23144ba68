#include "twodos/rng.hpp"

#include <cmath>

namespace twodos {

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = static_cast<double>((bits() >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(bits() >> 11) * 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Reject the sliver below 2^64 mod bound so the modulo is exactly uniform.
  const std::uint64_t cutoff = (UINT64_MAX % bound + 1) % bound;
  std::uint64_t x = bits();
  while (x < cutoff) x = bits();
  return x % bound;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t seed_mix(std::initializer_list<std::uint64_t> labels) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t v : labels) h = mix64(h ^ mix64(v));
  return h;
}

}  // namespace twodos
