#pragma once

#include <array>
#include <string>

namespace twodos {

// Readback intensity levels of the hexagonal nearest-neighbor channel.
// level(n, b) is the noiseless intensity when the central bit is b and
// exactly n of its six neighbors are nonzero: 14 levels in total.
class SignalLevelTable {
 public:
  static constexpr int kNeighborCounts = 7;

  explicit SignalLevelTable(
      const std::array<std::array<double, 2>, kNeighborCounts>& levels);

  // Levels for the nominal pit/spot geometry.
  static const SignalLevelTable& nominal();

  // Plain-text format: 7 lines "n s_n0 s_n1", n = 0..6 in order.
  // Rejects missing rows and level sets that are not strictly decreasing
  // in n or that do not satisfy s_n0 > s_n1.
  static SignalLevelTable from_file(const std::string& path);
  void to_file(const std::string& path) const;

  double level(int nonzero_neighbors, int central_bit) const {
    return levels_[static_cast<std::size_t>(nonzero_neighbors)]
                  [static_cast<std::size_t>(central_bit)];
  }

  // Sum over the 2^7 neighborhood configurations of the squared level,
  // i.e. sum_n C(6,n) * (s_n0^2 + s_n1^2). Numerator of the SNR definition.
  double energy_sum() const;

 private:
  std::array<std::array<double, 2>, kNeighborCounts> levels_;

  void validate() const;
};

}  // namespace twodos
