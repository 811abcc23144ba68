#include "twodos/signal_table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace twodos {

SignalLevelTable::SignalLevelTable(
    const std::array<std::array<double, 2>, kNeighborCounts>& levels)
    : levels_(levels) {
  validate();
}

void SignalLevelTable::validate() const {
  for (int n = 0; n < kNeighborCounts; ++n) {
    if (levels_[n][0] <= levels_[n][1]) {
      throw std::invalid_argument(
          "signal level table: s_n0 must exceed s_n1 (a central pit lowers "
          "the intensity), violated at n=" +
          std::to_string(n));
    }
    if (n > 0 && (levels_[n][0] >= levels_[n - 1][0] ||
                  levels_[n][1] >= levels_[n - 1][1])) {
      throw std::invalid_argument(
          "signal level table: levels must decrease strictly with the "
          "neighbor count, violated at n=" +
          std::to_string(n));
    }
  }
}

const SignalLevelTable& SignalLevelTable::nominal() {
  static const SignalLevelTable table({{{0.95, 0.50},
                                        {0.80, 0.35},
                                        {0.70, 0.30},
                                        {0.55, 0.20},
                                        {0.45, 0.15},
                                        {0.35, 0.10},
                                        {0.25, 0.05}}});
  return table;
}

SignalLevelTable SignalLevelTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open signal table: " + path);

  std::array<std::array<double, 2>, kNeighborCounts> levels{};
  std::array<bool, kNeighborCounts> seen{};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = line.substr(0, line.find('#'));
    std::istringstream fields(stripped);
    int n = -1;
    double s0 = 0.0, s1 = 0.0;
    if (!(fields >> n)) continue;  // blank or comment-only line
    if (!(fields >> s0 >> s1)) {
      throw std::runtime_error("signal table " + path + ": line " +
                               std::to_string(lineno) +
                               ": expected \"n s_n0 s_n1\"");
    }
    if (n < 0 || n >= kNeighborCounts) {
      throw std::runtime_error("signal table " + path + ": line " +
                               std::to_string(lineno) +
                               ": neighbor count out of range");
    }
    if (seen[n]) {
      throw std::runtime_error("signal table " + path + ": line " +
                               std::to_string(lineno) + ": duplicate row n=" +
                               std::to_string(n));
    }
    seen[n] = true;
    levels[n][0] = s0;
    levels[n][1] = s1;
  }
  for (int n = 0; n < kNeighborCounts; ++n) {
    if (!seen[n]) {
      throw std::runtime_error("signal table " + path + ": missing row n=" +
                               std::to_string(n));
    }
  }
  return SignalLevelTable(levels);
}

void SignalLevelTable::to_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write signal table: " + path);
  for (int n = 0; n < kNeighborCounts; ++n) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%d %.17g %.17g\n", n, levels_[n][0],
                  levels_[n][1]);
    out << buf;
  }
}

double SignalLevelTable::energy_sum() const {
  static constexpr double kChoose6[kNeighborCounts] = {1, 6, 15, 20, 15, 6, 1};
  double sum = 0.0;
  for (int n = 0; n < kNeighborCounts; ++n) {
    sum += kChoose6[n] *
           (levels_[n][0] * levels_[n][0] + levels_[n][1] * levels_[n][1]);
  }
  return sum;
}

}  // namespace twodos
