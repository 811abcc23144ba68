#include "twodos/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace twodos {

BitPage::BitPage(int rows, int cols) : dims_{rows, cols} {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("BitPage: dimensions must be positive");
  }
  bits_.assign(static_cast<std::size_t>(rows) * cols, 0);
}

BitPage BitPage::random(int rows, int cols, Rng& rng) {
  BitPage page(rows, cols);
  for (auto& b : page.bits_) b = static_cast<std::uint8_t>(rng.bit());
  return page;
}

NoiseModel::NoiseModel(double s2, std::uint64_t sd, bool quiet)
    : sigma2(s2), seed(sd), noiseless(quiet) {
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("NoiseModel: sigma2 must be positive");
  }
}

NoiseModel NoiseModel::exact() { return NoiseModel(1.0, 0, true); }

HexNeighborhood hex_neighbors(Cell pos, PageDims dims) {
  if (!dims.contains(pos)) {
    throw std::out_of_range("hex_neighbors: position (" +
                            std::to_string(pos.row) + "," +
                            std::to_string(pos.col) + ") outside page");
  }
  // Odd rows are shifted right, so the off-row neighbor columns depend on
  // row parity. Clockwise from west: W, NW, NE, E, SE, SW.
  const int i = pos.row;
  const int j = pos.col;
  const int up = (i % 2 == 0) ? j - 1 : j;
  const Cell candidates[6] = {
      {i, j - 1},     {i - 1, up},     {i - 1, up + 1},
      {i, j + 1},     {i + 1, up + 1}, {i + 1, up},
  };
  HexNeighborhood out;
  out.center = pos;
  for (const Cell& c : candidates) {
    if (dims.contains(c)) out.neighbors[out.count++] = c;
  }
  return out;
}

double noiseless_intensity(const BitPage& page, Cell pos,
                           const SignalLevelTable& table) {
  const HexNeighborhood hood = hex_neighbors(pos, page.dims());
  int ones = 0;
  for (const Cell& c : hood) ones += page.get(c);
  return table.level(ones, page.get(pos));
}

ReadbackPage readback(const BitPage& page, const SignalLevelTable& table,
                      const NoiseModel& noise) {
  ReadbackPage out(page.rows(), page.cols());
  Rng rng(noise.seed);
  const double sigma = noise.noiseless ? 0.0 : std::sqrt(noise.sigma2);
  for (int r = 0; r < page.rows(); ++r) {
    for (int c = 0; c < page.cols(); ++c) {
      double v = noiseless_intensity(page, {r, c}, table);
      if (sigma > 0.0) v += sigma * rng.gaussian();
      out.set(r, c, v);
    }
  }
  return out;
}

double snr_db(double sigma2, double rate, const SignalLevelTable& table) {
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("snr_db: sigma2 must be positive");
  }
  if (!(rate > 0.0) || rate > 1.0) {
    throw std::invalid_argument("snr_db: rate must lie in (0, 1]");
  }
  const double numerator = table.energy_sum();
  return 10.0 * std::log10(numerator / (128.0 * 2.0 * rate * sigma2));
}

double sigma2_from_snr_db(double snr, double rate,
                          const SignalLevelTable& table) {
  if (!(rate > 0.0) || rate > 1.0) {
    throw std::invalid_argument("sigma2_from_snr_db: rate must lie in (0, 1]");
  }
  const double numerator = table.energy_sum();
  return numerator / (128.0 * 2.0 * rate * std::pow(10.0, snr / 10.0));
}

}  // namespace twodos
