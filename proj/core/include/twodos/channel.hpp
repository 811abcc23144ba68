#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "twodos/rng.hpp"
#include "twodos/signal_table.hpp"

namespace twodos {

struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
};

struct PageDims {
  int rows = 0;
  int cols = 0;
  bool contains(Cell c) const {
    return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols;
  }
  long cells() const { return static_cast<long>(rows) * cols; }
};

// Binary page on the hexagonal lattice, stored row-major. Odd rows are
// understood as shifted half a cell to the right.
class BitPage {
 public:
  BitPage(int rows, int cols);
  static BitPage random(int rows, int cols, Rng& rng);

  int rows() const { return dims_.rows; }
  int cols() const { return dims_.cols; }
  PageDims dims() const { return dims_; }

  std::uint8_t get(int r, int c) const {
    return bits_[static_cast<std::size_t>(r) * dims_.cols + c];
  }
  std::uint8_t get(Cell p) const { return get(p.row, p.col); }
  void set(int r, int c, std::uint8_t v) {
    bits_[static_cast<std::size_t>(r) * dims_.cols + c] = v ? 1 : 0;
  }
  void set(Cell p, std::uint8_t v) { set(p.row, p.col, v); }

  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<std::uint8_t>& bits() { return bits_; }

 private:
  PageDims dims_;
  std::vector<std::uint8_t> bits_;
};

// Noisy readback intensities; dimensions match the page that produced them.
struct ReadbackPage {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  ReadbackPage(int r, int c)
      : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, 0.0) {}

  double get(int r, int c) const {
    return values[static_cast<std::size_t>(r) * cols + c];
  }
  void set(int r, int c, double v) {
    values[static_cast<std::size_t>(r) * cols + c] = v;
  }
};

// AWGN parameters. The noiseless flag bypasses noise injection entirely
// (the sigma2 -> 0 limit); sigma2 itself must stay positive because it is
// also the likelihood variance.
struct NoiseModel {
  double sigma2 = 0.0;
  std::uint64_t seed = 0;
  bool noiseless = false;

  NoiseModel(double s2, std::uint64_t sd, bool quiet = false);
  static NoiseModel exact();
};

// In-bounds hexagonal neighbors of a cell, in a fixed clockwise order
// starting from "west". Interior cells have exactly six.
struct HexNeighborhood {
  Cell center;
  std::array<Cell, 6> neighbors;
  int count = 0;

  const Cell* begin() const { return neighbors.data(); }
  const Cell* end() const { return neighbors.data() + count; }
};

HexNeighborhood hex_neighbors(Cell pos, PageDims dims);

// Noiseless readback intensity at pos: the table level selected by the
// central bit and the count of nonzero hexagonal neighbors. Out-of-bounds
// neighbors count as zero (guard-band convention).
double noiseless_intensity(const BitPage& page, Cell pos,
                           const SignalLevelTable& table);

ReadbackPage readback(const BitPage& page, const SignalLevelTable& table,
                      const NoiseModel& noise);

// SNR in dB: average signal energy over the noise power 2*R*sigma2, with the
// average taken over the 2^7 equiprobable neighborhood configurations.
double snr_db(double sigma2, double rate, const SignalLevelTable& table);
double sigma2_from_snr_db(double snr, double rate,
                          const SignalLevelTable& table);

}  // namespace twodos
