#pragma once

#include <cstdint>
#include <vector>

namespace twodos {

// Dense GF(2) matrix with 64-bit word rows; just enough linear algebra for
// rank computation and systematic encoding.
class BitMatrix {
 public:
  BitMatrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool get(int r, int c) const {
    return (data_[row_offset(r) + (c >> 6)] >> (c & 63)) & 1u;
  }
  void set(int r, int c, bool v) {
    const std::size_t w = row_offset(r) + (c >> 6);
    const std::uint64_t mask = 1ULL << (c & 63);
    if (v)
      data_[w] |= mask;
    else
      data_[w] &= ~mask;
  }

  void xor_rows(int dst, int src);
  void swap_rows(int a, int b);

  // Transforms in place to reduced row echelon form; returns the pivot
  // columns in increasing order (their count is the rank).
  std::vector<int> reduced_row_echelon();

 private:
  int rows_;
  int cols_;
  int words_per_row_;
  std::vector<std::uint64_t> data_;

  std::size_t row_offset(int r) const {
    return static_cast<std::size_t>(r) * words_per_row_;
  }
};

}  // namespace twodos
