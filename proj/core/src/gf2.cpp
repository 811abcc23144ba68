#include "twodos/gf2.hpp"

#include <algorithm>
#include <stdexcept>

namespace twodos {

BitMatrix::BitMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), words_per_row_((cols + 63) / 64) {
  if (rows < 0 || cols < 1) {
    throw std::invalid_argument("BitMatrix: bad dimensions");
  }
  data_.assign(static_cast<std::size_t>(rows_) * words_per_row_, 0);
}

void BitMatrix::xor_rows(int dst, int src) {
  const std::size_t d = row_offset(dst);
  const std::size_t s = row_offset(src);
  for (int w = 0; w < words_per_row_; ++w) data_[d + w] ^= data_[s + w];
}

void BitMatrix::swap_rows(int a, int b) {
  if (a == b) return;
  const std::size_t ra = row_offset(a);
  const std::size_t rb = row_offset(b);
  for (int w = 0; w < words_per_row_; ++w) {
    std::swap(data_[ra + w], data_[rb + w]);
  }
}

std::vector<int> BitMatrix::reduced_row_echelon() {
  std::vector<int> pivots;
  int next_row = 0;
  for (int col = 0; col < cols_ && next_row < rows_; ++col) {
    int pivot = -1;
    for (int r = next_row; r < rows_; ++r) {
      if (get(r, col)) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    swap_rows(pivot, next_row);
    for (int r = 0; r < rows_; ++r) {
      if (r != next_row && get(r, col)) xor_rows(r, next_row);
    }
    pivots.push_back(col);
    ++next_row;
  }
  return pivots;
}

}  // namespace twodos
