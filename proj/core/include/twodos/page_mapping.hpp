#pragma once

#include <utility>

#include "twodos/channel.hpp"

namespace twodos {

// Row-major bijection between codeword indices and page cells.
class PageMapping {
 public:
  static PageMapping row_major(int n, int rows, int cols);

  // Most-square factorization rows x cols = n with rows <= cols.
  static std::pair<int, int> near_square_dims(int n);

  int n() const { return dims_.rows * dims_.cols; }
  int rows() const { return dims_.rows; }
  int cols() const { return dims_.cols; }
  PageDims dims() const { return dims_; }

  Cell cell_of(int index) const {
    return {index / dims_.cols, index % dims_.cols};
  }
  int index_of(Cell c) const { return c.row * dims_.cols + c.col; }

 private:
  explicit PageMapping(PageDims dims) : dims_(dims) {}
  PageDims dims_;
};

}  // namespace twodos
