#include "twodos/page_mapping.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace twodos {

PageMapping PageMapping::row_major(int n, int rows, int cols) {
  if (rows < 1 || cols < 1 || static_cast<long>(rows) * cols != n) {
    throw std::invalid_argument("PageMapping: rows*cols must equal n (got " +
                                std::to_string(rows) + "x" +
                                std::to_string(cols) + " for n=" +
                                std::to_string(n) + ")");
  }
  return PageMapping(PageDims{rows, cols});
}

std::pair<int, int> PageMapping::near_square_dims(int n) {
  if (n < 1) throw std::invalid_argument("near_square_dims: n must be >= 1");
  for (int r = static_cast<int>(std::sqrt(static_cast<double>(n))); r >= 1;
       --r) {
    if (n % r == 0) return {r, n / r};
  }
  return {1, n};
}

}  // namespace twodos
