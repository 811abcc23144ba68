#pragma once

#include <stdexcept>
#include <string>

#include "twodos/ldpc.hpp"

namespace twodos {

// Malformed alist input; the message carries the offending line number.
class AlistParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Standard alist interchange format: "n m", the maximum column and row
// degrees, the per-column and per-row degree lists, then one line of 1-based
// row indices per column and one line of 1-based column indices per row
// (zero-padded lines are accepted and written).
ParityCheckMatrix read_alist(const std::string& path);
void write_alist(const ParityCheckMatrix& H, const std::string& path);

}  // namespace twodos
