#pragma once

#include <vector>

#include "twodos/channel.hpp"
#include "twodos/ldpc.hpp"
#include "twodos/page_mapping.hpp"

namespace twodos {

// Joint code/channel factor graph: one variable node per page cell (equal to
// a codeword bit through the page mapping), one check node per parity-check
// row, and one measured-data node per cell. A data node connects its own
// cell's variable (slot 0) plus the in-bounds hexagonal neighbors, so data
// degree is at most 7; a variable correspondingly sits in at most 7 data
// neighborhoods.
//
// Check edges are indexed in CSR order by check row; data edges in CSR order
// by data node. Message arrays in the decoder are indexed by these edge ids.
struct FullGraph {
  int n = 0;
  PageDims dims;

  // Check side (empty in uncoded mode).
  std::vector<int> chk_offset;   // size m+1
  std::vector<int> chk_var;      // per check edge: variable index
  std::vector<int> var_chk_offset;  // size n+1
  std::vector<int> var_chk_edge;    // per variable: incident check edge ids

  // Data side. For data node d, slot chk dat_offset[d] is the center.
  std::vector<int> dat_offset;   // size n+1
  std::vector<int> dat_var;      // per data edge: variable index
  std::vector<int> var_dat_offset;  // size n+1
  std::vector<int> var_dat_edge;    // per variable: incident data edge ids

  int num_checks() const { return static_cast<int>(chk_offset.size()) - 1; }
  long num_check_edges() const { return static_cast<long>(chk_var.size()); }
  long num_data_edges() const { return static_cast<long>(dat_var.size()); }
  bool has_checks() const { return num_checks() > 0; }
};

// Joint graph for a code laid onto the page through the mapping.
FullGraph build_graph(const ParityCheckMatrix& H, const PageMapping& mapping);

// Channel-only graph (no check nodes) for uncoded detection.
FullGraph build_channel_graph(int rows, int cols);

}  // namespace twodos
