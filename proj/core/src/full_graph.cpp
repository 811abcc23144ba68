#include "twodos/full_graph.hpp"

#include <stdexcept>

namespace twodos {

namespace {

void build_data_side(FullGraph& g) {
  const int rows = g.dims.rows;
  const int cols = g.dims.cols;
  const int n = g.n;

  g.dat_offset.assign(n + 1, 0);
  std::vector<int> var_deg(n, 0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int d = r * cols + c;
      const HexNeighborhood hood = hex_neighbors({r, c}, g.dims);
      g.dat_offset[d + 1] = 1 + hood.count;
      ++var_deg[d];
      for (const Cell& nb : hood) ++var_deg[nb.row * cols + nb.col];
    }
  }
  for (int d = 0; d < n; ++d) g.dat_offset[d + 1] += g.dat_offset[d];

  g.dat_var.assign(g.dat_offset[n], 0);
  g.var_dat_offset.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) g.var_dat_offset[v + 1] = g.var_dat_offset[v] + var_deg[v];
  g.var_dat_edge.assign(g.dat_offset[n], 0);

  std::vector<int> fill(n, 0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int d = r * cols + c;
      int e = g.dat_offset[d];
      auto attach = [&](int v) {
        g.dat_var[e] = v;
        g.var_dat_edge[g.var_dat_offset[v] + fill[v]++] = e;
        ++e;
      };
      attach(d);  // center first
      const HexNeighborhood hood = hex_neighbors({r, c}, g.dims);
      for (const Cell& nb : hood) attach(nb.row * cols + nb.col);
    }
  }
}

}  // namespace

FullGraph build_graph(const ParityCheckMatrix& H, const PageMapping& mapping) {
  if (H.n() != mapping.n()) {
    throw std::invalid_argument(
        "build_graph: mapping dimensions inconsistent with H");
  }
  FullGraph g;
  g.n = H.n();
  g.dims = mapping.dims();
  build_data_side(g);

  const int m = H.m();
  g.chk_offset.assign(m + 1, 0);
  for (int i = 0; i < m; ++i) {
    g.chk_offset[i + 1] =
        g.chk_offset[i] + static_cast<int>(H.row(i).size());
  }
  g.chk_var.assign(g.chk_offset[m], 0);
  std::vector<int> var_deg(g.n, 0);
  for (int i = 0; i < m; ++i) {
    int e = g.chk_offset[i];
    for (int col : H.row(i)) {
      // Codeword index col sits at page cell mapping.cell_of(col); variable
      // node ids are row-major cell ids.
      const Cell cell = mapping.cell_of(col);
      const int v = cell.row * g.dims.cols + cell.col;
      g.chk_var[e++] = v;
      ++var_deg[v];
    }
  }
  g.var_chk_offset.assign(g.n + 1, 0);
  for (int v = 0; v < g.n; ++v) {
    g.var_chk_offset[v + 1] = g.var_chk_offset[v] + var_deg[v];
  }
  g.var_chk_edge.assign(g.chk_offset[m], 0);
  std::vector<int> fill(g.n, 0);
  for (int i = 0; i < m; ++i) {
    for (int e = g.chk_offset[i]; e < g.chk_offset[i + 1]; ++e) {
      const int v = g.chk_var[e];
      g.var_chk_edge[g.var_chk_offset[v] + fill[v]++] = e;
    }
  }
  return g;
}

FullGraph build_channel_graph(int rows, int cols) {
  FullGraph g;
  g.dims = PageDims{rows, cols};
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("build_channel_graph: bad dimensions");
  }
  g.n = rows * cols;
  build_data_side(g);
  g.chk_offset.assign(1, 0);
  g.var_chk_offset.assign(g.n + 1, 0);
  return g;
}

}  // namespace twodos
