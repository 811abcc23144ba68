#include "twodos/ldpc.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "twodos/gf2.hpp"
#include "twodos/rng.hpp"

namespace twodos {

void CodeParams::validate() const {
  if (dv < 2) throw std::invalid_argument("CodeParams: dv must be >= 2");
  if (dc <= dv) throw std::invalid_argument("CodeParams: dc must exceed dv");
  if (n < dc) throw std::invalid_argument("CodeParams: n must be >= dc");
  if ((static_cast<long>(dv) * n) % dc != 0) {
    throw std::invalid_argument("CodeParams: dv*n must be divisible by dc");
  }
}

ParityCheckMatrix::ParityCheckMatrix(int n, int m,
                                     std::vector<std::vector<int>> rows)
    : n_(n), m_(m), rows_(std::move(rows)) {
  if (static_cast<int>(rows_.size()) != m_) {
    throw std::invalid_argument("ParityCheckMatrix: row count mismatch");
  }
  cols_.assign(n_, {});
  for (int i = 0; i < m_; ++i) {
    auto& row = rows_[i];
    std::sort(row.begin(), row.end());
    for (std::size_t t = 0; t < row.size(); ++t) {
      const int j = row[t];
      if (j < 0 || j >= n_) {
        throw std::invalid_argument("ParityCheckMatrix: column out of range");
      }
      if (t > 0 && row[t - 1] == j) {
        throw std::invalid_argument("ParityCheckMatrix: repeated column in row");
      }
      cols_[j].push_back(i);
    }
  }
}

long ParityCheckMatrix::edge_count() const {
  long e = 0;
  for (const auto& r : rows_) e += static_cast<long>(r.size());
  return e;
}

namespace {

// Edge e pairs check e/dc with variable edge_var[e]. Returns the list of
// edge slots that participate in a repeated edge or a 4-cycle.
std::vector<long> find_violations(const std::vector<int>& edge_var, int n,
                                  int m, int dc) {
  std::vector<long> bad;

  // Repeated variable within one check row.
  {
    std::vector<int> seen(n, -1);
    for (int row = 0; row < m; ++row) {
      for (int t = 0; t < dc; ++t) {
        const long e = static_cast<long>(row) * dc + t;
        const int v = edge_var[e];
        if (seen[v] == row) {
          bad.push_back(e);
        } else {
          seen[v] = row;
        }
      }
    }
  }

  // Two rows sharing >= 2 variables. Count row pairs through each column.
  std::vector<std::vector<int>> col_rows(n);
  for (long e = 0; e < static_cast<long>(edge_var.size()); ++e) {
    col_rows[edge_var[e]].push_back(static_cast<int>(e / dc));
  }
  std::map<std::pair<int, int>, int> pair_count;
  for (int v = 0; v < n; ++v) {
    auto& rows = col_rows[v];
    std::sort(rows.begin(), rows.end());
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = a + 1; b < rows.size(); ++b) {
        if (rows[a] == rows[b]) continue;  // double edge, handled above
        ++pair_count[{rows[a], rows[b]}];
      }
    }
  }
  for (const auto& [pair, count] : pair_count) {
    if (count < 2) continue;
    // Flag one edge of the offending overlap: the first shared variable's
    // edge in the first row of the pair.
    for (int t = 0; t < dc; ++t) {
      const long e = static_cast<long>(pair.first) * dc + t;
      const int v = edge_var[e];
      bool shared = false;
      for (int u = 0; u < dc; ++u) {
        if (edge_var[static_cast<long>(pair.second) * dc + u] == v) {
          shared = true;
          break;
        }
      }
      if (shared) {
        bad.push_back(e);
        break;
      }
    }
  }
  std::sort(bad.begin(), bad.end());
  bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
  return bad;
}

}  // namespace

ParityCheckMatrix generate_regular(const CodeParams& params) {
  params.validate();
  const int n = params.n;
  const int dv = params.dv;
  const int dc = params.dc;
  const int m = params.check_rows();
  const long edges = static_cast<long>(n) * dv;

  Rng rng(seed_mix({params.seed, kSeedRoleConstruction,
                    static_cast<std::uint64_t>(n),
                    static_cast<std::uint64_t>(dv),
                    static_cast<std::uint64_t>(dc)}));

  // Socket matching: variable socket e/dv belongs to variable e/dv.
  std::vector<int> edge_var(edges);
  for (long e = 0; e < edges; ++e) edge_var[e] = static_cast<int>(e / dv);
  for (long e = edges - 1; e > 0; --e) {
    const long j = static_cast<long>(rng.below(static_cast<std::uint64_t>(e + 1)));
    std::swap(edge_var[e], edge_var[j]);
  }

  // Swap repair: exchange a flagged edge's variable with a random edge.
  // Row and column degrees are invariant under the swap.
  constexpr int kMaxPasses = 400;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    const std::vector<long> bad = find_violations(edge_var, n, m, dc);
    if (bad.empty()) {
      std::vector<std::vector<int>> rows(m);
      for (int row = 0; row < m; ++row) {
        rows[row].assign(edge_var.begin() + static_cast<long>(row) * dc,
                         edge_var.begin() + static_cast<long>(row + 1) * dc);
      }
      return ParityCheckMatrix(n, m, std::move(rows));
    }
    for (long e : bad) {
      const long other = static_cast<long>(rng.below(static_cast<std::uint64_t>(edges)));
      std::swap(edge_var[e], edge_var[other]);
    }
  }
  throw std::runtime_error(
      "generate_regular: could not remove repeated edges and 4-cycles within "
      "the retry budget; try another seed or a larger n");
}

std::vector<std::uint8_t> syndrome(const ParityCheckMatrix& H,
                                   std::span<const std::uint8_t> word) {
  if (static_cast<int>(word.size()) != H.n()) {
    throw std::invalid_argument("syndrome: word length does not match n");
  }
  std::vector<std::uint8_t> s(static_cast<std::size_t>(H.m()), 0);
  for (int i = 0; i < H.m(); ++i) {
    std::uint8_t acc = 0;
    for (int j : H.row(i)) acc ^= word[j];
    s[i] = acc;
  }
  return s;
}

Encoder::Encoder(int n, std::vector<int> parity_cols,
                 std::vector<int> message_cols,
                 std::vector<std::vector<std::uint64_t>> parity_masks)
    : n_(n),
      parity_cols_(std::move(parity_cols)),
      message_cols_(std::move(message_cols)),
      parity_masks_(std::move(parity_masks)) {}

std::vector<std::uint8_t> Encoder::encode(
    std::span<const std::uint8_t> message) const {
  if (static_cast<int>(message.size()) != k()) {
    throw std::invalid_argument("Encoder: message length must equal k");
  }
  const int words = (k() + 63) / 64;
  std::vector<std::uint64_t> packed(words, 0);
  for (int j = 0; j < k(); ++j) {
    if (message[j]) packed[j >> 6] |= 1ULL << (j & 63);
  }
  std::vector<std::uint8_t> codeword(static_cast<std::size_t>(n_), 0);
  for (int j = 0; j < k(); ++j) codeword[message_cols_[j]] = message[j];
  for (std::size_t i = 0; i < parity_cols_.size(); ++i) {
    const auto& mask = parity_masks_[i];
    std::uint64_t acc = 0;
    for (int w = 0; w < words; ++w) acc ^= mask[w] & packed[w];
    codeword[parity_cols_[i]] =
        static_cast<std::uint8_t>(__builtin_parityll(acc));
  }
  return codeword;
}

std::vector<std::uint8_t> Encoder::extract_message(
    std::span<const std::uint8_t> codeword) const {
  if (static_cast<int>(codeword.size()) != n_) {
    throw std::invalid_argument("Encoder: codeword length must equal n");
  }
  std::vector<std::uint8_t> msg(static_cast<std::size_t>(k()), 0);
  for (int j = 0; j < k(); ++j) msg[j] = codeword[message_cols_[j]];
  return msg;
}

Encoder make_encoder(const ParityCheckMatrix& H) {
  const int n = H.n();
  const int m = H.m();
  BitMatrix mat(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j : H.row(i)) mat.set(i, j, true);
  }
  const std::vector<int> pivots = mat.reduced_row_echelon();

  std::vector<std::uint8_t> is_pivot(static_cast<std::size_t>(n), 0);
  for (int p : pivots) is_pivot[p] = 1;
  std::vector<int> message_cols;
  message_cols.reserve(n - pivots.size());
  for (int j = 0; j < n; ++j) {
    if (!is_pivot[j]) message_cols.push_back(j);
  }

  const int k = static_cast<int>(message_cols.size());
  const int words = (k + 63) / 64;
  std::vector<std::vector<std::uint64_t>> masks(
      pivots.size(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    for (int j = 0; j < k; ++j) {
      if (mat.get(static_cast<int>(i), message_cols[j])) {
        masks[i][j >> 6] |= 1ULL << (j & 63);
      }
    }
  }
  return Encoder(n, pivots, std::move(message_cols), std::move(masks));
}

}  // namespace twodos
