#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace twodos {

// Parameters of a regular (dv, dc) code construction.
struct CodeParams {
  int dv = 3;
  int dc = 6;
  int n = 0;
  std::uint64_t seed = 1;

  void validate() const;
  int check_rows() const { return static_cast<int>(
      static_cast<long>(dv) * n / dc); }
  double design_rate() const { return 1.0 - static_cast<double>(dv) / dc; }
};

// Sparse binary parity-check matrix held as per-row sorted column lists
// plus the transposed view. Immutable after construction.
class ParityCheckMatrix {
 public:
  ParityCheckMatrix(int n, int m, std::vector<std::vector<int>> rows);

  int n() const { return n_; }
  int m() const { return m_; }

  const std::vector<int>& row(int i) const { return rows_[i]; }
  const std::vector<int>& col(int j) const { return cols_[j]; }
  const std::vector<std::vector<int>>& rows() const { return rows_; }
  const std::vector<std::vector<int>>& cols() const { return cols_; }

  long edge_count() const;

 private:
  int n_;
  int m_;
  std::vector<std::vector<int>> rows_;
  std::vector<std::vector<int>> cols_;
};

// Regular configuration-model construction: random socket matching with
// bounded swap repair of repeated edges and 4-cycles. Deterministic in the
// seed. Throws if the repair budget is exhausted.
ParityCheckMatrix generate_regular(const CodeParams& params);

// Row-wise GF(2) inner products of H with the word.
std::vector<std::uint8_t> syndrome(const ParityCheckMatrix& H,
                                   std::span<const std::uint8_t> word);

// Systematic encoder derived from H by GF(2) elimination. Rank deficiency
// is tolerated: k = n - rank(H) and the true rate is reported as k/n.
class Encoder {
 public:
  Encoder(int n, std::vector<int> parity_cols, std::vector<int> message_cols,
          std::vector<std::vector<std::uint64_t>> parity_masks);

  int n() const { return n_; }
  int k() const { return static_cast<int>(message_cols_.size()); }
  int rank() const { return static_cast<int>(parity_cols_.size()); }
  double true_rate() const { return static_cast<double>(k()) / n_; }

  // Positions holding message bits verbatim (systematic positions).
  const std::vector<int>& message_cols() const { return message_cols_; }
  const std::vector<int>& parity_cols() const { return parity_cols_; }

  std::vector<std::uint8_t> encode(
      std::span<const std::uint8_t> message) const;
  std::vector<std::uint8_t> extract_message(
      std::span<const std::uint8_t> codeword) const;

 private:
  int n_;
  std::vector<int> parity_cols_;
  std::vector<int> message_cols_;
  // One mask per parity position, over message-bit indices (k bits each).
  std::vector<std::vector<std::uint64_t>> parity_masks_;
};

Encoder make_encoder(const ParityCheckMatrix& H);

}  // namespace twodos
