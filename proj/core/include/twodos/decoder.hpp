#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "twodos/full_graph.hpp"
#include "twodos/signal_table.hpp"

namespace twodos {

struct DecoderParams {
  int max_iters = 50;
  double llr_clamp = 30.0;
  double sigma2 = 0.0;                        // likelihood variance
  const SignalLevelTable* table = nullptr;    // defaults to nominal()
  // Relaxation factor on the data-to-variable update: the stored message is
  // data_damping * computed + (1 - data_damping) * previous. The channel
  // graph's short cycles make the undamped update oscillate at exactly the
  // noise levels of interest; 0.5 keeps it on the sum-product fixed point
  // and stable. 1.0 recovers the undamped update.
  double data_damping = 0.5;
  bool trace = false;

  void validate() const;
  const SignalLevelTable& levels() const;
};

// LLR convention throughout: L = log mu(0)/mu(1), positive favors bit 0.
struct MessageState {
  std::vector<double> var_to_chk;
  std::vector<double> chk_to_var;
  std::vector<double> var_to_dat;
  std::vector<double> dat_to_var;
  int iteration = 0;

  static MessageState zeros(const FullGraph& g);
};

struct IterationTrace {
  int iteration = 0;
  int syndrome_weight = 0;
  std::vector<std::uint8_t> decisions;
  // Posterior LLR histogram: 61 unit-width bins covering [-30, 30].
  std::vector<long> posterior_hist;
};

struct DecodeResult {
  std::vector<std::uint8_t> decisions;  // row-major page order
  bool converged = false;
  int iterations_used = 0;
  std::vector<double> posterior_llr;
  std::vector<IterationTrace> trace;
};

// One schedule phase each. Exposed so tests can drive phases directly.
void var_to_check_update(const FullGraph& g, MessageState& s, double clamp);
void check_to_var_update(const FullGraph& g, MessageState& s, double clamp);
void var_to_data_update(const FullGraph& g, MessageState& s, double clamp);
void data_to_var_update(const ReadbackPage& received, const FullGraph& g,
                        MessageState& s, const DecoderParams& params);

// Pseudo-posterior LLRs (all data and check inputs summed, nothing excluded).
void posterior_llrs(const FullGraph& g, const MessageState& s,
                    std::vector<double>& out);
// Hard decisions: 1 iff LLR < 0 (a tie decides 0).
void hard_decisions(std::span<const double> llrs,
                    std::vector<std::uint8_t>& out);

// Exact pairwise check combine: 2*atanh(tanh(a/2)*tanh(b/2)) in a form that
// is stable for large magnitudes.
double boxplus(double a, double b);

// Single data-node messages; the workhorse shared by the decoder and the
// density-evolution Monte Carlo step. Neighbor counts below six model page
// boundaries (absent neighbors are fixed zeros).
double data_message_to_center(double observation,
                              std::span<const double> neighbor_llrs,
                              const SignalLevelTable& table, double sigma2,
                              double clamp);
double data_message_to_neighbor(double observation, double center_llr,
                                std::span<const double> other_neighbor_llrs,
                                const SignalLevelTable& table, double sigma2,
                                double clamp);

// Full-graph sum-product decoding: the four-phase schedule with a syndrome
// stop after every iteration. Non-convergence is reported, not thrown.
DecodeResult decode(const ReadbackPage& received, const FullGraph& g,
                    const DecoderParams& params);

// Channel-only detection on a graph without checks: runs exactly max_iters
// iterations and returns the per-cell decisions.
DecodeResult detect_uncoded(const ReadbackPage& received, const FullGraph& g,
                            const DecoderParams& params);

}  // namespace twodos
