#pragma once

// Test oracles: a probability-domain sum-product decoder with literal
// enumeration updates, kept independent of the LLR production path, plus
// small numeric helpers shared by the suites.

#include <cstdint>
#include <span>
#include <vector>

#include "twodos/channel.hpp"
#include "twodos/decoder.hpp"
#include "twodos/full_graph.hpp"

namespace twodos::testing {

// Literal data-factor updates: sum over all assignments of the non-target
// variables, products of their message probabilities, Gaussian likelihoods.
double enum_data_message_to_center(double observation,
                                   std::span<const double> neighbor_llrs,
                                   const SignalLevelTable& table,
                                   double sigma2, double clamp);
double enum_data_message_to_neighbor(double observation, double center_llr,
                                     std::span<const double> other_llrs,
                                     const SignalLevelTable& table,
                                     double sigma2, double clamp);

// Full probability-domain decoder run with the same schedule, clamp and
// relaxation semantics as the production decoder. Messages and posteriors
// are reported as LLRs for comparison.
struct RefDecodeResult {
  std::vector<std::uint8_t> decisions;
  bool converged = false;
  int iterations_used = 0;
  std::vector<double> posterior_llr;
  std::vector<double> var_to_chk;
  std::vector<double> chk_to_var;
  std::vector<double> var_to_dat;
  std::vector<double> dat_to_var;
};

RefDecodeResult ref_decode(const ReadbackPage& received, const FullGraph& g,
                           const DecoderParams& params, bool syndrome_stop);

double normal_cdf(double x);

// Row-pair overlap bound check: true when no two rows of H share more than
// one column (no 4-cycles).
bool four_cycle_free(const ParityCheckMatrix& H);

}  // namespace twodos::testing
