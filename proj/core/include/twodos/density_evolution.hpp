#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "twodos/channel.hpp"
#include "twodos/llr_density.hpp"
#include "twodos/signal_table.hpp"

namespace twodos {

// Degrees of the regular code under evolution; dc == kUncoded means the
// channel is run without any code (the dv-edge terms are absent).
inline constexpr int kUncodedDc = 0;

struct CodeDegrees {
  int dv = 3;
  int dc = 6;
  bool uncoded() const { return dc == kUncodedDc; }
};

// Monte Carlo budget for the data-node step.
struct DeMcParams {
  int page_rows = 256;
  int page_cols = 256;
  long min_samples = 1'000'000;
  int max_pages = 64;
  int chunks = 32;   // fixed decomposition; results independent of threads
  int threads = 0;   // 0 = hardware
  std::uint64_t seed = 1;

  void validate() const;
};

struct DeParams {
  DensityGrid grid{30.0, 4096};
  double target_pe = 1e-6;
  int max_iters = 200;
  int stagnation_window = 10;
  double stagnation_rel_change = 1e-3;
  double stagnation_pe_floor = 1e-4;
  DeMcParams mc;

  void validate() const;
};

struct DeState {
  LlrDensity var_to_chk;
  LlrDensity chk_to_var;
  LlrDensity var_to_dat;
  LlrDensity dat_to_var;
  int iterations = 0;
  bool converged = false;
  bool stagnated = false;
  std::vector<double> pe_trajectory;  // pe_trajectory[0] = 0.5
};

// Density of the sum of independent draws, one per (density, multiplicity)
// entry, convolved on the common grid by FFT; out-of-range mass folds into
// the saturations.
LlrDensity de_variable_update(
    std::span<const std::pair<const LlrDensity*, int>> inputs);

// Density of the check combine of dc-1 i.i.d. draws, via a precomputed
// quantized two-input table folded with square-and-multiply.
LlrDensity de_check_update(const LlrDensity& input, int dc);

// Magnitude combine table entry lookup, exposed for property tests.
int check_combine_bin(const DensityGrid& grid, int mag_bin_a, int mag_bin_b);

// Monte Carlo data-node step: bits and readback are drawn for whole pages,
// incoming messages are drawn i.i.d. from the sign-corrected density, and
// the outgoing messages of the data kernel are histogrammed.
LlrDensity de_data_update_mc(const LlrDensity& var_to_dat, double sigma2,
                             const SignalLevelTable& table,
                             const DeMcParams& mc, std::uint64_t label);

// Same step on a fixed page/readback pair (test hook and building block).
LlrDensity de_data_update_on_page(const LlrDensity& var_to_dat,
                                  const BitPage& page,
                                  const ReadbackPage& readback, double sigma2,
                                  const SignalLevelTable& table,
                                  const DeMcParams& mc, std::uint64_t label,
                                  long* samples_out);

double error_probability(const LlrDensity& density);

// Full evolution at one noise level, in the decoder's schedule order,
// recording the error probability of the variable-to-check density each
// iteration.
DeState evolve(double sigma2, CodeDegrees code, const DeParams& params,
               const SignalLevelTable& table);

struct ThresholdProbe {
  double sigma2 = 0.0;
  bool converged = false;
  int iterations = 0;
  double final_pe = 0.0;
  std::vector<double> pe_trajectory;
};

struct ThresholdResult {
  CodeDegrees code;
  double sigma2_star = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::vector<ThresholdProbe> probes;
};

// Bisection for the largest noise variance whose evolution converges.
// Requires a valid bracket: evolve must converge at lo and fail at hi.
ThresholdResult find_threshold(CodeDegrees code, double sigma2_lo,
                               double sigma2_hi, double tolerance,
                               const DeParams& params,
                               const SignalLevelTable& table);

}  // namespace twodos
