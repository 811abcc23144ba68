#include "twodos/density_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "twodos/decoder.hpp"
#include "twodos/fft.hpp"
#include "twodos/parallel.hpp"

namespace twodos {

void DeMcParams::validate() const {
  if (page_rows < 8 || page_cols < 8) {
    throw std::invalid_argument("DeMcParams: page must be at least 8x8");
  }
  if (min_samples < 10'000) {
    throw std::invalid_argument(
        "DeMcParams: fewer than 10000 samples cannot fill the histogram");
  }
  if (max_pages < 1 || chunks < 1) {
    throw std::invalid_argument("DeMcParams: bad page/chunk budget");
  }
}

void DeParams::validate() const {
  if (!(target_pe > 0.0) || target_pe >= 0.5) {
    throw std::invalid_argument("DeParams: target_pe must lie in (0, 0.5)");
  }
  if (max_iters < 1 || stagnation_window < 1) {
    throw std::invalid_argument("DeParams: bad iteration limits");
  }
  mc.validate();
}

// ---------------------------------------------------------------------------
// Variable-node evolution: FFT convolution with saturation bookkeeping.

LlrDensity de_variable_update(
    std::span<const std::pair<const LlrDensity*, int>> inputs) {
  if (inputs.empty()) {
    throw std::invalid_argument("de_variable_update: no inputs");
  }
  const DensityGrid grid = inputs.front().first->grid();
  int total_draws = 0;
  for (const auto& [density, mult] : inputs) {
    if (mult < 0) {
      throw std::invalid_argument("de_variable_update: negative multiplicity");
    }
    if (!(density->grid() == grid)) {
      throw std::invalid_argument("de_variable_update: grid mismatch");
    }
    total_draws += mult;
  }
  if (total_draws == 0) return LlrDensity::point_mass(grid, 0.0);
  if (total_draws == 1) {
    for (const auto& [density, mult] : inputs) {
      if (mult == 1) return *density;
    }
  }

  // Saturations: a sum is +inf iff it contains a +inf draw and no -inf draw
  // (a +inf and -inf together land, by convention, at zero).
  double prod_no_neg = 1.0, prod_no_pos = 1.0, prod_grid = 1.0;
  for (const auto& [density, mult] : inputs) {
    if (mult == 0) continue;
    double grid_sum = 0.0;
    for (double m : density->mass()) grid_sum += m;
    prod_no_neg *= std::pow(1.0 - density->neg_sat(), mult);
    prod_no_pos *= std::pow(1.0 - density->pos_sat(), mult);
    prod_grid *= std::pow(grid_sum, mult);
  }

  LlrDensity out(grid);
  const int bins = grid.bins;
  const int center = grid.center();
  double tail_neg = 0.0, tail_pos = 0.0, in_grid = 0.0;

  if (prod_grid > 0.0) {
    const std::size_t length =
        static_cast<std::size_t>(total_draws) * (bins - 1) + 1;
    const std::size_t fft_size = next_pow2(length);
    std::vector<std::complex<double>> spectrum(fft_size, {1.0, 0.0});
    std::vector<std::complex<double>> buf;
    for (const auto& [density, mult] : inputs) {
      if (mult == 0) continue;
      buf.assign(fft_size, {0.0, 0.0});
      for (int i = 0; i < bins; ++i) buf[i] = density->mass()[i];
      fft_inplace(buf, false);
      for (std::size_t t = 0; t < fft_size; ++t) {
        std::complex<double> p{1.0, 0.0};
        for (int r = 0; r < mult; ++r) p *= buf[t];
        spectrum[t] *= p;
      }
    }
    fft_inplace(spectrum, true);

    const long shift = static_cast<long>(total_draws - 1) * center;
    for (std::size_t k = 0; k < length; ++k) {
      double v = spectrum[k].real();
      if (v <= 0.0) continue;  // FFT noise
      const long j = static_cast<long>(k) - shift;
      if (j < 0) {
        tail_neg += v;
      } else if (j >= bins) {
        tail_pos += v;
      } else {
        out.mass()[static_cast<std::size_t>(j)] += v;
        in_grid += v;
      }
    }
    const double raw_total = tail_neg + tail_pos + in_grid;
    if (raw_total > 0.0) {
      const double factor = prod_grid / raw_total;
      for (double& m : out.mass()) m *= factor;
      tail_neg *= factor;
      tail_pos *= factor;
    }
  }

  out.neg_sat() = tail_neg + std::max(0.0, prod_no_pos - prod_grid);
  out.pos_sat() = tail_pos + std::max(0.0, prod_no_neg - prod_grid);
  const double both =
      std::max(0.0, 1.0 - prod_no_neg - prod_no_pos + prod_grid);
  out.mass()[static_cast<std::size_t>(center)] += both;
  out.normalize();
  return out;
}

// ---------------------------------------------------------------------------
// Check-node evolution via a quantized magnitude combine table.

namespace {

double boxplus_magnitude(double a, double b) {
  return std::min(a, b) + std::log1p(std::exp(-(a + b))) -
         std::log1p(std::exp(-std::fabs(a - b)));
}

class CheckCombineTable {
 public:
  explicit CheckCombineTable(DensityGrid grid)
      : half_(grid.bins / 2), table_(static_cast<std::size_t>(half_ + 1) *
                                     (half_ + 1)) {
    const double w = grid.width();
    for (int m1 = 0; m1 <= half_; ++m1) {
      for (int m2 = 0; m2 <= m1; ++m2) {
        const double r = boxplus_magnitude(m1 * w, m2 * w);
        int k = static_cast<int>(std::lround(r / w));
        k = std::min(k, m2);  // |combine| never exceeds the smaller magnitude
        at(m1, m2) = at(m2, m1) = static_cast<std::int16_t>(k);
      }
    }
  }

  int lookup(int m1, int m2) const {
    return table_[static_cast<std::size_t>(m1) * (half_ + 1) + m2];
  }

 private:
  std::int16_t& at(int m1, int m2) {
    return table_[static_cast<std::size_t>(m1) * (half_ + 1) + m2];
  }
  int half_;
  std::vector<std::int16_t> table_;
};

const CheckCombineTable& combine_table(const DensityGrid& grid) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, std::unique_ptr<CheckCombineTable>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{grid.l_max, grid.bins}];
  if (!slot) slot = std::make_unique<CheckCombineTable>(grid);
  return *slot;
}

struct SignedMagnitudes {
  std::vector<double> pos;  // pos[m] = mass at +m*width (zero bin in pos[0])
  std::vector<double> neg;  // neg[m] = mass at -m*width
  std::vector<int> support;

  explicit SignedMagnitudes(const LlrDensity& d) {
    const int half = d.grid().bins / 2;
    pos.assign(half + 1, 0.0);
    neg.assign(half + 1, 0.0);
    const int center = d.grid().center();
    pos[0] = d.mass()[center];
    for (int m = 1; m <= half; ++m) {
      if (center + m < d.grid().bins) pos[m] = d.mass()[center + m];
      neg[m] = d.mass()[center - m];
    }
    for (int m = 0; m <= half; ++m) {
      if (pos[m] != 0.0 || neg[m] != 0.0) support.push_back(m);
    }
  }
};

LlrDensity combine_once(const LlrDensity& a, const LlrDensity& b) {
  const DensityGrid grid = a.grid();
  const CheckCombineTable& table = combine_table(grid);
  const int half = grid.bins / 2;
  const int center = grid.center();

  const SignedMagnitudes ma(a), mb(b);
  std::vector<double> opos(half + 1, 0.0), oneg(half + 1, 0.0);
  LlrDensity out(grid);

  // Saturation rules: an infinite input passes the other message through
  // (sign composed), matching boxplus(+/-inf, x) = +/-x.
  out.pos_sat() += a.pos_sat() * b.pos_sat() + a.neg_sat() * b.neg_sat();
  out.neg_sat() += a.pos_sat() * b.neg_sat() + a.neg_sat() * b.pos_sat();
  for (int m = 0; m <= half; ++m) {
    opos[m] += a.pos_sat() * mb.pos[m] + a.neg_sat() * mb.neg[m];
    oneg[m] += a.pos_sat() * mb.neg[m] + a.neg_sat() * mb.pos[m];
    opos[m] += b.pos_sat() * ma.pos[m] + b.neg_sat() * ma.neg[m];
    oneg[m] += b.pos_sat() * ma.neg[m] + b.neg_sat() * ma.pos[m];
  }

  for (int m1 : ma.support) {
    const double ap = ma.pos[m1];
    const double an = ma.neg[m1];
    for (int m2 : mb.support) {
      const int k = table.lookup(m1, m2);
      const double bp = mb.pos[m2];
      const double bn = mb.neg[m2];
      opos[k] += ap * bp + an * bn;
      oneg[k] += ap * bn + an * bp;
    }
  }

  out.mass()[center] += opos[0] + oneg[0];
  for (int m = 1; m <= half; ++m) {
    if (center + m < grid.bins) {
      out.mass()[center + m] += opos[m];
    } else {
      out.pos_sat() += opos[m];
    }
    out.mass()[center - m] += oneg[m];
  }
  out.normalize();
  return out;
}

}  // namespace

int check_combine_bin(const DensityGrid& grid, int mag_bin_a, int mag_bin_b) {
  return combine_table(grid).lookup(mag_bin_a, mag_bin_b);
}

LlrDensity de_check_update(const LlrDensity& input, int dc) {
  if (dc < 2) throw std::invalid_argument("de_check_update: dc must be >= 2");
  int t = dc - 1;
  LlrDensity base = input;
  LlrDensity result(input.grid());
  bool have = false;
  for (;;) {
    if (t & 1) {
      result = have ? combine_once(result, base) : base;
      have = true;
    }
    t >>= 1;
    if (t == 0) break;
    base = combine_once(base, base);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Data-node evolution: Monte Carlo over whole pages.

LlrDensity de_data_update_on_page(const LlrDensity& var_to_dat,
                                  const BitPage& page,
                                  const ReadbackPage& rb, double sigma2,
                                  const SignalLevelTable& table,
                                  const DeMcParams& mc, std::uint64_t label,
                                  long* samples_out) {
  const DensityGrid grid = var_to_dat.grid();
  const double clamp = grid.l_max;
  const DensitySampler sampler(var_to_dat);
  const int rows = page.rows();
  const int cols = page.cols();
  const int chunks = std::min(mc.chunks, rows);

  std::vector<LlrDensity> partial(chunks, LlrDensity(grid));
  std::vector<long> counts(chunks, 0);

  parallel_for_chunks(chunks, mc.threads, [&](int chunk) {
    Rng rng(seed_mix({mc.seed, label, kSeedRoleDraws,
                      static_cast<std::uint64_t>(chunk)}));
    LlrDensity& hist = partial[chunk];
    long count = 0;
    const int r_lo = static_cast<int>(static_cast<long>(rows) * chunk / chunks);
    const int r_hi =
        static_cast<int>(static_cast<long>(rows) * (chunk + 1) / chunks);
    double incoming[6], others[5];
    for (int r = r_lo; r < r_hi; ++r) {
      for (int c = 0; c < cols; ++c) {
        const HexNeighborhood hood = hex_neighbors({r, c}, page.dims());
        const int nbrs = hood.count;
        const double obs = rb.get(r, c);
        const double center_sign = page.get(r, c) ? -1.0 : 1.0;

        for (int j = 0; j < nbrs; ++j) {
          const double sign = page.get(hood.neighbors[j]) ? -1.0 : 1.0;
          incoming[j] = sampler.draw(rng) * sign;
        }
        const double to_center = data_message_to_center(
            obs, std::span<const double>(incoming, nbrs), table, sigma2,
            clamp);
        hist.add(to_center * center_sign, 1.0);
        ++count;

        for (int k = 0; k < nbrs; ++k) {
          const double center_llr = sampler.draw(rng) * center_sign;
          int u = 0;
          for (int j = 0; j < nbrs; ++j) {
            if (j == k) continue;
            const double sign = page.get(hood.neighbors[j]) ? -1.0 : 1.0;
            others[u++] = sampler.draw(rng) * sign;
          }
          const double out = data_message_to_neighbor(
              obs, center_llr, std::span<const double>(others, u), table,
              sigma2, clamp);
          const double sign_k = page.get(hood.neighbors[k]) ? -1.0 : 1.0;
          hist.add(out * sign_k, 1.0);
          ++count;
        }
      }
    }
    counts[chunk] = count;
  });

  LlrDensity merged(grid);
  long total = 0;
  for (int chunk = 0; chunk < chunks; ++chunk) {
    const LlrDensity& h = partial[chunk];
    for (int i = 0; i < grid.bins; ++i) merged.mass()[i] += h.mass()[i];
    merged.neg_sat() += h.neg_sat();
    merged.pos_sat() += h.pos_sat();
    total += counts[chunk];
  }
  if (samples_out) *samples_out = total;
  return merged;
}

LlrDensity de_data_update_mc(const LlrDensity& var_to_dat, double sigma2,
                             const SignalLevelTable& table,
                             const DeMcParams& mc, std::uint64_t label) {
  mc.validate();
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("de_data_update_mc: sigma2 must be positive");
  }
  LlrDensity total(var_to_dat.grid());
  long samples = 0;
  for (int page_idx = 0; samples < mc.min_samples; ++page_idx) {
    if (page_idx >= mc.max_pages) {
      throw std::runtime_error(
          "de_data_update_mc: page budget exhausted before the histogram "
          "reached min_samples; increase max_pages or the page size");
    }
    const std::uint64_t page_label =
        seed_mix({label, static_cast<std::uint64_t>(page_idx)});
    Rng page_rng(seed_mix({mc.seed, page_label, kSeedRolePage}));
    const BitPage page =
        BitPage::random(mc.page_rows, mc.page_cols, page_rng);
    const ReadbackPage rb = readback(
        page, table,
        NoiseModel(sigma2, seed_mix({mc.seed, page_label, kSeedRoleNoise})));
    long page_samples = 0;
    const LlrDensity hist = de_data_update_on_page(
        var_to_dat, page, rb, sigma2, table, mc, page_label, &page_samples);
    for (int i = 0; i < total.grid().bins; ++i) {
      total.mass()[i] += hist.mass()[i];
    }
    total.neg_sat() += hist.neg_sat();
    total.pos_sat() += hist.pos_sat();
    samples += page_samples;
  }
  total.normalize();
  return total;
}

double error_probability(const LlrDensity& density) {
  return density.error_probability();
}

// ---------------------------------------------------------------------------
// Evolution schedule and threshold search.

DeState evolve(double sigma2, CodeDegrees code, const DeParams& params,
               const SignalLevelTable& table) {
  params.validate();
  if (!code.uncoded()) {
    if (code.dv < 2 || code.dc <= code.dv) {
      throw std::invalid_argument("evolve: bad code degrees");
    }
  }
  const DensityGrid grid = params.grid;

  DeState state{LlrDensity::point_mass(grid, 0.0),
                LlrDensity::point_mass(grid, 0.0),
                LlrDensity::point_mass(grid, 0.0),
                LlrDensity::point_mass(grid, 0.0)};
  state.pe_trajectory.push_back(0.5);  // uniform start

  for (int l = 1; l <= params.max_iters; ++l) {
    if (!code.uncoded()) {
      state.chk_to_var = de_check_update(state.var_to_chk, code.dc);
      const std::pair<const LlrDensity*, int> to_data[] = {
          {&state.chk_to_var, code.dv}, {&state.dat_to_var, 6}};
      state.var_to_dat = de_variable_update(to_data);
    } else {
      const std::pair<const LlrDensity*, int> to_data[] = {
          {&state.dat_to_var, 6}};
      state.var_to_dat = de_variable_update(to_data);
    }
    state.dat_to_var =
        de_data_update_mc(state.var_to_dat, sigma2, table, params.mc,
                          static_cast<std::uint64_t>(l));
    if (!code.uncoded()) {
      const std::pair<const LlrDensity*, int> to_check[] = {
          {&state.dat_to_var, 7}, {&state.chk_to_var, code.dv - 1}};
      state.var_to_chk = de_variable_update(to_check);
    } else {
      const std::pair<const LlrDensity*, int> to_check[] = {
          {&state.dat_to_var, 7}};
      state.var_to_chk = de_variable_update(to_check);
    }

    const double pe = state.var_to_chk.error_probability();
    state.pe_trajectory.push_back(pe);
    state.iterations = l;

    if (pe < params.target_pe) {
      state.converged = true;
      break;
    }
    const int w = params.stagnation_window;
    if (l >= w && pe > params.stagnation_pe_floor) {
      const double old =
          state.pe_trajectory[static_cast<std::size_t>(l - w)];
      if (old > 0.0 &&
          std::fabs(pe - old) / old < params.stagnation_rel_change) {
        state.stagnated = true;
        break;
      }
    }
  }
  return state;
}

namespace {

ThresholdProbe run_probe(double sigma2, CodeDegrees code,
                         const DeParams& params,
                         const SignalLevelTable& table) {
  const DeState state = evolve(sigma2, code, params, table);
  ThresholdProbe probe;
  probe.sigma2 = sigma2;
  probe.converged = state.converged;
  probe.iterations = state.iterations;
  probe.final_pe = state.pe_trajectory.back();
  probe.pe_trajectory = state.pe_trajectory;
  return probe;
}

}  // namespace

ThresholdResult find_threshold(CodeDegrees code, double sigma2_lo,
                               double sigma2_hi, double tolerance,
                               const DeParams& params,
                               const SignalLevelTable& table) {
  if (!(sigma2_lo > 0.0) || !(sigma2_hi > sigma2_lo)) {
    throw std::invalid_argument("find_threshold: bad bracket");
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("find_threshold: bad tolerance");
  }
  ThresholdResult result;
  result.code = code;

  ThresholdProbe lo_probe = run_probe(sigma2_lo, code, params, table);
  result.probes.push_back(lo_probe);
  if (!lo_probe.converged) {
    throw std::runtime_error(
        "find_threshold: evolution does not converge at the bracket's low "
        "end; widen the bracket downward");
  }
  ThresholdProbe hi_probe = run_probe(sigma2_hi, code, params, table);
  result.probes.push_back(hi_probe);
  if (hi_probe.converged) {
    throw std::runtime_error(
        "find_threshold: evolution still converges at the bracket's high "
        "end; widen the bracket upward");
  }

  double lo = sigma2_lo, hi = sigma2_hi;
  for (int step = 0; hi - lo > tolerance && step < 60; ++step) {
    const double mid = 0.5 * (lo + hi);
    const ThresholdProbe probe = run_probe(mid, code, params, table);
    result.probes.push_back(probe);
    if (probe.converged) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  result.bracket_lo = lo;
  result.bracket_hi = hi;
  result.sigma2_star = 0.5 * (lo + hi);
  return result;
}

}  // namespace twodos
