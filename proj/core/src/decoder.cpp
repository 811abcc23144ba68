#include "twodos/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twodos {

void DecoderParams::validate() const {
  if (max_iters < 1) {
    throw std::invalid_argument("DecoderParams: max_iters must be >= 1");
  }
  if (!(llr_clamp > 0.0)) {
    throw std::invalid_argument("DecoderParams: llr_clamp must be positive");
  }
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("DecoderParams: sigma2 must be positive");
  }
  if (!(data_damping > 0.0) || data_damping > 1.0) {
    throw std::invalid_argument(
        "DecoderParams: data_damping must lie in (0, 1]");
  }
}

const SignalLevelTable& DecoderParams::levels() const {
  return table ? *table : SignalLevelTable::nominal();
}

MessageState MessageState::zeros(const FullGraph& g) {
  MessageState s;
  s.var_to_chk.assign(g.num_check_edges(), 0.0);
  s.chk_to_var.assign(g.num_check_edges(), 0.0);
  s.var_to_dat.assign(g.num_data_edges(), 0.0);
  s.dat_to_var.assign(g.num_data_edges(), 0.0);
  s.iteration = 0;
  return s;
}

namespace {

double clamp_llr(double x, double clamp) {
  return std::clamp(x, -clamp, clamp);
}

// p(x = 1) from L = log mu(0)/mu(1), stable on both tails.
double prob_one(double llr) {
  if (llr >= 0.0) {
    const double e = std::exp(-llr);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(llr));
}

// Per-node likelihood terms: e[n][b] = -(r - s_nb)^2 / (2 sigma2) and the
// max-shifted weights g = exp(e - max). All messages leaving one data node
// share these.
struct DataKernel {
  double e[SignalLevelTable::kNeighborCounts][2];
  double g[SignalLevelTable::kNeighborCounts][2];

  void init(double observation, const SignalLevelTable& table, double sigma2) {
    const double inv = 1.0 / (2.0 * sigma2);
    double best = -HUGE_VAL;
    for (int n = 0; n < SignalLevelTable::kNeighborCounts; ++n) {
      for (int b = 0; b < 2; ++b) {
        const double d = observation - table.level(n, b);
        e[n][b] = -d * d * inv;
        best = std::max(best, e[n][b]);
      }
    }
    for (int n = 0; n < SignalLevelTable::kNeighborCounts; ++n) {
      for (int b = 0; b < 2; ++b) g[n][b] = std::exp(e[n][b] - best);
    }
  }
};

double log_sum_exp(const double* vals, int count) {
  double best = -HUGE_VAL;
  for (int i = 0; i < count; ++i) best = std::max(best, vals[i]);
  if (best == -HUGE_VAL) return -HUGE_VAL;
  double sum = 0.0;
  for (int i = 0; i < count; ++i) sum += std::exp(vals[i] - best);
  return best + std::log(sum);
}

// LLR from the two mixture weights; falls back to a log-domain evaluation of
// the same sums when both weights underflowed the max-shifted fast path.
double llr_from_mix(double mu0, double mu1, const double* log_terms0,
                    const double* log_terms1, int count, double clamp) {
  if (mu0 > 0.0 || mu1 > 0.0) {
    return clamp_llr(std::log(mu0) - std::log(mu1), clamp);
  }
  const double l0 = log_sum_exp(log_terms0, count);
  const double l1 = log_sum_exp(log_terms1, count);
  if (l0 == -HUGE_VAL && l1 == -HUGE_VAL) return 0.0;
  return clamp_llr(l0 - l1, clamp);
}

// Bernoulli count distribution: cnt[j] = P(j of the given bits are one).
void fold_counts(const double* p1, int count, double* cnt) {
  cnt[0] = 1.0;
  for (int j = 0; j < count; ++j) {
    cnt[j + 1] = 0.0;
    const double p = p1[j];
    for (int t = j + 1; t >= 1; --t) {
      cnt[t] = cnt[t] * (1.0 - p) + cnt[t - 1] * p;
    }
    cnt[0] *= (1.0 - p);
  }
}

double center_message(const DataKernel& k, const double* cnt, int nbrs,
                      double clamp) {
  double mu0 = 0.0, mu1 = 0.0;
  for (int n = 0; n <= nbrs; ++n) {
    mu0 += cnt[n] * k.g[n][0];
    mu1 += cnt[n] * k.g[n][1];
  }
  if (mu0 > 0.0 || mu1 > 0.0) {
    return clamp_llr(std::log(mu0) - std::log(mu1), clamp);
  }
  double t0[7], t1[7];
  for (int n = 0; n <= nbrs; ++n) {
    const double lw = cnt[n] > 0.0 ? std::log(cnt[n]) : -HUGE_VAL;
    t0[n] = lw + k.e[n][0];
    t1[n] = lw + k.e[n][1];
  }
  return llr_from_mix(0.0, 0.0, t0, t1, nbrs + 1, clamp);
}

double neighbor_message(const DataKernel& k, const double* cnt, int others,
                        double pc0, double pc1, double clamp) {
  // h[m] folds the center bit into the level weights.
  double mu0 = 0.0, mu1 = 0.0;
  for (int m = 0; m <= others; ++m) {
    const double h0 = pc0 * k.g[m][0] + pc1 * k.g[m][1];
    const double h1 = pc0 * k.g[m + 1][0] + pc1 * k.g[m + 1][1];
    mu0 += cnt[m] * h0;
    mu1 += cnt[m] * h1;
  }
  if (mu0 > 0.0 || mu1 > 0.0) {
    return clamp_llr(std::log(mu0) - std::log(mu1), clamp);
  }
  double t0[14], t1[14];
  int count = 0;
  const double lpc0 = pc0 > 0.0 ? std::log(pc0) : -HUGE_VAL;
  const double lpc1 = pc1 > 0.0 ? std::log(pc1) : -HUGE_VAL;
  for (int m = 0; m <= others; ++m) {
    const double lw = cnt[m] > 0.0 ? std::log(cnt[m]) : -HUGE_VAL;
    t0[count] = lw + lpc0 + k.e[m][0];
    t1[count] = lw + lpc0 + k.e[m + 1][0];
    ++count;
    t0[count] = lw + lpc1 + k.e[m][1];
    t1[count] = lw + lpc1 + k.e[m + 1][1];
    ++count;
  }
  return llr_from_mix(0.0, 0.0, t0, t1, count, clamp);
}

int syndrome_weight(const FullGraph& g,
                    const std::vector<std::uint8_t>& decisions) {
  int weight = 0;
  for (int i = 0; i < g.num_checks(); ++i) {
    std::uint8_t acc = 0;
    for (int e = g.chk_offset[i]; e < g.chk_offset[i + 1]; ++e) {
      acc ^= decisions[g.chk_var[e]];
    }
    weight += acc;
  }
  return weight;
}

}  // namespace

double boxplus(double a, double b) {
  const double sign = ((a < 0.0) != (b < 0.0)) ? -1.0 : 1.0;
  const double aa = std::fabs(a);
  const double ab = std::fabs(b);
  const double mag = std::min(aa, ab) + std::log1p(std::exp(-(aa + ab))) -
                     std::log1p(std::exp(-std::fabs(aa - ab)));
  return sign * mag;
}

void var_to_check_update(const FullGraph& g, MessageState& s, double clamp) {
  for (int v = 0; v < g.n; ++v) {
    double sum = 0.0;
    for (int t = g.var_dat_offset[v]; t < g.var_dat_offset[v + 1]; ++t) {
      sum += s.dat_to_var[g.var_dat_edge[t]];
    }
    for (int t = g.var_chk_offset[v]; t < g.var_chk_offset[v + 1]; ++t) {
      sum += s.chk_to_var[g.var_chk_edge[t]];
    }
    for (int t = g.var_chk_offset[v]; t < g.var_chk_offset[v + 1]; ++t) {
      const int e = g.var_chk_edge[t];
      s.var_to_chk[e] = clamp_llr(sum - s.chk_to_var[e], clamp);
    }
  }
}

void check_to_var_update(const FullGraph& g, MessageState& s, double clamp) {
  int max_deg = 2;
  for (int i = 0; i < g.num_checks(); ++i) {
    max_deg = std::max(max_deg, g.chk_offset[i + 1] - g.chk_offset[i]);
  }
  std::vector<double> fwd(max_deg), bwd(max_deg);
  for (int i = 0; i < g.num_checks(); ++i) {
    const int lo = g.chk_offset[i];
    const int deg = g.chk_offset[i + 1] - lo;
    if (deg == 1) {
      // A degree-one check pins its variable to zero.
      s.chk_to_var[lo] = clamp;
      continue;
    }
    fwd[0] = s.var_to_chk[lo];
    for (int j = 1; j < deg; ++j) {
      fwd[j] = boxplus(fwd[j - 1], s.var_to_chk[lo + j]);
    }
    bwd[deg - 1] = s.var_to_chk[lo + deg - 1];
    for (int j = deg - 2; j >= 0; --j) {
      bwd[j] = boxplus(bwd[j + 1], s.var_to_chk[lo + j]);
    }
    s.chk_to_var[lo] = clamp_llr(bwd[1], clamp);
    s.chk_to_var[lo + deg - 1] = clamp_llr(fwd[deg - 2], clamp);
    for (int j = 1; j < deg - 1; ++j) {
      s.chk_to_var[lo + j] = clamp_llr(boxplus(fwd[j - 1], bwd[j + 1]), clamp);
    }
  }
}

void var_to_data_update(const FullGraph& g, MessageState& s, double clamp) {
  for (int v = 0; v < g.n; ++v) {
    double sum = 0.0;
    for (int t = g.var_chk_offset[v]; t < g.var_chk_offset[v + 1]; ++t) {
      sum += s.chk_to_var[g.var_chk_edge[t]];
    }
    for (int t = g.var_dat_offset[v]; t < g.var_dat_offset[v + 1]; ++t) {
      sum += s.dat_to_var[g.var_dat_edge[t]];
    }
    for (int t = g.var_dat_offset[v]; t < g.var_dat_offset[v + 1]; ++t) {
      const int e = g.var_dat_edge[t];
      s.var_to_dat[e] = clamp_llr(sum - s.dat_to_var[e], clamp);
    }
  }
}

void data_to_var_update(const ReadbackPage& received, const FullGraph& g,
                        MessageState& s, const DecoderParams& params) {
  const SignalLevelTable& table = params.levels();
  const double clamp = params.llr_clamp;
  const double relax = params.data_damping;
  const double keep = 1.0 - relax;
  DataKernel kernel;
  double p1[6], cnt[7], cnt_loo[7];
  for (int d = 0; d < g.n; ++d) {
    const int base = g.dat_offset[d];
    const int nbrs = g.dat_offset[d + 1] - base - 1;
    kernel.init(received.values[d], table, params.sigma2);

    for (int j = 0; j < nbrs; ++j) {
      p1[j] = prob_one(s.var_to_dat[base + 1 + j]);
    }
    fold_counts(p1, nbrs, cnt);
    s.dat_to_var[base] = relax * center_message(kernel, cnt, nbrs, clamp) +
                         keep * s.dat_to_var[base];

    const double pc1 = prob_one(s.var_to_dat[base]);
    const double pc0 = 1.0 - pc1;
    for (int k = 0; k < nbrs; ++k) {
      // Leave-one-out count distribution, recomputed per neighbor.
      double others[5];
      int u = 0;
      for (int j = 0; j < nbrs; ++j) {
        if (j != k) others[u++] = p1[j];
      }
      fold_counts(others, nbrs - 1, cnt_loo);
      s.dat_to_var[base + 1 + k] =
          relax * neighbor_message(kernel, cnt_loo, nbrs - 1, pc0, pc1, clamp) +
          keep * s.dat_to_var[base + 1 + k];
    }
  }
}

void posterior_llrs(const FullGraph& g, const MessageState& s,
                    std::vector<double>& out) {
  out.resize(g.n);
  for (int v = 0; v < g.n; ++v) {
    double sum = 0.0;
    for (int t = g.var_dat_offset[v]; t < g.var_dat_offset[v + 1]; ++t) {
      sum += s.dat_to_var[g.var_dat_edge[t]];
    }
    for (int t = g.var_chk_offset[v]; t < g.var_chk_offset[v + 1]; ++t) {
      sum += s.chk_to_var[g.var_chk_edge[t]];
    }
    out[v] = sum;
  }
}

void hard_decisions(std::span<const double> llrs,
                    std::vector<std::uint8_t>& out) {
  out.resize(llrs.size());
  for (std::size_t i = 0; i < llrs.size(); ++i) {
    out[i] = llrs[i] < 0.0 ? 1 : 0;
  }
}

double data_message_to_center(double observation,
                              std::span<const double> neighbor_llrs,
                              const SignalLevelTable& table, double sigma2,
                              double clamp) {
  const int nbrs = static_cast<int>(neighbor_llrs.size());
  DataKernel kernel;
  kernel.init(observation, table, sigma2);
  double p1[6], cnt[7];
  for (int j = 0; j < nbrs; ++j) p1[j] = prob_one(neighbor_llrs[j]);
  fold_counts(p1, nbrs, cnt);
  return center_message(kernel, cnt, nbrs, clamp);
}

double data_message_to_neighbor(double observation, double center_llr,
                                std::span<const double> other_neighbor_llrs,
                                const SignalLevelTable& table, double sigma2,
                                double clamp) {
  const int others = static_cast<int>(other_neighbor_llrs.size());
  DataKernel kernel;
  kernel.init(observation, table, sigma2);
  double p1[5], cnt[6];
  for (int j = 0; j < others; ++j) p1[j] = prob_one(other_neighbor_llrs[j]);
  fold_counts(p1, others, cnt);
  const double pc1 = prob_one(center_llr);
  return neighbor_message(kernel, cnt, others, 1.0 - pc1, pc1, clamp);
}

namespace {

DecodeResult run_schedule(const ReadbackPage& received, const FullGraph& g,
                          const DecoderParams& params, bool syndrome_stop) {
  params.validate();
  if (received.rows != g.dims.rows || received.cols != g.dims.cols) {
    throw std::invalid_argument("decode: readback dimensions do not match");
  }
  MessageState s = MessageState::zeros(g);
  DecodeResult res;
  for (int l = 1; l <= params.max_iters; ++l) {
    s.iteration = l;
    var_to_check_update(g, s, params.llr_clamp);
    check_to_var_update(g, s, params.llr_clamp);
    var_to_data_update(g, s, params.llr_clamp);
    data_to_var_update(received, g, s, params);
    posterior_llrs(g, s, res.posterior_llr);
    hard_decisions(res.posterior_llr, res.decisions);
    res.iterations_used = l;
    const int weight = syndrome_weight(g, res.decisions);
    if (params.trace) {
      std::vector<long> hist(61, 0);
      for (double q : res.posterior_llr) {
        const long bin =
            std::clamp<long>(std::lround(q), -30, 30) + 30;
        ++hist[static_cast<std::size_t>(bin)];
      }
      res.trace.push_back({l, weight, res.decisions, std::move(hist)});
    }
    if (syndrome_stop && weight == 0) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace

DecodeResult decode(const ReadbackPage& received, const FullGraph& g,
                    const DecoderParams& params) {
  if (!g.has_checks()) {
    throw std::invalid_argument(
        "decode: graph has no check nodes; use detect_uncoded");
  }
  return run_schedule(received, g, params, /*syndrome_stop=*/true);
}

DecodeResult detect_uncoded(const ReadbackPage& received, const FullGraph& g,
                            const DecoderParams& params) {
  return run_schedule(received, g, params, /*syndrome_stop=*/false);
}

}  // namespace twodos
