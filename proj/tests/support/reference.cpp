#include "support/reference.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace twodos::testing {

namespace {

struct Pair {
  double p0 = 0.5;
  double p1 = 0.5;
};

Pair normalized(double w0, double w1) {
  const double sum = w0 + w1;
  if (!(sum > 0.0)) return {0.5, 0.5};
  return {w0 / sum, w1 / sum};
}

Pair clamped(Pair p, double clamp) {
  const double floor = 1.0 / (1.0 + std::exp(clamp));
  if (p.p1 < floor) return {1.0 - floor, floor};
  if (p.p0 < floor) return {floor, 1.0 - floor};
  return p;
}

double llr_of(Pair p) { return std::log(p.p0) - std::log(p.p1); }

Pair pair_of_llr(double llr) {
  if (llr >= 0.0) {
    const double e = std::exp(-llr);
    return {1.0 / (1.0 + e), e / (1.0 + e)};
  }
  const double e = std::exp(llr);
  return {e / (1.0 + e), 1.0 / (1.0 + e)};
}

// Geometric relaxation, the probability-domain form of the LLR mix
// new = relax * computed + (1 - relax) * old.
Pair relaxed(Pair computed, Pair old, double relax) {
  const double w0 = std::pow(computed.p0, relax) * std::pow(old.p0, 1.0 - relax);
  const double w1 = std::pow(computed.p1, relax) * std::pow(old.p1, 1.0 - relax);
  return normalized(w0, w1);
}

double gauss(double x, double mean, double sigma2) {
  const double d = x - mean;
  return std::exp(-d * d / (2.0 * sigma2));
}

Pair enum_center_pair(double obs, std::span<const Pair> neighbors,
                      const SignalLevelTable& table, double sigma2) {
  const int d = static_cast<int>(neighbors.size());
  double w0 = 0.0, w1 = 0.0;
  for (int a = 0; a < (1 << d); ++a) {
    double w = 1.0;
    int ones = 0;
    for (int j = 0; j < d; ++j) {
      if (a >> j & 1) {
        w *= neighbors[j].p1;
        ++ones;
      } else {
        w *= neighbors[j].p0;
      }
    }
    w0 += w * gauss(obs, table.level(ones, 0), sigma2);
    w1 += w * gauss(obs, table.level(ones, 1), sigma2);
  }
  return normalized(w0, w1);
}

Pair enum_neighbor_pair(double obs, Pair center, std::span<const Pair> others,
                        const SignalLevelTable& table, double sigma2) {
  const int d = static_cast<int>(others.size());
  double w0 = 0.0, w1 = 0.0;
  for (int c = 0; c < 2; ++c) {
    const double wc = c ? center.p1 : center.p0;
    for (int a = 0; a < (1 << d); ++a) {
      double w = wc;
      int ones = 0;
      for (int j = 0; j < d; ++j) {
        if (a >> j & 1) {
          w *= others[j].p1;
          ++ones;
        } else {
          w *= others[j].p0;
        }
      }
      w0 += w * gauss(obs, table.level(ones, c), sigma2);
      w1 += w * gauss(obs, table.level(ones + 1, c), sigma2);
    }
  }
  return normalized(w0, w1);
}

}  // namespace

double enum_data_message_to_center(double observation,
                                   std::span<const double> neighbor_llrs,
                                   const SignalLevelTable& table,
                                   double sigma2, double clamp) {
  std::vector<Pair> nbr;
  nbr.reserve(neighbor_llrs.size());
  for (double l : neighbor_llrs) nbr.push_back(pair_of_llr(l));
  const Pair out = clamped(
      enum_center_pair(observation, nbr, table, sigma2), clamp);
  return llr_of(out);
}

double enum_data_message_to_neighbor(double observation, double center_llr,
                                     std::span<const double> other_llrs,
                                     const SignalLevelTable& table,
                                     double sigma2, double clamp) {
  std::vector<Pair> others;
  others.reserve(other_llrs.size());
  for (double l : other_llrs) others.push_back(pair_of_llr(l));
  const Pair out = clamped(
      enum_neighbor_pair(observation, pair_of_llr(center_llr), others, table,
                         sigma2),
      clamp);
  return llr_of(out);
}

RefDecodeResult ref_decode(const ReadbackPage& received, const FullGraph& g,
                           const DecoderParams& params, bool syndrome_stop) {
  params.validate();
  const SignalLevelTable& table = params.levels();
  const double clamp = params.llr_clamp;

  std::vector<Pair> var_to_chk(g.num_check_edges());
  std::vector<Pair> chk_to_var(g.num_check_edges());
  std::vector<Pair> var_to_dat(g.num_data_edges());
  std::vector<Pair> dat_to_var(g.num_data_edges());

  RefDecodeResult res;
  res.posterior_llr.resize(g.n);
  res.decisions.resize(g.n);

  for (int l = 1; l <= params.max_iters; ++l) {
    // Variable to check: Eq.-(4)-style products over all data inputs and
    // the other check inputs.
    for (int v = 0; v < g.n; ++v) {
      double base0 = 1.0, base1 = 1.0;
      for (int t = g.var_dat_offset[v]; t < g.var_dat_offset[v + 1]; ++t) {
        const Pair& p = dat_to_var[g.var_dat_edge[t]];
        base0 *= p.p0;
        base1 *= p.p1;
      }
      for (int t = g.var_chk_offset[v]; t < g.var_chk_offset[v + 1]; ++t) {
        const int e = g.var_chk_edge[t];
        double w0 = base0, w1 = base1;
        for (int u = g.var_chk_offset[v]; u < g.var_chk_offset[v + 1]; ++u) {
          if (u == t) continue;
          const Pair& p = chk_to_var[g.var_chk_edge[u]];
          w0 *= p.p0;
          w1 *= p.p1;
        }
        var_to_chk[e] = clamped(normalized(w0, w1), clamp);
      }
    }

    // Check to variable: literal even-parity enumeration.
    for (int i = 0; i < g.num_checks(); ++i) {
      const int lo = g.chk_offset[i];
      const int deg = g.chk_offset[i + 1] - lo;
      for (int t = 0; t < deg; ++t) {
        double w0 = 0.0, w1 = 0.0;
        const int others = deg - 1;
        for (int a = 0; a < (1 << others); ++a) {
          double w = 1.0;
          int parity = 0;
          int u = 0;
          for (int j = 0; j < deg; ++j) {
            if (j == t) continue;
            const Pair& p = var_to_chk[lo + j];
            if (a >> u & 1) {
              w *= p.p1;
              parity ^= 1;
            } else {
              w *= p.p0;
            }
            ++u;
          }
          // Even parity: P(c | x = b, others) = 1 iff b xor parity == 0.
          if (parity == 0) {
            w0 += w;
          } else {
            w1 += w;
          }
        }
        chk_to_var[lo + t] = clamped(normalized(w0, w1), clamp);
      }
    }

    // Variable to data: all check inputs, other data inputs.
    for (int v = 0; v < g.n; ++v) {
      double base0 = 1.0, base1 = 1.0;
      for (int t = g.var_chk_offset[v]; t < g.var_chk_offset[v + 1]; ++t) {
        const Pair& p = chk_to_var[g.var_chk_edge[t]];
        base0 *= p.p0;
        base1 *= p.p1;
      }
      for (int t = g.var_dat_offset[v]; t < g.var_dat_offset[v + 1]; ++t) {
        const int e = g.var_dat_edge[t];
        double w0 = base0, w1 = base1;
        for (int u = g.var_dat_offset[v]; u < g.var_dat_offset[v + 1]; ++u) {
          if (u == t) continue;
          const Pair& p = dat_to_var[g.var_dat_edge[u]];
          w0 *= p.p0;
          w1 *= p.p1;
        }
        var_to_dat[e] = clamped(normalized(w0, w1), clamp);
      }
    }

    // Data to variable: literal enumeration plus the same relaxation rule
    // as the production update.
    for (int d = 0; d < g.n; ++d) {
      const int base = g.dat_offset[d];
      const int nbrs = g.dat_offset[d + 1] - base - 1;
      const double obs = received.values[d];

      std::vector<Pair> nbr(var_to_dat.begin() + base + 1,
                            var_to_dat.begin() + base + 1 + nbrs);
      Pair center_out =
          clamped(enum_center_pair(obs, nbr, table, params.sigma2), clamp);
      dat_to_var[base] =
          relaxed(center_out, dat_to_var[base], params.data_damping);

      for (int k = 0; k < nbrs; ++k) {
        std::vector<Pair> others;
        others.reserve(nbrs - 1);
        for (int j = 0; j < nbrs; ++j) {
          if (j != k) others.push_back(nbr[j]);
        }
        Pair out = clamped(
            enum_neighbor_pair(obs, var_to_dat[base], others, table,
                               params.sigma2),
            clamp);
        dat_to_var[base + 1 + k] =
            relaxed(out, dat_to_var[base + 1 + k], params.data_damping);
      }
    }

    // Pseudo-posteriors and decisions.
    for (int v = 0; v < g.n; ++v) {
      double w0 = 1.0, w1 = 1.0;
      for (int t = g.var_dat_offset[v]; t < g.var_dat_offset[v + 1]; ++t) {
        const Pair& p = dat_to_var[g.var_dat_edge[t]];
        w0 *= p.p0;
        w1 *= p.p1;
      }
      for (int t = g.var_chk_offset[v]; t < g.var_chk_offset[v + 1]; ++t) {
        const Pair& p = chk_to_var[g.var_chk_edge[t]];
        w0 *= p.p0;
        w1 *= p.p1;
      }
      const Pair q = normalized(w0, w1);
      res.posterior_llr[v] = std::log(q.p0) - std::log(q.p1);
      res.decisions[v] = q.p1 > q.p0 ? 1 : 0;
    }
    res.iterations_used = l;

    int weight = 0;
    for (int i = 0; i < g.num_checks(); ++i) {
      std::uint8_t acc = 0;
      for (int e = g.chk_offset[i]; e < g.chk_offset[i + 1]; ++e) {
        acc ^= res.decisions[g.chk_var[e]];
      }
      weight += acc;
    }
    if (syndrome_stop && weight == 0) {
      res.converged = true;
      break;
    }
  }

  auto to_llrs = [](const std::vector<Pair>& pairs) {
    std::vector<double> out(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) out[i] = llr_of(pairs[i]);
    return out;
  };
  res.var_to_chk = to_llrs(var_to_chk);
  res.chk_to_var = to_llrs(chk_to_var);
  res.var_to_dat = to_llrs(var_to_dat);
  res.dat_to_var = to_llrs(dat_to_var);
  return res;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

bool four_cycle_free(const ParityCheckMatrix& H) {
  std::set<std::pair<int, int>> seen;
  for (int j = 0; j < H.n(); ++j) {
    const auto& rows = H.col(j);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t b = a + 1; b < rows.size(); ++b) {
        if (!seen.insert({rows[a], rows[b]}).second) return false;
      }
    }
  }
  return true;
}

}  // namespace twodos::testing
