#pragma once

#include <vector>

#include "twodos/rng.hpp"

namespace twodos {

// Uniform quantization grid for LLR densities: bin i holds the value
// (i - bins/2) * width, so bin bins/2 is centered exactly at zero. Mass
// beyond the edges lives in explicit saturation masses at +/-infinity.
struct DensityGrid {
  double l_max = 30.0;
  int bins = 4096;

  double width() const { return 2.0 * l_max / bins; }
  int center() const { return bins / 2; }
  double value_of(int bin) const { return (bin - center()) * width(); }
  bool operator==(const DensityGrid&) const = default;
};

// Quantized probability density of sign-corrected LLR messages: positive
// mass is belief in the true bit. Total mass stays 1 up to rounding.
class LlrDensity {
 public:
  explicit LlrDensity(DensityGrid grid);
  static LlrDensity point_mass(DensityGrid grid, double value);

  const DensityGrid& grid() const { return grid_; }
  const std::vector<double>& mass() const { return mass_; }
  std::vector<double>& mass() { return mass_; }
  double neg_sat() const { return neg_sat_; }
  double pos_sat() const { return pos_sat_; }
  double& neg_sat() { return neg_sat_; }
  double& pos_sat() { return pos_sat_; }

  // Quantizes to the nearest bin; values beyond the grid edges and +/-inf
  // fall into the saturation masses.
  void add(double value, double weight);

  double total_mass() const;
  void scale(double factor);
  void normalize();

  // Mass strictly below zero plus half of the zero-centered bin.
  double error_probability() const;

  // Mean with the saturations counted at +/- l_max (diagnostics).
  double mean() const;

 private:
  DensityGrid grid_;
  std::vector<double> mass_;
  double neg_sat_ = 0.0;
  double pos_sat_ = 0.0;
};

// Inverse-CDF sampler; saturations are delivered as +/- l_max, matching the
// decoder's clamp.
class DensitySampler {
 public:
  explicit DensitySampler(const LlrDensity& density);
  double draw(Rng& rng) const;

 private:
  const DensityGrid grid_;
  std::vector<double> cdf_;  // bins entries, then neg/pos saturation order:
                             // [neg_sat, grid bins..., pos_sat]
};

}  // namespace twodos
