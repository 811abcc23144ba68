#include "twodos/llr_density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twodos {

LlrDensity::LlrDensity(DensityGrid grid) : grid_(grid) {
  if (grid_.bins < 2 || (grid_.bins & (grid_.bins - 1)) != 0) {
    throw std::invalid_argument("LlrDensity: bins must be a power of two");
  }
  if (!(grid_.l_max > 0.0)) {
    throw std::invalid_argument("LlrDensity: l_max must be positive");
  }
  mass_.assign(static_cast<std::size_t>(grid_.bins), 0.0);
}

LlrDensity LlrDensity::point_mass(DensityGrid grid, double value) {
  LlrDensity d(grid);
  d.add(value, 1.0);
  return d;
}

void LlrDensity::add(double value, double weight) {
  if (std::isnan(value)) {
    throw std::invalid_argument("LlrDensity::add: NaN sample");
  }
  if (value == HUGE_VAL) {
    pos_sat_ += weight;
    return;
  }
  if (value == -HUGE_VAL) {
    neg_sat_ += weight;
    return;
  }
  const double scaled = value / grid_.width();
  const long bin = std::lround(scaled) + grid_.center();
  if (bin < 0) {
    neg_sat_ += weight;
  } else if (bin >= grid_.bins) {
    pos_sat_ += weight;
  } else {
    mass_[static_cast<std::size_t>(bin)] += weight;
  }
}

double LlrDensity::total_mass() const {
  double sum = neg_sat_ + pos_sat_;
  for (double m : mass_) sum += m;
  return sum;
}

void LlrDensity::scale(double factor) {
  neg_sat_ *= factor;
  pos_sat_ *= factor;
  for (double& m : mass_) m *= factor;
}

void LlrDensity::normalize() {
  const double total = total_mass();
  if (!(total > 0.0)) {
    throw std::runtime_error("LlrDensity::normalize: empty density");
  }
  scale(1.0 / total);
}

double LlrDensity::error_probability() const {
  double below = neg_sat_;
  const int c = grid_.center();
  for (int i = 0; i < c; ++i) below += mass_[static_cast<std::size_t>(i)];
  below += 0.5 * mass_[static_cast<std::size_t>(c)];
  return below;
}

double LlrDensity::mean() const {
  double sum = grid_.l_max * (pos_sat_ - neg_sat_);
  for (int i = 0; i < grid_.bins; ++i) {
    sum += grid_.value_of(i) * mass_[static_cast<std::size_t>(i)];
  }
  return sum;
}

DensitySampler::DensitySampler(const LlrDensity& density)
    : grid_(density.grid()) {
  cdf_.reserve(density.mass().size() + 2);
  double acc = density.neg_sat();
  cdf_.push_back(acc);
  for (double m : density.mass()) {
    acc += m;
    cdf_.push_back(acc);
  }
  acc += density.pos_sat();
  cdf_.push_back(acc);
  if (!(acc > 0.0)) {
    throw std::invalid_argument("DensitySampler: empty density");
  }
}

double DensitySampler::draw(Rng& rng) const {
  const double u = rng.uniform01() * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const long idx = it == cdf_.end() ? static_cast<long>(cdf_.size()) - 1
                                    : it - cdf_.begin();
  if (idx == 0) return -grid_.l_max;
  if (idx >= static_cast<long>(cdf_.size()) - 1) return grid_.l_max;
  return grid_.value_of(static_cast<int>(idx - 1));
}

}  // namespace twodos
