#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "acipmaps/circlemap.hpp"
#include "acipmaps/density.hpp"

namespace acipmaps {

/// Values at x_j = j/n, j = 0..n, n a power of two; linear interpolation between nodes.
class GridFunction {
 public:
  explicit GridFunction(std::vector<double> values);
  static GridFunction sample(const std::function<double(double)>& fn, int n = 1 << 12);
  static GridFunction constant(double c, int n = 1 << 12);

  int n() const { return static_cast<int>(values_.size()) - 1; }
  double node(int j) const { return static_cast<double>(j) / n(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }
  /// Linear interpolation; x is clamped to [0, 1].
  double operator()(double x) const;
  /// Composite trapezoidal integral over [0, 1].
  double mass() const;
  double sup_distance(const GridFunction& other) const;
  double min() const;
  GridFunction scaled(double c) const;

 private:
  std::vector<double> values_;
};

/// (Ph)(x_j) = sum_i h(y_i) / f'(y_i) over the two preimages y_i = inv_i(x_j),
/// with h evaluated exactly at the preimages.
GridFunction transfer_apply(const ExpandingCircleMap& f, const std::function<double(double)>& h,
                            int n = 1 << 12);
/// Same, with h interpolated linearly at the preimages; result on h's grid.
GridFunction transfer_apply(const ExpandingCircleMap& f, const GridFunction& h);

/// sup_j |(P rho)(x_j) - rho(x_j)| on the n-grid.
double invariance_residual(const ExpandingCircleMap& f, const DensityProfile& rho,
                           int n = 1 << 12);
double invariance_residual(const ExpandingCircleMap& f, const std::function<double(double)>& h,
                           int n = 1 << 12);

struct FixedPointResult {
  GridFunction limit;
  std::vector<double> history;  // sup |P^{k+1} h0 - P^k h0| after renormalization
};

/// Iterates P with mass renormalization. Convergence is observed, not asserted.
FixedPointResult fixed_point_iterate(const ExpandingCircleMap& f, const GridFunction& h0,
                                     int n_iter);

struct BirkhoffOptions {
  /// Relative orbit perturbation x += jitter * xi * min(x, 1 - x), xi ~ U(-1, 1).
  /// Keeps floating-point orbits of maps like x -> 2x from collapsing onto 0;
  /// 0 and 1 remain fixed. Zero gives the plain floating-point orbit.
  double jitter = 1e-12;
  std::uint64_t seed = 1;
};

/// (1/n) sum_{i<n} observable(f^i x0).
double birkhoff_average(const ExpandingCircleMap& f, const std::function<double(double)>& observable,
                        double x0, int n, const BirkhoffOptions& opts = {});

}  // namespace acipmaps
