#include "acipmaps/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace acipmaps {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

template <class H>
GridFunction apply_on_grid(const ExpandingCircleMap& f, const H& h, int n) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const double x = static_cast<double>(j) / n;
    double sum = 0.0;
    for (int i = 1; i <= 2; ++i) {
      const double y = f.inverse_branch(i, x);
      sum += h(y) / f.branch_deriv(i, y);
    }
    out[static_cast<std::size_t>(j)] = sum;
  }
  return GridFunction(std::move(out));
}

}  // namespace

GridFunction::GridFunction(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2 || !power_of_two(static_cast<int>(values_.size()) - 1))
    throw std::invalid_argument("GridFunction: need 2^k + 1 values");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
}

GridFunction GridFunction::sample(const std::function<double(double)>& fn, int n) {
  if (!power_of_two(n)) throw std::invalid_argument("GridFunction: n must be a power of two");
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) v[static_cast<std::size_t>(j)] = fn(static_cast<double>(j) / n);
  return GridFunction(std::move(v));
}

GridFunction GridFunction::constant(double c, int n) {
  return sample([c](double) { return c; }, n);
}

double GridFunction::operator()(double x) const {
  const int m = n();
  const double s = std::clamp(x, 0.0, 1.0) * m;
  const int j = std::min(static_cast<int>(s), m - 1);
  const double w = s - j;
  return (1.0 - w) * values_[static_cast<std::size_t>(j)] +
         w * values_[static_cast<std::size_t>(j) + 1];
}

double GridFunction::mass() const {
  double s = 0.5 * (values_.front() + values_.back());
  for (std::size_t j = 1; j + 1 < values_.size(); ++j) s += values_[j];
  return s / n();
}

double GridFunction::sup_distance(const GridFunction& other) const {
  if (other.values_.size() != values_.size())
    throw std::invalid_argument("GridFunction: grid mismatch");
  double d = 0.0;
  for (std::size_t j = 0; j < values_.size(); ++j)
    d = std::max(d, std::fabs(values_[j] - other.values_[j]));
  return d;
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> v = values_;
  for (double& x : v) x *= c;
  return GridFunction(std::move(v));
}

GridFunction transfer_apply(const ExpandingCircleMap& f, const std::function<double(double)>& h,
                            int n) {
  if (!power_of_two(n)) throw std::invalid_argument("transfer_apply: n must be a power of two");
  return apply_on_grid(f, h, n);
}

GridFunction transfer_apply(const ExpandingCircleMap& f, const GridFunction& h) {
  return apply_on_grid(f, [&h](double y) { return h(y); }, h.n());
}

double invariance_residual(const ExpandingCircleMap& f, const std::function<double(double)>& h,
                           int n) {
  const GridFunction ph = transfer_apply(f, h, n);
  return ph.sup_distance(GridFunction::sample(h, n));
}

double invariance_residual(const ExpandingCircleMap& f, const DensityProfile& rho, int n) {
  return invariance_residual(f, [&rho](double x) { return rho(x); }, n);
}

FixedPointResult fixed_point_iterate(const ExpandingCircleMap& f, const GridFunction& h0,
                                     int n_iter) {
  if (h0.min() < 0.0) throw std::invalid_argument("fixed_point_iterate: h0 must be nonnegative");
  const double m0 = h0.mass();
  if (!(m0 > 0.0)) throw std::invalid_argument("fixed_point_iterate: h0 has no mass");
  GridFunction h = h0.scaled(1.0 / m0);
  FixedPointResult out{h, {}};
  out.history.reserve(static_cast<std::size_t>(std::max(n_iter, 0)));
  for (int k = 0; k < n_iter; ++k) {
    GridFunction next = transfer_apply(f, h);
    next = next.scaled(1.0 / next.mass());
    out.history.push_back(next.sup_distance(h));
    h = std::move(next);
  }
  out.limit = std::move(h);
  return out;
}

double birkhoff_average(const ExpandingCircleMap& f, const std::function<double(double)>& observable,
                        double x0, int n, const BirkhoffOptions& opts) {
  if (n < 1) throw std::invalid_argument("birkhoff_average: n must be positive");
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> xi(-1.0, 1.0);
  double x = x0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += observable(x);
    x = std::clamp(f.eval(x), 0.0, 1.0);
    if (opts.jitter > 0.0) x = std::clamp(x + opts.jitter * xi(rng) * std::min(x, 1.0 - x), 0.0, 1.0);
  }
  return sum / n;
}

}  // namespace acipmaps
