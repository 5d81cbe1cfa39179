#include "acipmaps/circlemap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "acipmaps/numerics.hpp"

namespace acipmaps {

namespace {

constexpr int kExtremaGrid = 1 << 12;

double circle_distance(double u, double v) {
  const double d = std::fabs(u - v);
  const double wrapped = std::fmod(d, 1.0);
  return std::min(wrapped, 1.0 - wrapped);
}

}  // namespace

ExpandingCircleMap::ExpandingCircleMap(Branches branches, MapProvenance provenance)
    : b_(std::move(branches)), prov_(std::move(provenance)) {
  if (!(b_.a > 0.0 && b_.a < 1.0))
    throw std::invalid_argument("ExpandingCircleMap: breakpoint must lie in (0, 1)");
  if (!b_.f1 || !b_.f2 || !b_.df1 || !b_.df2)
    throw std::invalid_argument("ExpandingCircleMap: branch and derivative evaluators required");
  lambda_ = 1e300;
  sigma_ = -1e300;
  for (int i = 1; i <= 2; ++i) {
    const double lo = i == 1 ? 0.0 : b_.a;
    const double hi = i == 1 ? b_.a : 1.0;
    for (int j = 0; j <= kExtremaGrid; ++j) {
      const double x = lo + (hi - lo) * j / kExtremaGrid;
      const double d = branch_deriv(i, x);
      lambda_ = std::min(lambda_, d);
      sigma_ = std::max(sigma_, d);
    }
  }
}

void ExpandingCircleMap::check_branch(int i) const {
  if (i != 1 && i != 2) throw std::invalid_argument("branch index must be 1 or 2");
}

double ExpandingCircleMap::eval(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("eval: x outside [0, 1]");
  return x < b_.a ? b_.f1(x) : b_.f2(x);
}

double ExpandingCircleMap::deriv(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("deriv: x outside [0, 1]");
  return x < b_.a ? b_.df1(x) : b_.df2(x);
}

double ExpandingCircleMap::branch(int i, double x) const {
  check_branch(i);
  return i == 1 ? b_.f1(x) : b_.f2(x);
}

double ExpandingCircleMap::branch_deriv(int i, double x) const {
  check_branch(i);
  return i == 1 ? b_.df1(x) : b_.df2(x);
}

double ExpandingCircleMap::inverse_branch(int i, double y) const {
  check_branch(i);
  if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error("inverse_branch: y outside [0, 1]");
  if (i == 1) {
    if (b_.inv1) return b_.inv1(y);
    return numerics::solve_increasing(b_.f1, b_.df1, y, 0.0, b_.a);
  }
  if (b_.inv2) return b_.inv2(y);
  return numerics::solve_increasing(b_.f2, b_.df2, y, b_.a, 1.0);
}

double ExpandingCircleMap::preimage_slope(int i, double y, double x) const {
  check_branch(i);
  if (b_.preimage_slope) return b_.preimage_slope(i, y, x);
  return branch_deriv(i, x);
}

ExpandingCircleMap doubling_map() {
  ExpandingCircleMap::Branches b;
  b.a = 0.5;
  b.f1 = [](double x) { return 2.0 * x; };
  b.f2 = [](double x) { return 2.0 * x - 1.0; };
  b.df1 = [](double) { return 2.0; };
  b.df2 = [](double) { return 2.0; };
  b.inv1 = [](double y) { return 0.5 * y; };
  b.inv2 = [](double y) { return 0.5 * y + 0.5; };
  MapProvenance p;
  p.path = "doubling";
  return ExpandingCircleMap(std::move(b), std::move(p));
}

ExpandingCircleMap linear_two_branch(double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("linear_two_branch: a must lie in (0, 1)");
  ExpandingCircleMap::Branches b;
  b.a = a;
  b.f1 = [a](double x) { return x / a; };
  b.f2 = [a](double x) { return (x - a) / (1.0 - a); };
  b.df1 = [a](double) { return 1.0 / a; };
  b.df2 = [a](double) { return 1.0 / (1.0 - a); };
  b.inv1 = [a](double y) { return a * y; };
  b.inv2 = [a](double y) { return y >= 1.0 ? 1.0 : a + (1.0 - a) * y; };
  MapProvenance p;
  p.path = "linear";
  return ExpandingCircleMap(std::move(b), std::move(p));
}

MapCertificate certify_map(const ExpandingCircleMap& f, int grid_log2, int inverse_samples,
                           std::uint64_t seed) {
  MapCertificate c;
  const double a = f.breakpoint();
  c.full_branch_residual = std::max({std::fabs(f.branch(1, 0.0)), std::fabs(f.branch(1, a) - 1.0),
                                     std::fabs(f.branch(2, a)), std::fabs(f.branch(2, 1.0) - 1.0)});
  const int n = 1 << grid_log2;
  double lam = 1e300;
  double sig = -1e300;
  for (int i = 1; i <= 2; ++i) {
    const double lo = i == 1 ? 0.0 : a;
    const double hi = i == 1 ? a : 1.0;
    double prev = -1e300;
    for (int j = 0; j <= n; ++j) {
      const double x = lo + (hi - lo) * j / n;
      const double v = f.branch(i, x);
      if (j > 0 && !(v > prev)) c.monotone = false;
      prev = v;
      const double d = f.branch_deriv(i, x);
      lam = std::min(lam, d);
      sig = std::max(sig, d);
    }
  }
  c.lambda = lam;
  c.sigma = sig;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double inv = 0.0;
  for (int s = 0; s < inverse_samples; ++s) {
    const double y = unit(rng);
    for (int i = 1; i <= 2; ++i) {
      try {
        inv = std::max(inv, std::fabs(f.branch(i, f.inverse_branch(i, y)) - y));
      } catch (const numerics::ConvergenceError&) {
        inv = std::numeric_limits<double>::infinity();  // y not reached by branch i
      }
    }
  }
  c.inverse_residual = inv;
  c.full_branch = c.full_branch_residual <= 1e-10;
  c.expanding = c.lambda > 1.0;
  c.inverse_consistent = c.inverse_residual <= 1e-10;
  return c;
}

DomainPartition injectivity_domains(const ExpandingCircleMap& f, int n, int cap) {
  if (n < 0) throw std::invalid_argument("injectivity_domains: level must be nonnegative");
  if (n > cap) throw std::invalid_argument("injectivity_domains: level exceeds cap");
  const double a = f.breakpoint();
  std::vector<double> cuts{0.0, 1.0};
  for (int level = 0; level < n; ++level) {
    const std::size_t m = cuts.size();
    std::vector<double> next(2 * m - 1);
    next[0] = 0.0;
    for (std::size_t j = 1; j + 1 < m; ++j) next[j] = f.inverse_branch(1, cuts[j]);
    next[m - 1] = a;
    for (std::size_t j = 1; j + 1 < m; ++j) next[m - 1 + j] = f.inverse_branch(2, cuts[j]);
    next[2 * m - 2] = 1.0;
    cuts = std::move(next);
  }
  DomainPartition p;
  p.level = n;
  p.cuts = std::move(cuts);
  return p;
}

GluingReport check_c1_circle(const ExpandingCircleMap& f, double tol) {
  GluingReport r;
  const double a = f.breakpoint();
  r.interior_residual = std::fabs(f.branch_deriv(1, a) - f.branch_deriv(2, a));
  r.endpoint_residual = std::fabs(f.branch_deriv(1, 0.0) - f.branch_deriv(2, 1.0));
  r.passed = r.interior_residual <= tol && r.endpoint_residual <= tol;
  return r;
}

std::vector<double> iterate(const ExpandingCircleMap& f, double x, int n) {
  if (n < 0) throw std::invalid_argument("iterate: negative count");
  std::vector<double> orbit;
  orbit.reserve(static_cast<std::size_t>(n) + 1);
  orbit.push_back(x);
  for (int k = 0; k < n; ++k) {
    x = f.eval(x);
    orbit.push_back(x);
  }
  return orbit;
}

ModulusEstimate branch_derivative_modulus(const ExpandingCircleMap& f, int i,
                                          const std::vector<double>& scales,
                                          int samples_per_scale) {
  const double lo = i == 1 ? 0.0 : f.breakpoint();
  const double hi = i == 1 ? f.breakpoint() : 1.0;
  return canonical_modulus_estimate([&f, i](double x) { return f.branch_deriv(i, x); }, scales,
                                    samples_per_scale, lo, hi);
}

ModulusEstimate derivative_modulus(const ExpandingCircleMap& f, const std::vector<double>& scales,
                                   int samples_per_scale) {
  ModulusEstimate left = branch_derivative_modulus(f, 1, scales, samples_per_scale);
  const ModulusEstimate right = branch_derivative_modulus(f, 2, scales, samples_per_scale);
  for (std::size_t k = 0; k < left.values.size(); ++k)
    left.values[k] = std::max(left.values[k], right.values[k]);
  return left;
}

C1ModDistance c1mod_distance(const ExpandingCircleMap& f, const ExpandingCircleMap& g,
                             const ModulusEstimate& omega_f, const ModulusEstimate& omega_g,
                             int grid) {
  if (omega_f.scales != omega_g.scales)
    throw std::invalid_argument("c1mod_distance: modulus estimates on different scales");
  if (grid < 1) throw std::invalid_argument("c1mod_distance: grid must be positive");
  C1ModDistance d;
  for (int j = 0; j < grid; ++j) {
    const double x = (j + 0.5) / grid;
    d.value_sup = std::max(d.value_sup, circle_distance(f.eval(x), g.eval(x)));
    d.slope_sup = std::max(d.slope_sup, std::fabs(f.deriv(x) - g.deriv(x)));
  }
  for (std::size_t k = 0; k < omega_f.values.size(); ++k)
    d.modulus_sup = std::max(d.modulus_sup, std::fabs(omega_f.values[k] - omega_g.values[k]));
  return d;
}

}  // namespace acipmaps
