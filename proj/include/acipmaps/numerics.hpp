#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace acipmaps::numerics {

using RealFn = std::function<double(double)>;

/// Raised when an iterative solver fails to reach its tolerance. Carries the
/// last bracket so callers can report where the search was stuck.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lo, double hi);
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

struct RootOptions {
  double residual_tol = 1e-12;
  int bisection_warmup = 2;
  int newton_max = 50;  // Newton steps before falling back to pure bisection
  int max_iter = 400;
};

/// Solves fn(x) = target on [lo, hi] for a strictly increasing fn with
/// derivative dfn. Endpoint targets return the endpoint exactly.
double solve_increasing(const RealFn& fn, const RealFn& dfn, double target,
                        double lo, double hi, const RootOptions& opts = {});

/// Same as above without a derivative (pure bisection to machine precision).
double bisect_increasing(const RealFn& fn, double target, double lo, double hi,
                         double residual_tol = 1e-12);

/// Globally adaptive Gauss-Kronrod (10/21) on [a, b].
double integrate(const RealFn& f, double a, double b, double rel_tol = 1e-13,
                 double* error = nullptr);

/// Adaptive quadrature on [a, b] with geometric grading toward both
/// endpoints, for integrands with weak endpoint singularities.
double integrate_graded(const RealFn& f, double a, double b, int levels = 48,
                        double rel_tol = 1e-13);

/// Fixed-step classical RK4 for the scalar problem y' = rhs(x, y).
/// Returns y at the n_steps + 1 equally spaced nodes from x0 to x1.
std::vector<double> rk4_fixed(const std::function<double(double, double)>& rhs,
                              double x0, double y0, double x1, int n_steps);

}  // namespace acipmaps::numerics
