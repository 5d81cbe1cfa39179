#include "acipmaps/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace acipmaps::numerics {

namespace {

std::string bracket_message(const std::string& what, double lo, double hi) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (bracket [" << lo << ", " << hi << "])";
  return os.str();
}

bool collapsed(double lo, double hi) {
  return !(std::nextafter(lo, hi) < hi) ||
         hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() *
                        std::max(std::fabs(lo), std::fabs(hi));
}

}  // namespace

ConvergenceError::ConvergenceError(const std::string& what, double lo, double hi)
    : std::runtime_error(bracket_message(what, lo, hi)), lo_(lo), hi_(hi) {}

double solve_increasing(const RealFn& fn, const RealFn& dfn, double target,
                        double lo, double hi, const RootOptions& opts) {
  if (!(lo <= hi)) throw std::invalid_argument("solve_increasing: empty bracket");
  const double f_lo = fn(lo) - target;
  if (f_lo >= 0.0) {
    if (f_lo > opts.residual_tol)
      throw ConvergenceError("solve_increasing: target below range", lo, hi);
    return lo;
  }
  const double f_hi = fn(hi) - target;
  if (f_hi <= 0.0) {
    if (-f_hi > opts.residual_tol)
      throw ConvergenceError("solve_increasing: target above range", lo, hi);
    return hi;
  }

  double best_x = lo;
  double best_r = -f_lo;
  auto track = [&](double x, double r) {
    if (std::fabs(r) < best_r) {
      best_r = std::fabs(r);
      best_x = x;
    }
  };
  track(hi, f_hi);

  double x = lo + (hi - lo) * (-f_lo / (f_hi - f_lo));
  bool use_newton = false;
  int newton_steps = 0;
  for (int it = 0; it < opts.max_iter; ++it) {
    if (it == opts.bisection_warmup) use_newton = true;
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double r = fn(x) - target;
    track(x, r);
    if (r == 0.0) return x;
    if (r < 0.0) lo = x; else hi = x;
    if (collapsed(lo, hi)) break;

    if (!use_newton) {
      x = 0.5 * (lo + hi);
      continue;
    }
    const double slope = dfn(x);
    double next = x - r / slope;
    ++newton_steps;
    if (newton_steps > opts.newton_max || !std::isfinite(next) || next <= lo ||
        next >= hi) {
      next = 0.5 * (lo + hi);
    } else if (std::fabs(next - x) <=
               std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(x))) {
      const double rn = fn(next) - target;
      track(next, rn);
      break;
    }
    x = next;
  }
  if (best_r > opts.residual_tol)
    throw ConvergenceError("solve_increasing: residual above tolerance", lo, hi);
  return best_x;
}

double bisect_increasing(const RealFn& fn, double target, double lo, double hi,
                         double residual_tol) {
  RootOptions opts;
  opts.residual_tol = residual_tol;
  opts.bisection_warmup = opts.max_iter;
  return solve_increasing(fn, [](double) { return 1.0; }, target, lo, hi, opts);
}

double integrate(const RealFn& f, double a, double b, double rel_tol, double* error) {
  if (a == b) {
    if (error) *error = 0.0;
    return 0.0;
  }
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  struct Cell {
    double a, b, value, err;
    bool operator<(const Cell& o) const { return err < o.err; }
  };
  auto rule = [&f](double lo, double hi) {
    double err = 0.0, l1 = 0.0;
    const double v = GK::integrate(f, lo, hi, 0, 0.0, &err, &l1);
    // Boost reports the non-adaptive error on [-1, 1]; rescale to the cell.
    return Cell{lo, hi, v, 0.5 * (hi - lo) * err};
  };
  // Global adaptivity: always split the worst cell, stop once the summed
  // error is below tolerance or cells reach round-off width.
  std::priority_queue<Cell> heap;
  heap.push(rule(a, b));
  double total = heap.top().value;
  double total_err = heap.top().err;
  constexpr int kMaxCells = 4000;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int n = 1; n < kMaxCells; ++n) {
    if (total_err <= std::max(rel_tol * std::fabs(total), 1e-300)) break;
    Cell worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        worst.b - worst.a < 16.0 * eps * std::max(std::fabs(worst.a), std::fabs(worst.b)))
      break;
    heap.pop();
    const Cell left = rule(worst.a, mid);
    const Cell right = rule(mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running total.
  double sum = 0.0, err_sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err_sum += heap.top().err;
    heap.pop();
  }
  if (error) *error = err_sum;
  return sum;
}

double integrate_graded(const RealFn& f, double a, double b, int levels, double rel_tol) {
  if (a == b) return 0.0;
  const double half = 0.5 * (b - a);
  double total = 0.0;
  // [a, mid] graded toward a, [mid, b] graded toward b.
  double outer = half;
  for (int k = 0; k < levels; ++k) {
    const double inner = 0.5 * outer;
    total += integrate(f, a + inner, a + outer, rel_tol);
    total += integrate(f, b - outer, b - inner, rel_tol);
    outer = inner;
  }
  total += integrate(f, a, a + outer, rel_tol);
  total += integrate(f, b - outer, b, rel_tol);
  return total;
}

std::vector<double> rk4_fixed(const std::function<double(double, double)>& rhs,
                              double x0, double y0, double x1, int n_steps) {
  if (n_steps <= 0) throw std::invalid_argument("rk4_fixed: n_steps must be positive");
  const double h = (x1 - x0) / n_steps;
  if (!(std::fabs(h) > 0.0) ||
      std::fabs(h) < 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(x0)))
    throw std::underflow_error("rk4_fixed: step size underflow");
  std::vector<double> ys(static_cast<std::size_t>(n_steps) + 1);
  ys[0] = y0;
  double y = y0;
  for (int i = 0; i < n_steps; ++i) {
    const double x = x0 + i * h;
    const double k1 = rhs(x, y);
    const double k2 = rhs(x + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = rhs(x + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = rhs(x + h, y + h * k3);
    y += h * (k1 + 2.0 * (k2 + k3) + k4) / 6.0;
    ys[static_cast<std::size_t>(i) + 1] = y;
  }
  return ys;
}

}  // namespace acipmaps::numerics
