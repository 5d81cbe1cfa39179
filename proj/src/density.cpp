#include "acipmaps/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "acipmaps/numerics.hpp"

namespace acipmaps {

namespace {

constexpr double kP1Tol = 1e-9;
constexpr double kP3Tol = 1e-12;

// Left half [0, 1/2] of a density: 1 + omega on [0, c], then a bridge down
// to `level` arriving flat at 1/2, where the mirrored half takes over.
struct HalfPlan {
  double c;
  BridgeStart start;
};

Profile half_profile(const HalfPlan& plan, double level,
                     const std::shared_ptr<const Modulus>& omega) {
  using Kind = Profile::Piece::Kind;
  const double c = plan.c;
  std::vector<Profile::Piece> pieces;
  pieces.push_back({Kind::modulus, 0.0, c, 1.0, 1.0, 0.0, nullptr});
  pieces.push_back({Kind::bridge, c, 0.5, 0.0, 0.0, 0.0,
                    std::make_shared<Bridge>(c, 0.5, plan.start.value, plan.start.slope,
                                             plan.start.curvature, level)});
  return Profile(std::move(pieces), omega);
}

// Bisection on the flat level so the half integrates to 1/2.
double solve_level(const HalfPlan& plan, const std::shared_ptr<const Modulus>& omega) {
  auto residual = [&](double level) { return half_profile(plan, level, omega).total() - 0.5; };
  if (residual(1.0) == 0.0) return 1.0;
  double lo = 0.5;
  double hi = 1.5;
  if (residual(lo) > 0.0 || residual(hi) < 0.0)
    throw std::runtime_error("build_density: compensating level outside (1/2, 3/2)");
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) < 0.0) lo = mid; else hi = mid;
  }
  return std::fabs(residual(lo)) <= std::fabs(residual(hi)) ? lo : hi;
}

}  // namespace

double construction_cutoff(const Modulus& omega) { return std::min(omega.t_omega(), 0.125); }

DensityProfile::DensityProfile(Fn rho, Fn cumulative, double t_omega, std::string source)
    : rho_(std::move(rho)), g_(std::move(cumulative)), t_omega_(t_omega),
      source_(std::move(source)) {
  if (!rho_) throw std::invalid_argument("DensityProfile: evaluator required");
  if (!g_) {
    auto f = rho_;
    g_ = [f](double x) { return numerics::integrate_graded(f, 0.0, x, 24); };
  }
  cert_ = certify(*this);
}

double DensityProfile::cumulative(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("cumulative: x outside [0, 1]");
  return g_(x);
}

double DensityProfile::inverse_cumulative(double y) const {
  if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error("inverse_cumulative: y outside [0, 1]");
  return numerics::solve_increasing(g_, rho_, y, 0.0, 1.0);
}

double cumulative_eval(const DensityProfile& rho, double x) { return rho.cumulative(x); }

DensityCertification certify(const DensityProfile& rho, int grid_log2) {
  DensityCertification cert;
  const auto& f = rho.evaluator();
  const int n = 1 << grid_log2;
  double lo = 1e300;
  double hi = -1e300;
  double prev_g = -1e300;
  for (int j = 0; j <= n; ++j) {
    const double x = static_cast<double>(j) / n;
    const double v = f(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    const double gx = rho.cumulative(x);
    if (j > 0 && !(gx > prev_g)) cert.cumulative_monotone = false;
    prev_g = gx;
  }
  cert.min_rho = lo;
  cert.spread = hi - lo;
  cert.p1_left_residual = std::fabs(numerics::integrate_graded(f, 0.0, 0.5) - 0.5);
  cert.p1_right_residual = std::fabs(numerics::integrate_graded(f, 0.5, 1.0) - 0.5);
  cert.p3_residual = std::max(std::fabs(f(0.0) - 1.0), std::fabs(f(1.0) - 1.0));

  double cum = std::max(std::fabs(rho.cumulative(0.0)), std::fabs(rho.cumulative(1.0) - 1.0));
  for (int k = 1; k < 16; ++k) {
    const double x = k / 16.0;
    cum = std::max(cum, std::fabs(rho.cumulative(x) - numerics::integrate_graded(f, 0.0, x)));
  }
  cert.cumulative_residual = cum;

  cert.positive = cert.min_rho > 0.5;
  cert.p1 = cert.p1_left_residual <= kP1Tol && cert.p1_right_residual <= kP1Tol;
  cert.p2 = cert.spread < 0.5;
  cert.p3 = cert.p3_residual <= kP3Tol;
  cert.cumulative_ok = cert.cumulative_monotone && cum <= kP1Tol;
  return cert;
}

DensityProfile build_density(const Modulus& omega_in) {
  if (!is_in_K(omega_in, 1024).passed())
    throw std::invalid_argument("build_density: modulus not in K");
  auto omega = std::make_shared<const Modulus>(omega_in);
  HalfPlan plan;
  plan.c = construction_cutoff(*omega);

  // Prefer a bridge matching omega's jet at c; keep it only if it leaves
  // headroom in the (P2) corridor and stays within a few secant slopes.
  const double secant = (*omega)(plan.c) / plan.c;
  double level = 1.0;
  bool accepted = false;
  for (const auto& start : {matched_start(*omega, plan.c, 1.0, 1.0),
                            flat_start(*omega, plan.c, 1.0, 1.0)}) {
    plan.start = start;
    if (start.smooth) {
      try {
        level = solve_level(plan, omega);
      } catch (const std::runtime_error&) {
        continue;
      }
    } else {
      level = solve_level(plan, omega);
    }
    if (!start.smooth) {
      accepted = true;
      break;
    }
    const Profile trial = half_profile(plan, level, omega);
    const double hi = std::max(trial.max_value(), 1.0);
    const double lo = std::min(trial.min_value(), 1.0);
    if (lo > 0.6 && hi - lo < 0.45 && trial.max_abs_slope() <= 4.0 * secant + 1e-12) {
      accepted = true;
      break;
    }
  }
  if (!accepted) throw std::runtime_error("build_density: no admissible bridge");

  auto half = std::make_shared<const Profile>(half_profile(plan, level, omega));
  const double hi = std::max(half->max_value(), 1.0);
  const double lo = std::min(half->min_value(), 1.0);
  if (!(lo > 0.5) || !(hi - lo < 0.5))
    throw std::runtime_error("build_density: compensator leaves the (P2) corridor");

  // The right half mirrors the left one: rho(x) = rho_left(1 - x).
  auto rho = [half](double x) { return x <= 0.5 ? half->value(x) : half->value(1.0 - x); };
  auto g = [half](double x) {
    return x <= 0.5 ? half->integral(x) : 1.0 - half->integral(1.0 - x);
  };
  DensityProfile profile(rho, g, omega->t_omega(), "build_density(" + omega->descriptor() + ")");
  profile.cert_.smooth_junctions = plan.start.smooth;
  profile.left_level = level;
  profile.right_level = level;
  profile.modulus = omega;
  return profile;
}

DensityProfile uniform_density() {
  return DensityProfile([](double) { return 1.0; }, [](double x) { return x; }, 1.0, "uniform");
}

}  // namespace acipmaps
