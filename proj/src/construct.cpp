#include "acipmaps/construct.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "acipmaps/numerics.hpp"

namespace acipmaps {

namespace {

void require_certified(const ExpandingCircleMap& f, const char* who) {
  const MapCertificate c = certify_map(f);
  if (!c.full_branch) throw std::runtime_error(std::string(who) + ": full-branch check failed");
  if (!c.monotone) throw std::runtime_error(std::string(who) + ": branch not increasing");
  if (!c.expanding) throw std::runtime_error(std::string(who) + ": map not expanding");
  if (!c.inverse_consistent)
    throw std::runtime_error(std::string(who) + ": inverse branches inconsistent");
}

}  // namespace

ExpandingCircleMap build_frho(const DensityProfile& density) {
  if (!density.certification().passed())
    throw std::runtime_error("build_frho: density certification failed");
  auto rho = std::make_shared<const DensityProfile>(density);
  const auto g = [rho](double x) { return rho->cumulative(x); };
  const auto r = [rho](double x) { return (*rho)(std::clamp(x, 0.0, 1.0)); };
  // h = g - x/2 is strictly increasing since rho > 1/2.
  const auto h = [rho](double x) { return rho->cumulative(x) - 0.5 * x; };
  const auto dh = [rho](double x) { return (*rho)(x)-0.5; };

  ExpandingCircleMap::Branches b;
  b.a = 0.5;
  b.f1 = [g](double x) { return 2.0 * g(x); };
  b.df1 = [r](double x) { return 2.0 * r(x); };
  auto f2 = [g, h, dh](double x) {
    if (x <= 0.5) return 0.0;
    return numerics::solve_increasing(h, dh, g(x) - 0.5, 0.0, 1.0);
  };
  b.f2 = f2;
  b.df2 = [r, f2](double x) { return 2.0 * r(x) / (2.0 * r(f2(x)) - 1.0); };
  b.inv1 = [g, r](double y) { return numerics::solve_increasing(g, r, 0.5 * y, 0.0, 0.5); };
  b.inv2 = [g, r](double y) {
    return numerics::solve_increasing(g, r, g(y) - 0.5 * y + 0.5, 0.5, 1.0);
  };
  b.preimage_slope = [r](int i, double y, double x) {
    return i == 1 ? 2.0 * r(x) : 2.0 * r(x) / (2.0 * r(y) - 1.0);
  };
  MapProvenance p;
  p.path = "acip";
  if (rho->modulus) {
    p.omega = rho->modulus;
    p.modulus = rho->modulus->descriptor();
  }
  ExpandingCircleMap f(std::move(b), std::move(p));
  require_certified(f, "build_frho");
  return f;
}

OdeCrosscheck crosscheck_system_S(const ExpandingCircleMap& f_rho, const DensityProfile& rho,
                                  int n_steps) {
  auto r = [&rho](double x) { return rho(std::clamp(x, 0.0, 1.0)); };
  const auto ys = numerics::rk4_fixed(
      [&r](double x, double y) { return 2.0 * r(x) / (2.0 * r(y) - 1.0); }, 0.5, 0.0, 1.0,
      n_steps);
  OdeCrosscheck out;
  out.n_steps = n_steps;
  for (int j = 0; j <= n_steps; ++j) {
    const double x = 0.5 + 0.5 * j / n_steps;
    out.deviation = std::max(out.deviation, std::fabs(ys[static_cast<std::size_t>(j)] -
                                                      f_rho.branch(2, x)));
  }
  out.endpoint_residual = std::fabs(ys.back() - 1.0);
  return out;
}

OdeCrosscheck crosscheck_system_S(const DensityProfile& rho, int n_steps) {
  return crosscheck_system_S(build_frho(rho), rho, n_steps);
}

double check_extension_condition(double d0, double da) {
  if (!(d0 > 1.0) || !(da > 1.0))
    throw std::invalid_argument("check_extension_condition: slopes must exceed 1");
  return std::fabs(d0 - da / (da - 1.0));
}

ExpandingCircleMap lebesgue_extend(const FirstBranch& first, double a, MapProvenance provenance) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("lebesgue_extend: a must lie in (0, 1)");
  if (!first.f1 || !first.df1)
    throw std::invalid_argument("lebesgue_extend: branch and derivative required");
  if (std::fabs(first.f1(0.0)) > 1e-12 || std::fabs(first.f1(a) - 1.0) > 1e-12)
    throw std::invalid_argument("lebesgue_extend: f1 does not map [0, a] onto [0, 1]");
  constexpr int kProbe = 1 << 12;
  for (int j = 0; j <= kProbe; ++j) {
    if (!(first.df1(a * j / kProbe) > 1.0))
      throw std::invalid_argument("lebesgue_extend: f1 is not expanding");
  }

  const auto f1 = first.f1;
  const auto df1 = first.df1;
  std::function<double(double)> inv1 = first.inv1;
  if (!inv1)
    inv1 = [f1, df1, a](double y) { return numerics::solve_increasing(f1, df1, y, 0.0, a); };

  // f2(x) = f1(phi) where f1(phi) - phi = x - a; then f2 = x - a + phi.
  const auto q = [f1](double p) { return f1(p) - p; };
  const auto dq = [df1](double p) { return df1(p) - 1.0; };
  const auto phi = [q, dq, a](double x) {
    return numerics::solve_increasing(q, dq, x - a, 0.0, a);
  };

  ExpandingCircleMap::Branches b;
  b.a = a;
  b.f1 = f1;
  b.df1 = df1;
  b.inv1 = inv1;
  b.f2 = [phi, a](double x) { return (x - a) + phi(x); };
  b.df2 = [phi, df1](double x) {
    const double s = df1(phi(x));
    return s / (s - 1.0);
  };
  b.inv2 = [inv1, a](double y) { return y + (a - inv1(y)); };
  // x = inv2(y) gives back inv1(y) = y + a - x without another solve.
  b.preimage_slope = [df1, a](int i, double y, double x) {
    if (i == 1) return df1(x);
    const double s = df1(std::clamp(y + a - x, 0.0, a));
    return s / (s - 1.0);
  };
  if (provenance.path == "custom") provenance.path = "lebesgue";
  ExpandingCircleMap f(std::move(b), std::move(provenance));
  require_certified(f, "lebesgue_extend");
  return f;
}

OdeCrosscheck crosscheck_lebesgue_ode(const ExpandingCircleMap& f, int n_steps) {
  const double a = f.breakpoint();
  auto rhs = [&f](double, double y) {
    const double s = f.branch_deriv(1, f.inverse_branch(1, std::clamp(y, 0.0, 1.0)));
    return s / (s - 1.0);
  };
  const auto ys = numerics::rk4_fixed(rhs, a, 0.0, 1.0, n_steps);
  OdeCrosscheck out;
  out.n_steps = n_steps;
  for (int j = 0; j <= n_steps; ++j) {
    const double x = j == n_steps ? 1.0 : a + (1.0 - a) * j / n_steps;
    out.deviation =
        std::max(out.deviation, std::fabs(ys[static_cast<std::size_t>(j)] - f.branch(2, x)));
  }
  out.endpoint_residual = std::fabs(ys.back() - 1.0);
  return out;
}

Profile F_omega_slope_profile(const Modulus& omega_in, std::uint64_t seed) {
  if (!is_in_K(omega_in, 1024).passed())
    throw std::invalid_argument("build_F_omega_member: modulus not in K");
  auto omega = std::make_shared<const Modulus>(omega_in);
  const double c = construction_cutoff(*omega);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u1 = unit(rng);
  const double u2 = unit(rng);
  const double s1 = c + (0.5 - c) * (0.3 + 0.2 * u1);
  const double s2 = s1 + (0.5 - s1) * (0.3 + 0.4 * u2);

  using Kind = Profile::Piece::Kind;
  auto profile = [&](const BridgeStart& start, double level) {
    std::vector<Profile::Piece> pieces;
    pieces.push_back({Kind::modulus, 0.0, c, 2.0, 2.0, 0.0, nullptr});
    pieces.push_back({Kind::bridge, c, s1, 0.0, 0.0, 0.0,
                      std::make_shared<Bridge>(c, s1, start.value, start.slope, start.curvature,
                                               level)});
    pieces.push_back({Kind::constant, s1, s2, 0.0, 0.0, level, nullptr});
    pieces.push_back({Kind::bridge, s2, 0.5, 0.0, 0.0, 0.0,
                      std::make_shared<Bridge>(s2, 0.5, level, 0.0, 0.0, 2.0)});
    return Profile(std::move(pieces), omega);
  };
  auto solve = [&](const BridgeStart& start) {
    auto residual = [&](double level) { return profile(start, level).total() - 1.0; };
    if (residual(2.0) == 0.0) return 2.0;
    double lo = 1.0;
    double hi = 2.0;
    if (!(residual(lo) < 0.0 && residual(hi) > 0.0))
      throw std::runtime_error("build_F_omega_member: tail level outside (1, 2)");
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (residual(mid) < 0.0) lo = mid; else hi = mid;
    }
    return std::fabs(residual(lo)) <= std::fabs(residual(hi)) ? lo : hi;
  };

  const double secant = 2.0 * (*omega)(c) / c;
  const BridgeStart matched = matched_start(*omega, c, 2.0, 2.0);
  if (matched.smooth) {
    try {
      const double level = solve(matched);
      Profile p = profile(matched, level);
      if (p.min_value() > 1.2 && p.max_value() < 2.8 &&
          p.max_abs_slope() <= std::max(4.0 * secant, 16.0))
        return p;
    } catch (const std::runtime_error&) {
    }
  }
  const BridgeStart flat = flat_start(*omega, c, 2.0, 2.0);
  Profile p = profile(flat, solve(flat));
  if (!(p.min_value() > 1.0) || !(p.max_value() < 3.0))
    throw std::runtime_error("build_F_omega_member: slope leaves (1, 3)");
  return p;
}

ExpandingCircleMap build_F_omega_member(const Modulus& omega, std::uint64_t seed) {
  auto slope = std::make_shared<const Profile>(F_omega_slope_profile(omega, seed));
  FirstBranch first;
  first.f1 = [slope](double x) { return slope->integral(x); };
  first.df1 = [slope](double x) { return slope->value(x); };
  MapProvenance p;
  p.path = "lebesgue";
  p.modulus = omega.descriptor();
  p.seed = seed;
  p.omega = std::make_shared<const Modulus>(omega);
  p.cutoff = construction_cutoff(omega);
  p.f_omega_member = true;
  return lebesgue_extend(first, 0.5, std::move(p));
}

CdfIdentity pushforward_cdf_residual(const ExpandingCircleMap& f, const DensityProfile& rho,
                                     int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double a = f.breakpoint();
  const double ga = rho.cumulative(a);
  CdfIdentity out;
  for (int s = 0; s < samples; ++s) {
    const double y = unit(rng);
    const double phi2 = rho.cumulative(y) - 0.5 * y;
    out.first = std::max(out.first, std::fabs(rho.cumulative(f.inverse_branch(1, y)) - 0.5 * y));
    out.second =
        std::max(out.second, std::fabs(rho.cumulative(f.inverse_branch(2, y)) - ga - phi2));
  }
  return out;
}

double lebesgue_cdf_residual(const ExpandingCircleMap& f, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double a = f.breakpoint();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double y = unit(rng);
    worst = std::max(worst,
                     std::fabs(f.inverse_branch(1, y) + f.inverse_branch(2, y) - a - y));
  }
  return worst;
}

}  // namespace acipmaps
