#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "acipmaps/circlemap.hpp"
#include "acipmaps/density.hpp"
#include "acipmaps/modulus.hpp"
#include "acipmaps/profile.hpp"

namespace acipmaps {

/// Map preserving rho * Lebesgue: f1 = 2g on [0, 1/2] and
/// f2 = (g - x/2)^{-1}(g(x) - 1/2) on [1/2, 1]. The density must be certified.
/// Throws std::runtime_error when the resulting map fails certify_map.
ExpandingCircleMap build_frho(const DensityProfile& rho);

struct OdeCrosscheck {
  double deviation = 0.0;          // sup over RK4 nodes of |y_j - f2(x_j)|
  double endpoint_residual = 0.0;  // |y(1) - 1|
  int n_steps = 0;
};

/// Integrates f2' = 2 rho(x) / (2 rho(f2) - 1), f2(1/2) = 0 with fixed-step RK4
/// and compares against the second branch of f_rho.
OdeCrosscheck crosscheck_system_S(const ExpandingCircleMap& f_rho, const DensityProfile& rho,
                                  int n_steps);
OdeCrosscheck crosscheck_system_S(const DensityProfile& rho, int n_steps);

/// |d0 - da / (da - 1)|: how far f1 is from extending to a C^1 circle map.
double check_extension_condition(double f1_deriv_0, double f1_deriv_a);

struct FirstBranch {
  std::function<double(double)> f1;
  std::function<double(double)> df1;
  std::function<double(double)> inv1;  // optional
};

/// The unique second branch completing f1 to a Lebesgue-preserving map, via
/// inv2(y) = a + y - inv1(y). Throws std::invalid_argument when f1 is not an
/// expanding full branch on [0, a].
ExpandingCircleMap lebesgue_extend(const FirstBranch& f1, double a, MapProvenance provenance = {});

/// Integrates f2' = f1'(phi) / (f1'(phi) - 1), phi = f1^{-1}(f2), f2(a) = 0.
OdeCrosscheck crosscheck_lebesgue_ode(const ExpandingCircleMap& f, int n_steps);

/// Lebesgue-preserving map with f1' = 2 + 2 omega on [0, t] (t = min(t_omega, 1/8)),
/// a tail returning to slope 2 at a = 1/2 and total rise exactly 1. The seed
/// moves the hold interval of the tail.
ExpandingCircleMap build_F_omega_member(const Modulus& omega, std::uint64_t seed);

/// Profile of f1' used by build_F_omega_member.
Profile F_omega_slope_profile(const Modulus& omega, std::uint64_t seed);

struct CdfIdentity {
  double first = 0.0;   // max |mu[0, inv1(y)] - y/2|
  double second = 0.0;  // max |mu[a, inv2(y)] - int_0^y (rho - 1/2)|
};

/// Pushforward identities of the rho-preserving construction at random y.
CdfIdentity pushforward_cdf_residual(const ExpandingCircleMap& f, const DensityProfile& rho,
                                     int samples = 1000, std::uint64_t seed = 1);
/// max |inv1(y) + inv2(y) - a - y| at random y (Lebesgue case).
double lebesgue_cdf_residual(const ExpandingCircleMap& f, int samples = 1000,
                             std::uint64_t seed = 1);

}  // namespace acipmaps
