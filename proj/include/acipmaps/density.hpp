#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "acipmaps/modulus.hpp"
#include "acipmaps/profile.hpp"

namespace acipmaps {

/// Residuals for the four density properties, recomputed from the evaluator
/// alone (grid sampling plus adaptive quadrature).
struct DensityCertification {
  double min_rho = 0.0;
  double p1_left_residual = 0.0;   // |int_0^1/2 rho - 1/2|
  double p1_right_residual = 0.0;  // |int_1/2^1 rho - 1/2|
  double spread = 0.0;             // max rho - min rho
  double p3_residual = 0.0;        // max(|rho(0) - 1|, |rho(1) - 1|)
  double cumulative_residual = 0.0;
  bool cumulative_monotone = true;

  bool positive = false;
  bool p1 = false;
  bool p2 = false;
  bool p3 = false;
  bool cumulative_ok = false;
  bool smooth_junctions = false;  // informational only

  bool passed() const { return positive && p1 && p2 && p3 && cumulative_ok; }
};

/// A density rho on [0, 1] together with its cumulative g(x) = int_0^x rho.
class DensityProfile {
 public:
  using Fn = std::function<double(double)>;

  /// cumulative may be empty, in which case it is computed by quadrature.
  DensityProfile(Fn rho, Fn cumulative, double t_omega, std::string source);

  double operator()(double x) const { return rho_(x); }
  /// g(x); throws std::domain_error outside [0, 1].
  double cumulative(double x) const;
  /// g^{-1}(y) for y in [0, 1].
  double inverse_cumulative(double y) const;

  double t_omega() const { return t_omega_; }
  const std::string& source() const { return source_; }
  const DensityCertification& certification() const { return cert_; }
  const Fn& evaluator() const { return rho_; }

  /// Level of the flat stretch on each half (build_density profiles only).
  std::optional<double> left_level, right_level;
  std::shared_ptr<const Modulus> modulus;

 private:
  friend DensityProfile build_density(const Modulus& omega);
  Fn rho_;
  Fn g_;
  double t_omega_;
  std::string source_;
  DensityCertification cert_;
};

/// rho(t) = 1 + omega(t) near 0 and mirrored near 1, with smooth bridges whose
/// levels are solved so each half carries mass exactly 1/2.
DensityProfile build_density(const Modulus& omega);

/// rho == 1 with g(x) = x.
DensityProfile uniform_density();

/// Independent re-check of positivity, (P1)-(P3) and the cumulative.
DensityCertification certify(const DensityProfile& rho, int grid_log2 = 13);

/// g(x) with the domain check.
double cumulative_eval(const DensityProfile& rho, double x);

/// Cutoff actually used by the constructions: min(t_omega, 1/8).
double construction_cutoff(const Modulus& omega);

}  // namespace acipmaps
