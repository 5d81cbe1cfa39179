#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace acipmaps {

enum class ModulusFamily { holder, log_nondini, almost_lipschitz, custom };

std::string to_string(ModulusFamily family);

/// Value and first two derivatives of a modulus at some t > 0.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// A modulus of continuity on [0, 1]: continuous, nondecreasing, concave and
/// vanishing at 0. The cutoff t_omega is the scale below which constructions
/// use the modulus verbatim; it always satisfies omega(t_omega) <= 1/8.
///
/// Besides the plain evaluator a modulus may carry closed forms for its
/// antiderivative, its derivatives and its value at exp(log_t). The latter
/// keeps partial sums over sigma^-i meaningful far below the double range.
class Modulus {
 public:
  struct Parts {
    std::function<double(double)> eval;
    std::function<double(double)> eval_log;  // optional: u -> omega(exp(u))
    std::function<double(double)> integral;  // optional: x -> int_0^x omega
    std::function<Jet(double)> jet;          // optional
  };

  Modulus(Parts parts, double t_omega, ModulusFamily family,
          std::map<std::string, double> params, std::string descriptor);

  double operator()(double t) const;
  /// omega(exp(log_t)); exact for built-ins even when exp(log_t) underflows.
  double at_log(double log_t) const;
  /// int_0^x omega, closed form when available, graded quadrature otherwise.
  double integral(double x) const;
  bool has_exact_integral() const { return static_cast<bool>(parts_.integral); }
  std::optional<Jet> jet(double t) const;

  double t_omega() const { return t_omega_; }
  ModulusFamily family() const { return family_; }
  const std::map<std::string, double>& params() const { return params_; }
  const std::string& descriptor() const { return descriptor_; }

  /// c * omega with the same cutoff rule re-applied.
  Modulus scaled(double c) const;

 private:
  Parts parts_;
  double t_omega_;
  ModulusFamily family_;
  std::map<std::string, double> params_;
  std::string descriptor_;
};

Modulus make_holder(double alpha, double C);
Modulus make_log_nondini();
Modulus make_almost_lipschitz();
/// omega == 0. Degenerate stub used to recover the doubling map.
Modulus make_zero();
/// Arbitrary evaluator; t_omega is the largest dyadic t <= 1 with omega(t) <= 1/8.
Modulus make_custom(std::function<double(double)> eval, std::string name = "custom");

/// Largest t = 2^-k (k = 0..60) with omega(t) <= 1/8.
double dyadic_cutoff(const std::function<double(double)>& omega);

/// Parses "family:key=value,...", e.g. "holder:alpha=0.5,C=1", "log-nondini",
/// "almost-lipschitz", "zero". Throws std::invalid_argument.
Modulus parse_modulus(const std::string& descriptor);

// ---------------------------------------------------------------------------
// Membership in K

struct KViolation {
  std::string test;  // "vanishing", "monotone" or "concavity"
  double s = 0.0;
  double t = 0.0;
  double amount = 0.0;
};

struct KReport {
  bool vanishes_at_zero = true;
  bool monotone = true;
  bool midpoint_concave = true;
  std::optional<KViolation> worst;
  bool passed() const { return vanishes_at_zero && monotone && midpoint_concave; }
};

/// Samples omega on n_samples uniform points of [0, 1] and checks omega(0) = 0,
/// monotonicity and the midpoint inequality for every pair with a grid midpoint.
KReport is_in_K(const Modulus& omega, int n_samples = 4096, double tol = 1e-9);
KReport is_in_K(const std::function<double(double)>& omega, int n_samples = 4096,
                double tol = 1e-9);

// ---------------------------------------------------------------------------
// Dini integrability

enum class DiniVerdict { dini, non_dini, inconclusive };
std::string to_string(DiniVerdict verdict);

struct DiniQuadrature {
  double value = 0.0;        // int of omega(t)/t over the resolved range
  double last_increment = 0.0;
  int doublings = 0;
  bool converged = false;
  DiniVerdict verdict = DiniVerdict::inconclusive;
};

struct DiniResult {
  DiniVerdict verdict = DiniVerdict::inconclusive;
  double integral = 0.0;  // meaningful when verdict == dini
  std::vector<double> partial_sums;  // S_1 .. S_kmax
  bool exceeded_threshold = false;
  bool slow_decay = false;  // last-decade increments fail the ratio test
  bool fast_decay = false;  // last-decade increments pass it
  DiniQuadrature quadrature;
};

struct DiniOptions {
  double sigma = 2.0;
  int k_max = 10000;
  double threshold = 20.0;
  double increment_tol = 1e-10;
  int max_doublings = 60;
};

/// Tail quadrature of int_0^1 omega(t)/t dt in the variable u = log(1/t):
/// int_0^U omega(e^-u) du with U doubling until a block contributes less
/// than increment_tol.
DiniQuadrature dini_quadrature(const Modulus& omega, double increment_tol = 1e-10,
                               int max_doublings = 60);

/// Geometric-sum classification with the quadrature value attached.
DiniResult dini_classify(const Modulus& omega, const DiniOptions& opts = {});

// ---------------------------------------------------------------------------
// Equivalence and estimation

struct EquivalenceResult {
  double lo = 0.0;
  double hi = 0.0;
  bool equivalent = false;
};

/// Extrema of omega1/omega2 on n log-spaced points of [t_min, 1].
EquivalenceResult equivalent(const std::function<double(double)>& omega1,
                             const std::function<double(double)>& omega2, double t_min,
                             int n = 256, double max_spread = 100.0);

struct ModulusEstimate {
  std::vector<double> scales;  // decreasing
  std::vector<double> values;  // estimate at each scale
  int sample_count = 0;
  double at(std::size_t i) const { return values.at(i); }
};

/// Sampled lower estimate of the canonical modulus of fn on [lo, hi]:
/// max |fn(x + d) - fn(x)| over pairs with d <= t. Base points are
/// log-spaced toward both ends of the interval plus a uniform layer.
ModulusEstimate canonical_modulus_estimate(const std::function<double(double)>& fn,
                                           std::vector<double> scales,
                                           int samples_per_scale = 400, double lo = 0.0,
                                           double hi = 1.0);

/// Dyadic scales 2^-k lying in [t_min, t_max], largest first.
std::vector<double> dyadic_scales(double t_min, double t_max);

}  // namespace acipmaps
