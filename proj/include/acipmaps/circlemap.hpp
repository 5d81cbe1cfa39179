#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "acipmaps/modulus.hpp"

namespace acipmaps {

struct MapProvenance {
  std::string path = "custom";  // doubling | linear | acip | lebesgue | custom
  std::string modulus;          // descriptor of the source modulus, if any
  std::uint64_t seed = 0;
  std::shared_ptr<const Modulus> omega;
  /// Scale below which f_1' = 2 + 2 omega exactly (members of F_omega).
  double cutoff = std::numeric_limits<double>::quiet_NaN();
  bool f_omega_member = false;
};

/// Two increasing full branches f1: [0, a] -> [0, 1] and f2: [a, 1] -> [0, 1].
/// The circle is the interval with 0 identified with 1; only the gluing check
/// and map distances use the identification.
class ExpandingCircleMap {
 public:
  using Fn = std::function<double(double)>;
  /// Slope f'(x) at x = inv_i(y), given both; lets constructions reuse y.
  using PreimageSlope = std::function<double(int, double, double)>;

  struct Branches {
    double a = 0.5;
    Fn f1, f2;
    Fn df1, df2;
    Fn inv1, inv2;                 // optional; generic hybrid solve otherwise
    PreimageSlope preimage_slope;  // optional
  };

  ExpandingCircleMap(Branches branches, MapProvenance provenance = {});

  double breakpoint() const { return b_.a; }
  /// Piecewise evaluation; x = a belongs to the second branch (value 0).
  double eval(double x) const;
  double deriv(double x) const;
  /// Branch i in {1, 2} evaluated at x in its closed domain.
  double branch(int i, double x) const;
  double branch_deriv(int i, double x) const;
  /// The unique x in branch i's domain with f_i(x) = y.
  double inverse_branch(int i, double y) const;
  double preimage_slope(int i, double y, double x) const;

  /// Sampled min and max of f' over both branches (2^12 points each).
  double lambda() const { return lambda_; }
  double sigma() const { return sigma_; }
  const MapProvenance& provenance() const { return prov_; }

 private:
  void check_branch(int i) const;
  Branches b_;
  MapProvenance prov_;
  double lambda_ = 0.0;
  double sigma_ = 0.0;
};

ExpandingCircleMap doubling_map();
/// Linear full-branch map with breakpoint a: f1 = x/a, f2 = (x - a)/(1 - a).
ExpandingCircleMap linear_two_branch(double a);

struct MapCertificate {
  double full_branch_residual = 0.0;  // max of |f1(0)|, |f1(a)-1|, |f2(a)|, |f2(1)-1|
  double lambda = 0.0;
  double sigma = 0.0;
  double inverse_residual = 0.0;      // max |f_i(inv_i(y)) - y| over samples
  bool monotone = true;
  bool full_branch = false;
  bool expanding = false;
  bool inverse_consistent = false;
  bool passed() const { return full_branch && expanding && inverse_consistent && monotone; }
};

MapCertificate certify_map(const ExpandingCircleMap& f, int grid_log2 = 12,
                           int inverse_samples = 1000, std::uint64_t seed = 1);

struct DomainPartition {
  int level = 0;
  std::vector<double> cuts;  // 2^level + 1 sorted endpoints
  std::size_t size() const { return cuts.empty() ? 0 : cuts.size() - 1; }
  double left(std::size_t i) const { return cuts.at(i); }
  double right(std::size_t i) const { return cuts.at(i + 1); }
};

/// Injectivity domains of f^n from iterated inverse-branch pullback of {0, 1}.
DomainPartition injectivity_domains(const ExpandingCircleMap& f, int n, int cap = 24);

struct GluingReport {
  double interior_residual = 0.0;  // |f1'(a-) - f2'(a+)|
  double endpoint_residual = 0.0;  // |f1'(0+) - f2'(1-)|
  bool passed = false;
};

GluingReport check_c1_circle(const ExpandingCircleMap& f, double tol = 1e-8);

/// Orbit x, f(x), ..., f^n(x).
std::vector<double> iterate(const ExpandingCircleMap& f, double x, int n);

/// Canonical-modulus estimate of f' restricted to branch i.
ModulusEstimate branch_derivative_modulus(const ExpandingCircleMap& f, int i,
                                          const std::vector<double>& scales,
                                          int samples_per_scale = 400);
/// Per-scale maximum of the two branch estimates.
ModulusEstimate derivative_modulus(const ExpandingCircleMap& f, const std::vector<double>& scales,
                                   int samples_per_scale = 400);

struct C1ModDistance {
  double value_sup = 0.0;  // circle distance of values
  double slope_sup = 0.0;
  double modulus_sup = 0.0;
  double total() const { return value_sup + slope_sup + modulus_sup; }
};

/// Sampled d_1 (values and slopes) plus d_0 of the derivative moduli.
C1ModDistance c1mod_distance(const ExpandingCircleMap& f, const ExpandingCircleMap& g,
                             const ModulusEstimate& omega_f, const ModulusEstimate& omega_g,
                             int grid = 4096);

}  // namespace acipmaps
