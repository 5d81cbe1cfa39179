#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "acipmaps/circlemap.hpp"
#include "acipmaps/modulus.hpp"

namespace acipmaps {

enum class DistortionVerdict { bounded, unbounded, inconclusive };
std::string to_string(DistortionVerdict verdict);

struct DistortionOptions {
  int samples_per_domain = 1;       // interior points per domain besides both ends
  std::size_t domain_cap = 1 << 20;  // domains enumerated exhaustively per level
  double plateau_tol = 0.05;
  int max_level = 24;
};

struct DistortionLevel {
  int k = 0;
  double level_value = 0.0;  // max over sampled domains of level k
  double D = 0.0;            // running sup over levels 1..k
  bool exact = true;         // all 2^k domains enumerated
  std::size_t domains = 0;
};

/// Sweep over levels 1..k_max of the injectivity-domain tree. Domains are
/// enumerated exhaustively while 2^k <= domain_cap; deeper levels follow one
/// child per node, always keeping the leftmost domain [0, r_k].
std::vector<DistortionLevel> distortion_sweep(const ExpandingCircleMap& f, int k_max,
                                              const DistortionOptions& opts = {});

/// D_k alone (running sup up to level k).
DistortionLevel distortion_level(const ExpandingCircleMap& f, int k, int samples_per_domain = 1,
                                 std::size_t domain_cap = 1 << 20);

struct Witness {
  double x = 0.0;
  double value = 0.0;  // log (f^k)'(x_k) - log (f^k)'(0)
};

/// x_k = k-fold first inverse branch of the cutoff scale; requires F_omega provenance.
Witness witness_sequence(const ExpandingCircleMap& f, int k);
/// All witnesses for k = 0..k_max in one pass.
std::vector<Witness> witness_sequence_all(const ExpandingCircleMap& f, int k_max);

/// (2/sigma) sum_{0<=i<k} omega(C sigma^{i-k}).
double lower_bound(const Modulus& omega, double sigma, double C, int k);

struct SlopeBounds {
  double lambda = 0.0;
  double sigma = 0.0;
  double spread = 0.0;  // estimated modulus of f' at the sampling spacing
};

/// Sampled extrema of f' widened by the largest jump between neighbouring samples.
SlopeBounds widened_slope_bounds(const ExpandingCircleMap& f, int grid_log2 = 12);

struct DistortionRecord {
  int k = 0;
  double D = 0.0;  // NaN beyond the distortion sweep
  bool exact = false;
  double witness = 0.0;  // NaN without F_omega provenance
  double witness_x = 0.0;
  double lower_bound = 0.0;
};

struct DistortionReport {
  std::vector<DistortionRecord> levels;
  double lambda = 0.0;
  double sigma = 0.0;
  double C = 0.0;
  double t_omega = 0.0;
  DiniVerdict dini = DiniVerdict::inconclusive;
  double plateau_increase = 0.0;  // D_{k_D} - D_{k_D / 2}
  double witness_increase = 0.0;  // witness(k_max) - witness(3 k_max / 4)
  bool witness_dominates = false;
  bool witness_increasing = false;
  DistortionVerdict verdict = DistortionVerdict::inconclusive;
  std::string reason;
};

/// Bounded when D plateaus and omega is Dini; unbounded when the witness keeps
/// growing above the lower bound; inconclusive otherwise.
DistortionReport classify_distortion(const ExpandingCircleMap& f, const Modulus& omega, int k_max,
                                     const DistortionOptions& opts = {});

}  // namespace acipmaps
