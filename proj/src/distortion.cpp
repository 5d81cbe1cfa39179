#include "acipmaps/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "acipmaps/density.hpp"

namespace acipmaps {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Sweep {
  const ExpandingCircleMap& f;
  int k_max;
  int exhaustive_depth;
  // Per depth: preimage points and accumulated log-derivatives.
  std::vector<std::vector<double>> ys, logs;
  std::vector<double> level_value;
  std::vector<std::size_t> nodes;

  void visit(int depth, bool leftmost, std::size_t index) {
    if (depth > 0) {
      const auto& l = logs[static_cast<std::size_t>(depth)];
      const auto [lo, hi] = std::minmax_element(l.begin(), l.end());
      auto& v = level_value[static_cast<std::size_t>(depth)];
      v = std::max(v, *hi - *lo);
      ++nodes[static_cast<std::size_t>(depth)];
    }
    if (depth == k_max) return;
    if (depth < exhaustive_depth) {
      descend(depth, 1, leftmost, 2 * index);
      descend(depth, 2, false, 2 * index + 1);
    } else {
      const int child = leftmost ? 1 : 1 + static_cast<int>((index + depth) & 1U);
      descend(depth, child, leftmost && child == 1, 2 * index + (child - 1));
    }
  }

  void descend(int depth, int branch, bool leftmost, std::size_t index) {
    const auto d = static_cast<std::size_t>(depth);
    const auto& y = ys[d];
    const auto& l = logs[d];
    auto& ny = ys[d + 1];
    auto& nl = logs[d + 1];
    for (std::size_t p = 0; p < y.size(); ++p) {
      const double x = f.inverse_branch(branch, y[p]);
      ny[p] = x;
      nl[p] = l[p] + std::log(f.preimage_slope(branch, y[p], x));
    }
    visit(depth + 1, leftmost, index);
  }
};

double cutoff_scale(const ExpandingCircleMap& f, const Modulus* omega) {
  const auto& p = f.provenance();
  if (p.f_omega_member && std::isfinite(p.cutoff)) return p.cutoff;
  if (omega) return construction_cutoff(*omega);
  if (p.omega) return construction_cutoff(*p.omega);
  return kNaN;
}

}  // namespace

std::string to_string(DistortionVerdict verdict) {
  switch (verdict) {
    case DistortionVerdict::bounded: return "bounded";
    case DistortionVerdict::unbounded: return "unbounded";
    case DistortionVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<DistortionLevel> distortion_sweep(const ExpandingCircleMap& f, int k_max,
                                              const DistortionOptions& opts) {
  if (k_max < 1 || k_max > opts.max_level)
    throw std::invalid_argument("distortion_sweep: level outside [1, max_level]");
  if (opts.samples_per_domain < 0 || opts.domain_cap < 2)
    throw std::invalid_argument("distortion_sweep: bad sampling options");

  std::vector<double> base{0.0, 1.0};
  for (int s = 1; s <= opts.samples_per_domain; ++s)
    base.push_back(static_cast<double>(s) / (opts.samples_per_domain + 1));
  const double c = cutoff_scale(f, nullptr);
  if (f.provenance().f_omega_member && std::isfinite(c)) base.push_back(c);
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());

  int depth = 0;
  while (depth < 62 && (std::size_t{1} << (depth + 1)) <= opts.domain_cap) ++depth;

  Sweep sw{f, k_max, std::min(depth, k_max), {}, {}, {}, {}};
  const auto levels = static_cast<std::size_t>(k_max) + 1;
  sw.ys.assign(levels, std::vector<double>(base.size()));
  sw.logs.assign(levels, std::vector<double>(base.size(), 0.0));
  sw.ys[0] = base;
  sw.level_value.assign(levels, 0.0);
  sw.nodes.assign(levels, 0);
  sw.visit(0, true, 0);

  std::vector<DistortionLevel> out;
  double running = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    DistortionLevel lv;
    lv.k = k;
    lv.level_value = sw.level_value[static_cast<std::size_t>(k)];
    running = std::max(running, lv.level_value);
    lv.D = running;
    lv.domains = sw.nodes[static_cast<std::size_t>(k)];
    lv.exact = k <= sw.exhaustive_depth;
    out.push_back(lv);
  }
  return out;
}

DistortionLevel distortion_level(const ExpandingCircleMap& f, int k, int samples_per_domain,
                                 std::size_t domain_cap) {
  DistortionOptions opts;
  opts.samples_per_domain = samples_per_domain;
  opts.domain_cap = domain_cap;
  return distortion_sweep(f, k, opts).back();
}

std::vector<Witness> witness_sequence_all(const ExpandingCircleMap& f, int k_max) {
  const auto& p = f.provenance();
  if (!p.f_omega_member || !std::isfinite(p.cutoff))
    throw std::invalid_argument("witness_sequence: map lacks F_omega provenance");
  if (k_max < 0) throw std::invalid_argument("witness_sequence: negative level");
  const double d0 = f.branch_deriv(1, 0.0);
  std::vector<Witness> out;
  out.reserve(static_cast<std::size_t>(k_max) + 1);
  Witness w{p.cutoff, 0.0};
  out.push_back(w);
  for (int k = 1; k <= k_max; ++k) {
    w.x = f.inverse_branch(1, w.x);
    w.value += std::log1p((f.branch_deriv(1, w.x) - d0) / d0);
    out.push_back(w);
  }
  return out;
}

Witness witness_sequence(const ExpandingCircleMap& f, int k) {
  return witness_sequence_all(f, k).back();
}

double lower_bound(const Modulus& omega, double sigma, double C, int k) {
  if (!(sigma > 1.0)) throw std::invalid_argument("lower_bound: sigma must exceed 1");
  if (!(C > 0.0 && C <= 1.0)) throw std::invalid_argument("lower_bound: C must lie in (0, 1]");
  const double log_c = std::log(C);
  const double log_s = std::log(sigma);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += omega.at_log(log_c + (i - k) * log_s);
  return 2.0 / sigma * sum;
}

SlopeBounds widened_slope_bounds(const ExpandingCircleMap& f, int grid_log2) {
  const int n = 1 << grid_log2;
  SlopeBounds b{1e300, -1e300, 0.0};
  for (int i = 1; i <= 2; ++i) {
    const double lo = i == 1 ? 0.0 : f.breakpoint();
    const double hi = i == 1 ? f.breakpoint() : 1.0;
    double prev = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double d = f.branch_deriv(i, lo + (hi - lo) * j / n);
      b.lambda = std::min(b.lambda, d);
      b.sigma = std::max(b.sigma, d);
      if (j > 0) b.spread = std::max(b.spread, std::fabs(d - prev));
      prev = d;
    }
  }
  b.lambda -= b.spread;
  b.sigma += b.spread;
  return b;
}

DistortionReport classify_distortion(const ExpandingCircleMap& f, const Modulus& omega, int k_max,
                                     const DistortionOptions& opts) {
  if (k_max < 20) throw std::invalid_argument("classify_distortion: k_max must be >= 20");
  DistortionReport r;
  const SlopeBounds bounds = widened_slope_bounds(f);
  r.lambda = bounds.lambda;
  r.sigma = bounds.sigma;
  r.t_omega = omega.t_omega();
  r.C = cutoff_scale(f, &omega);
  r.dini = dini_classify(omega).verdict;

  const int k_d = std::min(k_max, opts.max_level);
  const auto sweep = distortion_sweep(f, k_d, opts);
  const bool member = f.provenance().f_omega_member;
  std::vector<Witness> witnesses;
  if (member) witnesses = witness_sequence_all(f, k_max);

  for (int k = 1; k <= k_max; ++k) {
    DistortionRecord rec;
    rec.k = k;
    if (k <= k_d) {
      rec.D = sweep[static_cast<std::size_t>(k - 1)].D;
      rec.exact = sweep[static_cast<std::size_t>(k - 1)].exact;
    } else {
      rec.D = kNaN;
    }
    rec.witness = member ? witnesses[static_cast<std::size_t>(k)].value : kNaN;
    rec.witness_x = member ? witnesses[static_cast<std::size_t>(k)].x : kNaN;
    rec.lower_bound = lower_bound(omega, r.sigma, r.C, k);
    r.levels.push_back(rec);
  }

  auto at = [&r](int k) -> const DistortionRecord& { return r.levels[static_cast<std::size_t>(k - 1)]; };
  r.plateau_increase = at(k_d).D - at(std::max(1, k_d / 2)).D;

  if (member) {
    r.witness_dominates = true;
    for (const auto& rec : r.levels)
      if (rec.witness < rec.lower_bound - 1e-9) r.witness_dominates = false;
    const int k1 = std::max(1, k_max / 4);
    const int k2 = std::max(1, k_max / 2);
    r.witness_increasing = at(k1).witness < at(k2).witness && at(k2).witness < at(k_max).witness;
    r.witness_increase = at(k_max).witness - at(std::max(1, 3 * k_max / 4)).witness;
  }
  const bool bound_grows = at(k_max).lower_bound > at(std::max(1, k_max / 2)).lower_bound;

  if (member && r.witness_dominates && r.witness_increasing && bound_grows &&
      r.witness_increase > opts.plateau_tol) {
    r.verdict = DistortionVerdict::unbounded;
    r.reason = "witness keeps growing above the lower bound";
  } else if (r.plateau_increase <= opts.plateau_tol && r.dini == DiniVerdict::dini) {
    r.verdict = DistortionVerdict::bounded;
    r.reason = "distortion plateaus and omega is Dini";
  } else {
    r.verdict = DistortionVerdict::inconclusive;
    r.reason = r.plateau_increase > opts.plateau_tol ? "distortion still rising over the last half"
                                                     : "no plateau-Dini agreement";
  }
  return r;
}

}  // namespace acipmaps
