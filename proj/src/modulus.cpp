#include "acipmaps/modulus.hpp"

#include <algorithm>
#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "acipmaps/numerics.hpp"

namespace acipmaps {

namespace {

constexpr double kCutoffLevel = 0.125;

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string to_string(ModulusFamily family) {
  switch (family) {
    case ModulusFamily::holder: return "holder";
    case ModulusFamily::log_nondini: return "log-nondini";
    case ModulusFamily::almost_lipschitz: return "almost-lipschitz";
    case ModulusFamily::custom: return "custom";
  }
  return "custom";
}

std::string to_string(DiniVerdict verdict) {
  switch (verdict) {
    case DiniVerdict::dini: return "dini";
    case DiniVerdict::non_dini: return "non_dini";
    case DiniVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Modulus::Modulus(Parts parts, double t_omega, ModulusFamily family,
                 std::map<std::string, double> params, std::string descriptor)
    : parts_(std::move(parts)),
      t_omega_(t_omega),
      family_(family),
      params_(std::move(params)),
      descriptor_(std::move(descriptor)) {
  if (!parts_.eval) throw std::invalid_argument("Modulus: evaluator required");
  if (!(t_omega_ > 0.0 && t_omega_ <= 1.0))
    throw std::invalid_argument("Modulus: t_omega must lie in (0, 1]");
}

double Modulus::operator()(double t) const { return parts_.eval(t); }

double Modulus::at_log(double log_t) const {
  if (parts_.eval_log) return parts_.eval_log(log_t);
  return parts_.eval(std::exp(log_t));
}

double Modulus::integral(double x) const {
  if (x <= 0.0) return 0.0;
  if (parts_.integral) return parts_.integral(x);
  const auto& f = parts_.eval;
  return numerics::integrate_graded([&f](double t) { return f(t); }, 0.0, x);
}

std::optional<Jet> Modulus::jet(double t) const {
  if (!parts_.jet) return std::nullopt;
  return parts_.jet(t);
}

Modulus Modulus::scaled(double c) const {
  if (!(c > 0.0)) throw std::invalid_argument("Modulus::scaled: factor must be positive");
  Parts p;
  auto base = parts_;
  p.eval = [base, c](double t) { return c * base.eval(t); };
  if (base.eval_log) p.eval_log = [base, c](double u) { return c * base.eval_log(u); };
  if (base.integral) p.integral = [base, c](double x) { return c * base.integral(x); };
  if (base.jet)
    p.jet = [base, c](double t) {
      Jet j = base.jet(t);
      return Jet{c * j.value, c * j.d1, c * j.d2};
    };
  double t = t_omega_;
  while (c * base.eval(t) > kCutoffLevel && t > 1e-300) t *= 0.5;
  auto params = params_;
  params["scale"] = c;
  return Modulus(std::move(p), t, ModulusFamily::custom, std::move(params),
                 format_number(c) + "*" + descriptor_);
}

Modulus make_holder(double alpha, double C) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("holder: exponent alpha must be positive");
  if (alpha > 1.0)
    throw std::invalid_argument("not in K (concavity): holder exponent alpha must be <= 1");
  if (!(C > 0.0)) throw std::invalid_argument("holder: scale C must be positive");
  Modulus::Parts p;
  p.eval = [alpha, C](double t) { return t <= 0.0 ? 0.0 : C * std::pow(t, alpha); };
  p.eval_log = [alpha, C](double u) { return C * std::exp(alpha * u); };
  p.integral = [alpha, C](double x) {
    return x <= 0.0 ? 0.0 : C * std::pow(x, alpha + 1.0) / (alpha + 1.0);
  };
  p.jet = [alpha, C](double t) {
    return Jet{C * std::pow(t, alpha), C * alpha * std::pow(t, alpha - 1.0),
               C * alpha * (alpha - 1.0) * std::pow(t, alpha - 2.0)};
  };
  const double t_omega = std::min(1.0, std::pow(1.0 / (8.0 * C), 1.0 / alpha));
  return Modulus(std::move(p), t_omega, ModulusFamily::holder, {{"alpha", alpha}, {"C", C}},
                 "holder:alpha=" + format_number(alpha) + ",C=" + format_number(C));
}

// 1 / (1 + log(1/t)) is concave only for t <= 1/e; past that point it
// continues along its tangent so the modulus stays in K.
Modulus make_log_nondini() {
  constexpr double kKnee = 0.36787944117144233;  // 1/e
  constexpr double kKneeValue = 0.5;
  const double knee_slope = std::exp(1.0) / 4.0;
  const double knee_integral = std::exp(1.0) * boost::math::expint(1, 2.0);
  Modulus::Parts p;
  p.eval = [knee_slope](double t) {
    if (t <= 0.0) return 0.0;
    if (t > kKnee) return kKneeValue + knee_slope * (t - kKnee);
    return 1.0 / (1.0 - std::log(t));
  };
  p.eval_log = [knee_slope](double u) {
    if (u > -1.0) return kKneeValue + knee_slope * (std::exp(u) - kKnee);
    return 1.0 / (1.0 - u);
  };
  // int_0^x dt / (1 + log(1/t)) = e * E1(1 + log(1/x)) below the knee
  p.integral = [knee_slope, knee_integral](double x) {
    if (x <= 0.0) return 0.0;
    if (x > kKnee) {
      const double d = x - kKnee;
      return knee_integral + kKneeValue * d + 0.5 * knee_slope * d * d;
    }
    return std::exp(1.0) * boost::math::expint(1, 1.0 - std::log(x));
  };
  p.jet = [knee_slope](double t) {
    if (t > kKnee) return Jet{kKneeValue + knee_slope * (t - kKnee), knee_slope, 0.0};
    const double L = -std::log(t);
    const double q = 1.0 + L;
    return Jet{1.0 / q, 1.0 / (t * q * q), (1.0 - L) / (t * t * q * q * q)};
  };
  return Modulus(std::move(p), std::exp(-7.0), ModulusFamily::log_nondini, {}, "log-nondini");
}

Modulus make_almost_lipschitz() {
  Modulus::Parts p;
  p.eval = [](double t) { return t <= 0.0 ? 0.0 : t * (1.0 - std::log(t)); };
  p.eval_log = [](double u) { return std::exp(u) * (1.0 - u); };
  p.integral = [](double x) {
    return x <= 0.0 ? 0.0 : x * x * (0.75 - 0.5 * std::log(x));
  };
  p.jet = [](double t) {
    return Jet{t * (1.0 - std::log(t)), -std::log(t), -1.0 / t};
  };
  const auto eval = p.eval;
  const double t_omega = numerics::bisect_increasing(eval, kCutoffLevel, 1e-12, 1.0, 1e-14);
  return Modulus(std::move(p), t_omega, ModulusFamily::almost_lipschitz, {},
                 "almost-lipschitz");
}

Modulus make_zero() {
  Modulus::Parts p;
  p.eval = [](double) { return 0.0; };
  p.eval_log = [](double) { return 0.0; };
  p.integral = [](double) { return 0.0; };
  p.jet = [](double) { return Jet{}; };
  return Modulus(std::move(p), 1.0, ModulusFamily::custom, {}, "zero");
}

double dyadic_cutoff(const std::function<double(double)>& omega) {
  double t = 1.0;
  for (int k = 0; k <= 60; ++k, t *= 0.5)
    if (omega(t) <= kCutoffLevel) return t;
  throw std::invalid_argument("no dyadic scale >= 2^-60 with omega(t) <= 1/8");
}

Modulus make_custom(std::function<double(double)> eval, std::string name) {
  const double t_omega = dyadic_cutoff(eval);
  Modulus::Parts p;
  p.eval = std::move(eval);
  return Modulus(std::move(p), t_omega, ModulusFamily::custom, {}, std::move(name));
}

Modulus parse_modulus(const std::string& descriptor) {
  const std::string text = trim(descriptor);
  const auto colon = text.find(':');
  const std::string family = trim(text.substr(0, colon));
  std::map<std::string, double> params;
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("modulus descriptor: expected key=value, got '" + item + "'");
      const std::string key = trim(item.substr(0, eq));
      const std::string value = trim(item.substr(eq + 1));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != value.size() || value.empty())
        throw std::invalid_argument("modulus descriptor: bad number for '" + key + "'");
      params[key] = v;
    }
  }
  auto take = [&params](const std::string& key, std::optional<double> fallback) {
    auto it = params.find(key);
    if (it == params.end()) {
      if (!fallback) throw std::invalid_argument("modulus descriptor: missing '" + key + "'");
      return *fallback;
    }
    const double v = it->second;
    params.erase(it);
    return v;
  };
  auto reject_leftovers = [&params]() {
    if (!params.empty())
      throw std::invalid_argument("modulus descriptor: unknown parameter '" +
                                  params.begin()->first + "'");
  };
  if (family == "holder") {
    const double alpha = take("alpha", std::nullopt);
    const double C = take("C", 1.0);
    reject_leftovers();
    return make_holder(alpha, C);
  }
  reject_leftovers();
  if (family == "log-nondini") return make_log_nondini();
  if (family == "almost-lipschitz") return make_almost_lipschitz();
  if (family == "zero") return make_zero();
  throw std::invalid_argument("modulus descriptor: unknown family '" + family + "'");
}

// ---------------------------------------------------------------------------

KReport is_in_K(const std::function<double(double)>& omega, int n_samples, double tol) {
  if (n_samples < 16) throw std::invalid_argument("is_in_K: need at least 16 samples");
  const auto n = static_cast<std::size_t>(n_samples);
  std::vector<double> t(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    v[i] = omega(t[i]);
  }
  KReport report;
  auto note = [&report](const char* test, double s, double tt, double amount) {
    if (!report.worst || amount > report.worst->amount)
      report.worst = KViolation{test, s, tt, amount};
  };
  if (std::fabs(v[0]) > tol) {
    report.vanishes_at_zero = false;
    note("vanishing", 0.0, 0.0, std::fabs(v[0]));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double drop = v[i] - v[i + 1];
    if (drop > tol) {
      report.monotone = false;
      note("monotone", t[i], t[i + 1], drop);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; j += 2) {
      const double gap = 0.5 * (v[i] + v[j]) - v[(i + j) / 2];
      if (gap > tol) {
        report.midpoint_concave = false;
        note("concavity", t[i], t[j], gap);
      }
    }
  }
  return report;
}

KReport is_in_K(const Modulus& omega, int n_samples, double tol) {
  return is_in_K([&omega](double t) { return omega(t); }, n_samples, tol);
}

// ---------------------------------------------------------------------------

DiniQuadrature dini_quadrature(const Modulus& omega, double increment_tol, int max_doublings) {
  DiniQuadrature q;
  auto integrand = [&omega](double u) { return omega.at_log(-u); };
  double lo = 0.0;
  double hi = 1.0;
  q.value = numerics::integrate(integrand, lo, hi);
  q.last_increment = q.value;
  for (int k = 0; k < max_doublings; ++k) {
    lo = hi;
    hi *= 2.0;
    const double block = numerics::integrate(integrand, lo, hi);
    q.value += block;
    q.last_increment = block;
    q.doublings = k + 1;
    if (std::fabs(block) < increment_tol) {
      q.converged = true;
      break;
    }
  }
  if (q.converged) {
    q.verdict = DiniVerdict::dini;
  } else if (q.last_increment > 1e-6) {
    q.verdict = DiniVerdict::non_dini;
  }
  return q;
}

DiniResult dini_classify(const Modulus& omega, const DiniOptions& opts) {
  if (!(opts.sigma > 1.0)) throw std::invalid_argument("dini_classify: sigma must exceed 1");
  if (opts.k_max < 10) throw std::invalid_argument("dini_classify: k_max must be >= 10");
  DiniResult r;
  const double log_sigma = std::log(opts.sigma);
  const auto k_max = static_cast<std::size_t>(opts.k_max);
  std::vector<double> inc(k_max + 1, 0.0);
  r.partial_sums.resize(k_max);
  double sum = 0.0;
  for (std::size_t i = 1; i <= k_max; ++i) {
    inc[i] = omega.at_log(-static_cast<double>(i) * log_sigma);
    sum += inc[i];
    r.partial_sums[i - 1] = sum;
  }
  r.exceeded_threshold = sum > opts.threshold;

  const std::size_t first = std::max<std::size_t>(2, k_max - k_max / 10 + 1);
  bool all_slow = true;
  bool all_fast = true;
  int ratios = 0;
  for (std::size_t i = first; i <= k_max; ++i) {
    if (inc[i - 1] <= 0.0) continue;  // underflowed or vanishing increments decay
    const double ratio = inc[i] / inc[i - 1];
    const double bar = 1.0 - 5.0 / static_cast<double>(i);
    ++ratios;
    if (ratio > bar) all_fast = false; else all_slow = false;
  }
  r.slow_decay = ratios > 0 && all_slow;
  r.fast_decay = ratios == 0 || all_fast;

  r.quadrature = dini_quadrature(omega, opts.increment_tol, opts.max_doublings);
  if (r.exceeded_threshold || r.slow_decay) {
    r.verdict = DiniVerdict::non_dini;
  } else if (r.fast_decay && r.quadrature.converged) {
    r.verdict = DiniVerdict::dini;
    r.integral = r.quadrature.value;
  } else {
    r.verdict = DiniVerdict::inconclusive;
  }
  return r;
}

// ---------------------------------------------------------------------------

EquivalenceResult equivalent(const std::function<double(double)>& omega1,
                             const std::function<double(double)>& omega2, double t_min, int n,
                             double max_spread) {
  if (!(t_min > 0.0 && t_min <= 1.0))
    throw std::invalid_argument("equivalent: t_min must lie in (0, 1]");
  if (n < 2) throw std::invalid_argument("equivalent: need at least two points");
  EquivalenceResult r;
  r.lo = std::numeric_limits<double>::infinity();
  r.hi = 0.0;
  const double log_min = std::log(t_min);
  for (int i = 0; i < n; ++i) {
    const double t = std::exp(log_min * (1.0 - static_cast<double>(i) / (n - 1)));
    const double a = omega1(t);
    const double b = omega2(t);
    double ratio;
    if (b == 0.0) {
      if (a == 0.0) continue;
      ratio = std::numeric_limits<double>::infinity();
    } else {
      ratio = a / b;
    }
    r.lo = std::min(r.lo, ratio);
    r.hi = std::max(r.hi, ratio);
  }
  if (!std::isfinite(r.lo)) r.lo = 0.0;
  r.equivalent = r.lo > 0.0 && std::isfinite(r.hi) && r.hi / r.lo <= max_spread;
  return r;
}

std::vector<double> dyadic_scales(double t_min, double t_max) {
  std::vector<double> out;
  double t = 1.0;
  for (int k = 0; k <= 200; ++k, t *= 0.5) {
    if (t < t_min) break;
    if (t <= t_max) out.push_back(t);
  }
  return out;
}

ModulusEstimate canonical_modulus_estimate(const std::function<double(double)>& fn,
                                           std::vector<double> scales, int samples_per_scale,
                                           double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("canonical_modulus_estimate: empty domain");
  std::sort(scales.begin(), scales.end(), std::greater<>());
  for (double t : scales)
    if (!(t > 0.0 && t <= hi - lo))
      throw std::invalid_argument("canonical_modulus_estimate: scales must lie in (0, hi - lo]");

  ModulusEstimate est;
  est.scales = scales;
  est.values.assign(scales.size(), 0.0);
  est.sample_count = samples_per_scale;
  const double width = hi - lo;
  const int n_log = std::max(2, samples_per_scale / 4);
  const int n_uniform = std::max(2, samples_per_scale - 2 * n_log);
  constexpr double kFractions[] = {1.0, 0.75, 0.5, 0.25};

  for (std::size_t s = 0; s < scales.size(); ++s) {
    const double t = scales[s];
    double best = 0.0;
    auto probe = [&](double x) {
      x = std::clamp(x, lo, hi - t);
      const double fx = fn(x);
      for (double frac : kFractions) best = std::max(best, std::fabs(fn(x + frac * t) - fx));
    };
    probe(lo);
    probe(hi - t);
    for (int k = 0; k < n_log; ++k) {
      const double off = width * std::pow(10.0, -12.0 + 12.0 * k / (n_log - 1));
      probe(lo + off);
      probe(hi - t - off);
    }
    for (int k = 0; k < n_uniform; ++k) probe(lo + (width - t) * k / (n_uniform - 1));
    est.values[s] = best;
  }
  // Pairs admissible at a small scale are admissible at every larger one.
  for (std::size_t s = scales.size(); s-- > 1;)
    est.values[s - 1] = std::max(est.values[s - 1], est.values[s]);
  return est;
}

}  // namespace acipmaps
