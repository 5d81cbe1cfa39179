#include "acipmaps/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace acipmaps {

namespace {

// %.17g round-trips, and fixed formatting keeps files byte-comparable.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void write_density_csv(std::ostream& os, const DensityProfile& rho, int n) {
  os << "x,rho,g\n";
  for (int j = 0; j <= n; ++j) {
    const double x = static_cast<double>(j) / n;
    os << num(x) << ',' << num(rho(x)) << ',' << num(rho.cumulative(x)) << '\n';
  }
}

void write_map_csv(std::ostream& os, const ExpandingCircleMap& f, int n) {
  os << "x,f,df\n";
  const double a = f.breakpoint();
  for (int j = 0; j <= n; ++j) {
    const double x = static_cast<double>(j) / n;
    // The left branch owns its right end so the curve reaches 1 before the jump.
    const int i = x <= a ? 1 : 2;
    os << num(x) << ',' << num(f.branch(i, x)) << ',' << num(f.branch_deriv(i, x)) << '\n';
  }
}

void write_grid_csv(std::ostream& os, const GridFunction& h) {
  os << "x,value\n";
  for (int j = 0; j <= h.n(); ++j) os << num(h.node(j)) << ',' << num(h[j]) << '\n';
}

void write_distortion_csv(std::ostream& os, const DistortionReport& r) {
  os << "k,D,witness,lower_bound\n";
  for (const auto& l : r.levels)
    os << l.k << ',' << num(l.D) << ',' << num(l.witness) << ',' << num(l.lower_bound) << '\n';
}

void write_modulus_csv(std::ostream& os, const ModulusEstimate& e1, const ModulusEstimate& e2,
                       const Modulus& omega) {
  os << "t,omega,branch1,branch2\n";
  for (std::size_t i = 0; i < e1.scales.size(); ++i) {
    const double t = e1.scales[i];
    os << num(t) << ',' << num(omega(t)) << ',' << num(e1.values[i]) << ','
       << num(e2.values.at(i)) << '\n';
  }
}

json to_json(const DensityCertification& c) {
  return {{"min_rho", c.min_rho},
          {"p1_left_residual", c.p1_left_residual},
          {"p1_right_residual", c.p1_right_residual},
          {"spread", c.spread},
          {"p3_residual", c.p3_residual},
          {"cumulative_residual", c.cumulative_residual},
          {"cumulative_monotone", c.cumulative_monotone},
          {"positive", c.positive},
          {"p1", c.p1},
          {"p2", c.p2},
          {"p3", c.p3},
          {"cumulative_ok", c.cumulative_ok},
          {"smooth_junctions", c.smooth_junctions},
          {"passed", c.passed()}};
}

json to_json(const MapCertificate& c) {
  return {{"full_branch_residual", c.full_branch_residual},
          {"lambda", c.lambda},
          {"sigma", c.sigma},
          {"inverse_residual", c.inverse_residual},
          {"monotone", c.monotone},
          {"full_branch", c.full_branch},
          {"expanding", c.expanding},
          {"inverse_consistent", c.inverse_consistent},
          {"passed", c.passed()}};
}

json to_json(const GluingReport& g) {
  return {{"interior_residual", g.interior_residual},
          {"endpoint_residual", g.endpoint_residual},
          {"passed", g.passed}};
}

json to_json(const MapProvenance& p) {
  return {{"path", p.path},
          {"modulus", p.modulus},
          {"seed", p.seed},
          {"cutoff", number_or_null(p.cutoff)},
          {"f_omega_member", p.f_omega_member}};
}

json to_json(const DiniResult& r, int trace_points) {
  json trace = json::array();
  const auto n = static_cast<int>(r.partial_sums.size());
  if (n > 0) {
    // Log-spaced k so the slow growth of non-Dini sums stays visible.
    int last = 0;
    for (int p = 0; p < trace_points; ++p) {
      const double s = trace_points == 1 ? 1.0 : static_cast<double>(p) / (trace_points - 1);
      const int k = std::max(1, static_cast<int>(std::lround(std::pow(n, s))));
      if (k == last) continue;
      last = k;
      trace.push_back({{"k", k}, {"S", r.partial_sums[static_cast<std::size_t>(k - 1)]}});
    }
  }
  return {{"verdict", to_string(r.verdict)},
          {"integral", number_or_null(r.integral)},
          {"S_kmax", n > 0 ? json(r.partial_sums.back()) : json(nullptr)},
          {"k_max", n},
          {"exceeded_threshold", r.exceeded_threshold},
          {"slow_decay", r.slow_decay},
          {"fast_decay", r.fast_decay},
          {"quadrature",
           {{"value", r.quadrature.value},
            {"last_increment", r.quadrature.last_increment},
            {"doublings", r.quadrature.doublings},
            {"converged", r.quadrature.converged},
            {"verdict", to_string(r.quadrature.verdict)}}},
          {"partial_sums", trace}};
}

json to_json(const DistortionReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"k", l.k},
                      {"D", number_or_null(l.D)},
                      {"exact", l.exact},
                      {"witness", number_or_null(l.witness)},
                      {"witness_x", number_or_null(l.witness_x)},
                      {"lower_bound", l.lower_bound}});
  return {{"verdict", to_string(r.verdict)},
          {"reason", r.reason},
          {"dini", to_string(r.dini)},
          {"lambda", r.lambda},
          {"sigma", r.sigma},
          {"C", r.C},
          {"t_omega", r.t_omega},
          {"plateau_increase", r.plateau_increase},
          {"witness_increase", r.witness_increase},
          {"witness_dominates", r.witness_dominates},
          {"witness_increasing", r.witness_increasing},
          {"levels", levels}};
}

json to_json(const FixedPointResult& r) {
  return {{"iterations", r.history.size()}, {"history", r.history}, {"mass", r.limit.mass()}};
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace acipmaps
