#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "acipmaps/construct.hpp"
#include "acipmaps/distortion.hpp"

using namespace acipmaps;

TEST_CASE("doubling map has no distortion") {
  const auto levels = distortion_sweep(doubling_map(), 10);
  REQUIRE(levels.size() == 10);
  for (const auto& l : levels) {
    CHECK(l.D <= 1e-13);
    CHECK(l.exact);
  }
  CHECK(levels.back().domains == 1024);
}

TEST_CASE("sweep switches to single-child descent past the cap") {
  DistortionOptions o;
  o.domain_cap = 1 << 6;
  const auto levels = distortion_sweep(build_F_omega_member(make_holder(0.5, 1.0), 1), 10, o);
  CHECK(levels[5].exact);
  CHECK_FALSE(levels[6].exact);
  CHECK(levels[9].domains == 64);
  for (std::size_t k = 1; k < levels.size(); ++k) CHECK(levels[k].D >= levels[k - 1].D);
  CHECK_THROWS_AS(distortion_sweep(doubling_map(), 30), std::invalid_argument);
}

TEST_CASE("distortion of a nonlinear map by hand at level one") {
  const ExpandingCircleMap f = build_F_omega_member(make_holder(0.5, 1.0), 1);
  // level-one domains are the branches; sample points are their images of {0, 1/2, 1, c}
  const double c = f.provenance().cutoff;
  double worst = 0.0;
  for (int i = 1; i <= 2; ++i) {
    double lo = 1e300, hi = -1e300;
    for (double y : {0.0, 0.5, 1.0, c}) {
      const double v = std::log(f.branch_deriv(i, f.inverse_branch(i, y)));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    worst = std::max(worst, hi - lo);
  }
  CHECK(distortion_level(f, 1).D == doctest::Approx(worst).epsilon(1e-12));
}

TEST_CASE("witness and lower bound") {
  const Modulus w = make_log_nondini();
  const ExpandingCircleMap f = build_F_omega_member(w, 1);
  const auto ws = witness_sequence_all(f, 20);
  REQUIRE(ws.size() == 21);
  CHECK(ws[0].value == 0.0);
  for (std::size_t k = 1; k < ws.size(); ++k) {
    CHECK(ws[k].value > ws[k - 1].value);
    CHECK(ws[k].x < ws[k - 1].x);
  }
  CHECK(witness_sequence(f, 5).value == ws[5].value);
  CHECK_THROWS_AS(witness_sequence(doubling_map(), 3), std::invalid_argument);

  // (2/sigma) sum omega(C sigma^{i-k}) by hand for k = 2
  const double s = 2.5, C = 0.01;
  CHECK(lower_bound(w, s, C, 2) == doctest::Approx(2 / s * (w(C / (s * s)) + w(C / s))));
  CHECK_THROWS_AS(lower_bound(w, 1.0, C, 2), std::invalid_argument);
  CHECK_THROWS_AS(lower_bound(w, s, 2.0, 2), std::invalid_argument);
}

TEST_CASE("widened slope bounds bracket the sampled ones") {
  const ExpandingCircleMap f = build_F_omega_member(make_holder(0.5, 1.0), 2);
  const SlopeBounds b = widened_slope_bounds(f);
  CHECK(b.lambda <= f.lambda());
  CHECK(b.sigma >= f.sigma());
  CHECK(b.spread > 0.0);
  const SlopeBounds d = widened_slope_bounds(doubling_map());
  CHECK(d.lambda == 2.0);
  CHECK(d.sigma == 2.0);
}

TEST_CASE("classification of the doubling stub") {
  const ExpandingCircleMap f = build_F_omega_member(make_zero(), 1);
  const DistortionReport r = classify_distortion(f, make_zero(), 20);
  CHECK(r.verdict == DistortionVerdict::bounded);
  for (const auto& l : r.levels) CHECK(l.D <= 1e-12);
  CHECK_THROWS_AS(classify_distortion(f, make_zero(), 10), std::invalid_argument);
}
