#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "acipmaps/density.hpp"
#include "acipmaps/numerics.hpp"

using namespace acipmaps;

namespace {
const char* const kModuli[] = {"holder:alpha=0.5,C=1", "holder:alpha=0.25,C=1",
                               "almost-lipschitz", "log-nondini", "holder:alpha=1,C=1"};
}

TEST_CASE("built densities pass certification") {
  for (const char* d : kModuli) {
    CAPTURE(d);
    const Modulus w = parse_modulus(d);
    const DensityProfile rho = build_density(w);
    const DensityCertification& c = rho.certification();
    CHECK(c.passed());
    CHECK(c.min_rho > 0.5);
    CHECK(c.spread < 0.5);
    CHECK(c.p1_left_residual <= 1e-12);
    CHECK(c.p1_right_residual <= 1e-12);
    CHECK(rho(0.0) == doctest::Approx(1.0));
    CHECK(rho(1.0) == doctest::Approx(1.0));
    CHECK(rho.cumulative(0.5) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(rho.cumulative(1.0) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("density follows 1 + omega below the cutoff") {
  const Modulus w = make_holder(0.5, 1.0);
  const DensityProfile rho = build_density(w);
  const double c = construction_cutoff(w);
  for (double t : {1e-6, 1e-4, 0.5 * c}) {
    CHECK(rho(t) == doctest::Approx(1.0 + w(t)).epsilon(1e-14));
    CHECK(rho(1.0 - t) == doctest::Approx(1.0 + w(t)).epsilon(1e-12));
  }
}

TEST_CASE("cumulative against quadrature and its inverse") {
  const DensityProfile rho = build_density(make_log_nondini());
  const auto r = rho.evaluator();
  for (double x : {0.01, 0.2, 0.5, 0.77}) {
    const double q = numerics::integrate_graded(r, 0.0, x);
    CHECK(rho.cumulative(x) == doctest::Approx(q).epsilon(1e-10));
    CHECK(rho.inverse_cumulative(rho.cumulative(x)) == doctest::Approx(x).epsilon(1e-12));
  }
  CHECK_THROWS_AS(rho.cumulative(1.5), std::domain_error);
  CHECK_THROWS_AS(cumulative_eval(rho, -0.1), std::domain_error);
}

TEST_CASE("uniform density") {
  const DensityProfile u = uniform_density();
  CHECK(u(0.3) == 1.0);
  CHECK(u.cumulative(0.3) == doctest::Approx(0.3));
  CHECK(u.certification().passed());
}

TEST_CASE("certify rejects a density without the half-mass property") {
  DensityProfile bad([](double x) { return 0.75 + 0.5 * x; }, {}, 1.0, "test");
  const DensityCertification c = certify(bad);
  CHECK_FALSE(c.p1);
  CHECK_FALSE(c.passed());
}

TEST_CASE("construction cutoff") {
  CHECK(construction_cutoff(make_holder(1.0, 0.1)) == 0.125);
  CHECK(construction_cutoff(make_log_nondini()) == doctest::Approx(std::exp(-7.0)));
  CHECK_THROWS_AS(build_density(make_custom([](double t) { return t * t; })),
                  std::invalid_argument);
}
