#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "acipmaps/modulus.hpp"

using namespace acipmaps;

TEST_CASE("holder values, cutoff and closed-form integral") {
  const Modulus w = make_holder(0.5, 1.0);
  CHECK(w(0.25) == doctest::Approx(0.5));
  CHECK(w(0.0) == 0.0);
  CHECK(w.t_omega() == doctest::Approx(1.0 / 64));
  CHECK(w.integral(0.3) == doctest::Approx(std::pow(0.3, 1.5) / 1.5).epsilon(1e-14));
  CHECK(w.at_log(-1000.0) == doctest::Approx(std::exp(-500.0)));
  CHECK(w.descriptor() == "holder:alpha=0.5,C=1");
  CHECK(make_holder(1.0, 0.1).t_omega() == 1.0);
}

TEST_CASE("log-nondini near zero and past the knee") {
  const Modulus w = make_log_nondini();
  CHECK(w(std::exp(-3.0)) == doctest::Approx(0.25));
  // tangent continuation: omega(1) = 1/2 + (e/4)(1 - 1/e)
  CHECK(w(1.0) == doctest::Approx((1.0 + std::exp(1.0)) / 4.0));
  CHECK(w.t_omega() == doctest::Approx(std::exp(-7.0)));
  CHECK(w.at_log(-1e6) == doctest::Approx(1.0 / (1.0 + 1e6)));
  CHECK(is_in_K(w).passed());
}

TEST_CASE("almost-lipschitz integral against quadrature of the evaluator") {
  const Modulus w = make_almost_lipschitz();
  CHECK(w(w.t_omega()) == doctest::Approx(0.125).epsilon(1e-12));
  const Modulus plain = make_custom([](double t) { return t <= 0 ? 0.0 : t * (1 - std::log(t)); });
  CHECK(plain.integral(0.7) == doctest::Approx(w.integral(0.7)).epsilon(1e-10));
}

TEST_CASE("descriptor parsing") {
  CHECK(parse_modulus("holder:alpha=0.25,C=1").params().at("alpha") == 0.25);
  CHECK(parse_modulus("holder:alpha=0.5").params().at("C") == 1.0);
  CHECK(parse_modulus("log-nondini").family() == ModulusFamily::log_nondini);
  CHECK(parse_modulus("almost-lipschitz").family() == ModulusFamily::almost_lipschitz);
  CHECK(parse_modulus("zero")(0.5) == 0.0);
  CHECK_THROWS_AS(parse_modulus("cantor"), std::invalid_argument);
  CHECK_THROWS_AS(parse_modulus("holder:alpha"), std::invalid_argument);
  CHECK_THROWS_AS(parse_modulus("holder:alpha=x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_modulus("holder:beta=1"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_modulus("holder:alpha=2,C=1"),
                       doctest::Contains("not in K (concavity)"), std::invalid_argument);
}

TEST_CASE("membership in K names the failing property") {
  const KReport convex = is_in_K([](double t) { return t * t; });
  CHECK_FALSE(convex.passed());
  REQUIRE(convex.worst);
  CHECK(convex.worst->test == "concavity");
  CHECK_FALSE(is_in_K([](double t) { return 1.0 - t; }).passed());
  CHECK_FALSE(is_in_K([](double t) { return 0.1 + t; }).vanishes_at_zero);
  for (const char* d : {"holder:alpha=0.5", "holder:alpha=0.25", "almost-lipschitz"})
    CHECK(is_in_K(parse_modulus(d)).passed());
}

TEST_CASE("dini integrals of power moduli") {
  for (double alpha : {0.25, 0.5, 1.0}) {
    const DiniResult r = dini_classify(make_holder(alpha, 1.0));
    CHECK(r.verdict == DiniVerdict::dini);
    CHECK(std::fabs(r.integral - 1.0 / alpha) <= 1e-8);
  }
  const DiniResult al = dini_classify(make_almost_lipschitz());
  CHECK(al.verdict == DiniVerdict::dini);
  CHECK(al.integral == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("log-nondini is not Dini for either base") {
  for (double sigma : {2.0, 3.0}) {
    DiniOptions o;
    o.sigma = sigma;
    const DiniResult r = dini_classify(make_log_nondini(), o);
    CHECK(r.verdict == DiniVerdict::non_dini);
    CHECK(r.partial_sums.size() == 10000);
  }
  CHECK(dini_quadrature(make_log_nondini()).verdict == DiniVerdict::non_dini);
  CHECK_THROWS_AS(dini_classify(make_log_nondini(), {1.0}), std::invalid_argument);
}

TEST_CASE("equivalence detects bounded ratios") {
  const Modulus w = make_holder(0.5, 1.0);
  const auto r = equivalent([&](double t) { return 3.0 * w(t); }, [&](double t) { return w(t); }, 1e-8);
  CHECK(r.equivalent);
  CHECK(r.lo == doctest::Approx(3.0));
  CHECK(r.hi == doctest::Approx(3.0));
  const auto s = equivalent([](double t) { return std::sqrt(t); }, [](double t) { return t; },
                            1e-8);
  CHECK_FALSE(s.equivalent);
}

TEST_CASE("canonical modulus estimate of sqrt") {
  const auto scales = dyadic_scales(1e-4, 0.25);
  CHECK(scales.front() == 0.25);
  CHECK(scales.back() >= 1e-4);
  const auto e = canonical_modulus_estimate([](double x) { return std::sqrt(x); }, scales);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    CHECK(e.at(i) <= std::sqrt(scales[i]) * (1 + 1e-12));
    CHECK(e.at(i) >= 0.9 * std::sqrt(scales[i]));
  }
}

TEST_CASE("scaled moduli keep the cutoff rule") {
  const Modulus w = make_holder(0.5, 1.0).scaled(4.0);
  CHECK(w(0.25) == doctest::Approx(2.0));
  CHECK(w(w.t_omega()) <= 0.125);
}
