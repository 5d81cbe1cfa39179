#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <memory>

#include "acipmaps/numerics.hpp"
#include "acipmaps/profile.hpp"

using namespace acipmaps;

TEST_CASE("bridge meets its end conditions") {
  const Bridge b(0.1, 0.4, 1.3, 2.0, -5.0, 0.9);
  CHECK(b.value(0.1) == doctest::Approx(1.3));
  CHECK(b.slope(0.1) == doctest::Approx(2.0));
  CHECK(b.value(0.4) == doctest::Approx(0.9));
  CHECK(std::fabs(b.slope(0.4)) < 1e-12);
  const double h = 1e-4;
  const double curv = (-3 * b.slope(0.1) + 4 * b.slope(0.1 + h) - b.slope(0.1 + 2 * h)) / (2 * h);
  CHECK(curv == doctest::Approx(-5.0).epsilon(1e-4));
}

TEST_CASE("bridge integral matches quadrature") {
  const Bridge b(0.2, 0.5, 1.0, 0.5, 0.0, 2.0);
  const double q = numerics::integrate([&](double x) { return b.value(x); }, 0.2, 0.43);
  CHECK(b.integral(0.43) == doctest::Approx(q).epsilon(1e-13));
  CHECK(b.integral(0.2) == 0.0);
}

TEST_CASE("profile pieces are continuous and integrate exactly") {
  auto w = std::make_shared<const Modulus>(make_holder(0.5, 1.0));
  const double c = 1.0 / 64;
  const BridgeStart s = matched_start(*w, c, 1.0, 1.0);
  CHECK(s.smooth);
  CHECK(s.value == doctest::Approx(1.125));
  using Kind = Profile::Piece::Kind;
  std::vector<Profile::Piece> pieces;
  pieces.push_back({Kind::modulus, 0.0, c, 1.0, 1.0, 0.0, nullptr});
  pieces.push_back({Kind::bridge, c, 0.3, 0.0, 0.0, 0.0,
                    std::make_shared<Bridge>(c, 0.3, s.value, s.slope, s.curvature, 0.8)});
  pieces.push_back({Kind::constant, 0.3, 0.5, 0.0, 0.0, 0.8, nullptr});
  const Profile p(std::move(pieces), w);
  CHECK(p.length() == 0.5);
  CHECK(p.value(c) == doctest::Approx(1.125));
  CHECK(p.value(0.4) == 0.8);
  const double q = numerics::integrate_graded([&](double x) { return p.value(x); }, 0.0, 0.5);
  CHECK(p.total() == doctest::Approx(q).epsilon(1e-11));
  CHECK(p.integral(0.5) == p.total());
  CHECK(p.max_value() >= 1.125);
  CHECK(p.min_value() <= 0.8 + 1e-15);
}

TEST_CASE("flat start has zero slope") {
  const Modulus w = make_log_nondini();
  const BridgeStart s = flat_start(w, 1e-3, 2.0, 2.0);
  CHECK_FALSE(s.smooth);
  CHECK(s.slope == 0.0);
  CHECK(s.value == doctest::Approx(2.0 + 2.0 * w(1e-3)));
}
