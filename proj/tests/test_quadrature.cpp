#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "catswap/quadrature.hpp"

using namespace catswap;

TEST_CASE("gauss-legendre low orders match known nodes") {
  const auto& g2 = gauss_legendre(2);
  REQUIRE(g2.x.size() == 2);
  CHECK(g2.x[0] == doctest::Approx(-0.5773502691896257).epsilon(1e-14));
  CHECK(g2.x[1] == doctest::Approx(0.5773502691896257).epsilon(1e-14));
  CHECK(g2.w[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g2.w[1] == doctest::Approx(1.0).epsilon(1e-14));

  const auto& g5 = gauss_legendre(5);
  REQUIRE(g5.x.size() == 5);
  CHECK(g5.x[2] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(g5.w[2] == doctest::Approx(0.5688888888888889).epsilon(1e-13));
  CHECK(g5.x[4] == doctest::Approx(0.9061798459386640).epsilon(1e-13));
  CHECK(g5.w[4] == doctest::Approx(0.2369268850561891).epsilon(1e-13));
}

TEST_CASE("weights sum to interval length") {
  for (int n : {1, 2, 7, 32, 257}) {
    const auto& g = gauss_legendre(n);
    double s = 0.0;
    for (double w : g.w) s += w;
    CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("polynomial exactness") {
  // order n integrates degree 2n-1 exactly; x^4 on [0,1] with n=3
  auto nodes = gauss_legendre_on(0.0, 1.0, 3);
  double s = 0.0;
  for (auto [x, w] : nodes) s += w * x * x * x * x;
  CHECK(s == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("smooth integrand convergence") {
  auto nodes = gauss_legendre_on(-1.0, 1.0, 8);
  double s = 0.0;
  for (auto [x, w] : nodes) s += w * std::cos(x);
  CHECK(std::abs(s - 2.0 * std::sin(1.0)) < 1e-14);
}

TEST_CASE("order limits") {
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre(-3), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre(5000), std::invalid_argument);
  CHECK_NOTHROW(gauss_legendre(4096));
}

TEST_CASE("cache returns stable references") {
  const auto& a = gauss_legendre(17);
  const auto& b = gauss_legendre(17);
  CHECK(&a == &b);
}
