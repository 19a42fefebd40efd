#include <random>

#include "doctest.h"
#include "harmsurf/forms.hpp"
#include "harmsurf/theta.hpp"

using namespace harmsurf;

namespace {

// Straight partial sum of the defining series, |n| <= 40.
cplx theta_series(cplx z, cplx tau) {
  cplx s = 0;
  for (int n = -40; n <= 40; ++n) {
    const double m = n + 0.5;
    s += std::exp(pi * I * m * m * tau + 2.0 * pi * I * m * (z + 0.5));
  }
  return s;
}

}  // namespace

TEST_CASE("theta matches the defining series") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (cplx tau : {cplx(0, 1.2), cplx(0, 0.7), cplx(0.3, 1.1)}) {
    const ThetaFunction th(tau);
    for (int i = 0; i < 40; ++i) {
      const cplx z(u(rng), u(rng));
      const cplx want = theta_series(z, tau);
      CHECK(std::abs(th(z) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("theta is odd with a zero at the origin") {
  const ThetaFunction th(cplx(0, 1.2));
  CHECK(std::abs(th(0.0)) <= 1e-14);
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.4, 0.5), cplx(0.45, -0.3)})
    CHECK(std::abs(th(-z) + th(z)) <= 1e-13 * std::abs(th(z)));
}

TEST_CASE("quasi-periodicity of theta") {
  const cplx tau(0, 1.2);
  const ThetaFunction th(tau);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 50; ++i) {
    const cplx z(u(rng), u(rng));
    CHECK(std::abs(th(z + 1.0) + th(z)) <= 1e-12 * std::abs(th(z)));
    const cplx factor = std::exp(-pi * I * tau - 2.0 * pi * I * (z + 0.5));
    CHECK(std::abs(th(z + tau) - factor * th(z)) <= 1e-11 * std::abs(factor * th(z)));
  }
}

TEST_CASE("quotients with balanced divisors pick up constant factors") {
  const cplx tau(0, 1.2);
  ThetaQuotientTerm q{{{cplx(0.5, -0.6), 1}, {cplx(0.5, 0.6), 1}}, {{cplx(0.5), 2}}, tau};
  for (cplx z : {cplx(0.1, 0.1), cplx(-0.3, 0.4)}) {
    CHECK(std::abs(q(z + 1.0) - q(z)) <= 1e-11 * std::abs(q(z)));
    // 2 pi i (a1 + a2 - 2 b) = 0 here.
    CHECK(std::abs(q(z + tau) - q(z)) <= 1e-10 * std::abs(q(z)));
  }
}

TEST_CASE("zero and pole orders of a quotient") {
  const cplx tau(0, 1.2);
  ThetaQuotientTerm q{{{cplx(0.2, 0.1), 2}}, {{cplx(-0.3), 1}, {cplx(0.1, 0.4), 1}}, tau};
  const double r1 = 1e-3, r2 = 5e-4;
  const double zero_slope = std::log(std::abs(q(cplx(0.2, 0.1) + r1)) / std::abs(q(cplx(0.2, 0.1) + r2))) / std::log(2.0);
  CHECK(zero_slope == doctest::Approx(2.0).epsilon(1e-3));
  const double pole_slope = std::log(std::abs(q(cplx(-0.3) + r1)) / std::abs(q(cplx(-0.3) + r2))) / std::log(2.0);
  CHECK(pole_slope == doctest::Approx(-1.0).epsilon(1e-3));
}
