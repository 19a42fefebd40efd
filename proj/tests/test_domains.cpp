#include <random>

#include "doctest.h"
#include "harmsurf/domains.hpp"

using namespace harmsurf;

namespace {

cplx poly(cplx z, const std::vector<double>& roots) {
  cplx p = 1.0;
  for (double r : roots) p *= z - r;
  return p;
}

}  // namespace

TEST_CASE("w squares to the branch polynomial") {
  const std::vector<double> roots{-5, -4, 0, 0.2, 0.25, 0.3, 0.4, 2.5};
  const HyperellipticCurve c(roots);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-6, 6);
  for (int i = 0; i < 200; ++i) {
    const cplx z(u(rng), u(rng));
    const cplx w = c.evaluate_w(z);
    CHECK(std::abs(w * w - poly(z, roots)) <= 1e-12 * std::abs(poly(z, roots)));
  }
}

TEST_CASE("genus from the number of branch points") {
  CHECK(HyperellipticCurve({0, 1}).genus() == 0);
  CHECK(HyperellipticCurve({0, 1, 2}).genus() == 1);
  CHECK(HyperellipticCurve({0, 1, 2, 3}).genus() == 1);
  CHECK(HyperellipticCurve({0, 0.2, 0.25, 0.3, 0.4, 1, 2, 2.2, 4}).genus() == 4);
  CHECK(HyperellipticCurve({0, 1, 2, 3, 4, 5}).genus() == 2);
  CHECK(HyperellipticCurve({0, 1, 2}).branched_at_infinity());
}

TEST_CASE("slits pair the sorted branch points from the top") {
  const HyperellipticCurve even({-1, 0, 1, 2});
  REQUIRE(even.slit_intervals().size() == 2);
  CHECK(even.slit_intervals()[1].lo == 1);
  CHECK(even.slit_intervals()[1].hi == 2);
  CHECK(even.slit_intervals()[0].lo == -1);
  const HyperellipticCurve odd({0, 1, 2});
  CHECK(odd.slit_intervals().front().lo == -std::numeric_limits<double>::infinity());
  CHECK(odd.slit_intervals().front().hi == 0);
}

TEST_CASE("w is continuous across gaps and changes sign across slits") {
  const HyperellipticCurve c({-1, 0, 1, 2});
  for (double x : {-3.0, 0.5, 3.0}) {
    CHECK_FALSE(c.on_slit(x));
    CHECK(std::abs(c.w_on_bank(x, Bank::upper) - c.w_on_bank(x, Bank::lower)) < 1e-14);
    CHECK(std::abs(c.evaluate_w(cplx(x, 1e-9)) - c.evaluate_w(cplx(x, -1e-9))) < 1e-6);
  }
  for (double x : {-0.5, 1.5}) {
    CHECK(c.on_slit(x));
    CHECK(std::abs(c.w_on_bank(x, Bank::upper) + c.w_on_bank(x, Bank::lower)) < 1e-14);
    CHECK_THROWS_AS(c.evaluate_w(x), DomainError);
  }
}

TEST_CASE("torus reduction and lattice distance") {
  const RectTorus t(cplx(0, 1.2), {0.5});
  const cplx r = t.reduce(cplx(2.3, -0.5));
  CHECK(std::abs(r - cplx(0.3, 0.7)) < 1e-14);
  CHECK(t.lattice_distance(cplx(1.5, 1.2), 0.5) < 1e-14);
  CHECK(t.lattice_distance(0.0, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("canonical cycles") {
  SUBCASE("sphere: one circle per finite puncture") {
    const auto cy = canonical_cycles(PuncturedSphere({-1.0, 0.0, 1.0}));
    REQUIRE(cy.size() == 3);
    for (const auto& c : cy) CHECK(c.label == CycleLabel::around_puncture);
  }
  SUBCASE("segments through the origin become half circles") {
    const std::vector<double> chain{0, 0.2, 0.25, 0.3, 0.4, -2.5, -10.0 / 3, -4, -5};
    HyperellipticCurve c(chain);
    c.with_cycle_chain(chain);
    const auto cy = canonical_cycles(c);
    REQUIRE(cy.size() == 8);
    int halves = 0;
    for (const auto& x : cy) halves += x.label == CycleLabel::half_circle;
    CHECK(halves == 1);
    CHECK(cy[4].label == CycleLabel::half_circle);
  }
  SUBCASE("torus: two lattice cycles") {
    const auto cy = canonical_cycles(RectTorus(cplx(0, 1.2), {0.5}));
    REQUIRE(cy.size() == 2);
    CHECK(cy[0].label == CycleLabel::lattice_1);
    CHECK(cy[1].label == CycleLabel::lattice_tau);
  }
}

TEST_CASE("path pieces") {
  const PathPiece line = PathPiece::line(cplx(1, 1), cplx(3, 2));
  CHECK(std::abs(line.point(0.5) - cplx(2, 1.5)) < 1e-15);
  CHECK(line.length() == doctest::Approx(std::sqrt(5.0)));
  const PathPiece arc = PathPiece::arc(0.0, 2.0, 0.0, pi);
  CHECK(std::abs(arc.point(0.5) - cplx(0, 2)) < 1e-14);
  CHECK(arc.length() == doctest::Approx(2 * pi));
  // Points near an end are rebuilt from that end.
  const PathPiece tiny = PathPiece::line(0.0, 1.0);
  const PathPoint near_end = tiny.locate(1.0, 1e-17);
  CHECK(near_end.base == 1.0);
  CHECK(std::abs(near_end.offset + 1e-17) < 1e-33);
}

TEST_CASE("charts") {
  const HyperellipticCurve c({0, 1, 2});
  const LocalChart at_branch = chart_at(c, cplx(1.0));
  CHECK(at_branch.branched);
  CHECK(std::abs(at_branch.z_of(cplx(0.1, 0.2)) - (1.0 + cplx(0.1, 0.2) * cplx(0.1, 0.2))) < 1e-15);
  const LocalChart inf = chart_at(c, std::nullopt);
  CHECK(inf.at_infinity);
  CHECK(inf.branched);
  const LocalChart plain = chart_at(PuncturedSphere(std::vector<cplx>{}), cplx(0.5));
  CHECK_FALSE(plain.branched);
  const cplx t(0.01, 0.02), h(1e-7, 0);
  const cplx fd = (inf.z_of(t + h) - inf.z_of(t - h)) / (2.0 * h);
  CHECK(std::abs(fd - inf.dz_dt(t)) < 1e-6 * std::abs(fd));
}
