#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "harmsurf/gallery.hpp"

using namespace harmsurf;

TEST_CASE("Scherk b1 from the orthogonality condition") {
  CHECK(scherk_b1({1, 2, 3, 4, 5}, ScherkOrientation::outward) == doctest::Approx(-15.0 / 8));
  CHECK(scherk_b1({1, 2, 3, 4, 5}, ScherkOrientation::inward) == doctest::Approx(-20.0 / 6));
  for (auto o : {ScherkOrientation::outward, ScherkOrientation::inward}) {
    const GaussMapSpec g = scherk_gauss_map({0.04, 0.08, 0.3, 0.9, 10}, o);
    CHECK(std::abs(g(cplx(0.0, 1e-300)) - I) < 1e-10);
  }
  CHECK_THROWS_AS(build_scherk({0.2, 0.1, 0.3, 0.9, 10}, ScherkOrientation::outward), ConfigError);
}

TEST_CASE("stacked planes punctures and end types") {
  const WeierstrassTriple t = build_stacked_planes(3);
  const auto& s = std::get<PuncturedSphere>(t.domain);
  CHECK(s.punctures().size() == 7);
  CHECK_FALSE(s.infinity_punctured());
  int catenoids = 0, planar = 0;
  for (int k = -3; k <= 3; ++k) {
    const EndDescriptor e = classify_end(t, double(k));
    if (e.type_tuple == std::array<int, 3>{1, 2, 2}) ++catenoids;
    if (e.pole_orders[2] == 0 && e.order == 2) ++planar;
  }
  CHECK(catenoids == 2);
  CHECK(planar == 5);
  const WeierstrassTriple one = build_stacked_planes(1);
  for (double p : {-1.0, 0.0, 1.0}) CHECK(std::abs(residue(one.domain, one.omega[0], p)) < 1e-14);
  CHECK(residue(one.domain, one.omega[2], -1.0) == cplx(1.0));
  CHECK(residue(one.domain, one.omega[2], 1.0) == cplx(-1.0));
}

TEST_CASE("genus-two-ends builders") {
  const PeriodSystem proto = build_genus_two_ends({});
  CHECK(proto.slots.empty());
  CHECK(classify_end(proto.triple, 0.0).type_tuple == std::array<int, 3>{0, 1, 2});
  const PeriodSystem half_circle_roots = build_genus_two_ends({0.2, 0.25, 0.3, 0.4, -2.5, -10.0 / 3, -4, -5});
  int halves = 0;
  for (const auto& c : half_circle_roots.cycles) halves += c.label == CycleLabel::half_circle;
  CHECK(halves == 1);
  const PeriodSystem v023 = build_genus_two_ends({0.2, 0.25, 0.3, 0.4}, End3Variant::pole1plus2);
  CHECK(classify_end(close_periods(v023, {}).triple, 0.0).type_tuple == std::array<int, 3>{0, 2, 3});
  FamilySpec bad = FamilySpec::defaults(FamilyKind::genus_two_ends);
  bad.a = {0.2, 0.2};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("torus data must balance") {
  CHECK_NOTHROW(torus_end_data(cplx(0, 1.2), 0.5, TorusVariant::half));
  CHECK_NOTHROW(torus_end_data(cplx(0, 1.2), 1.0 / 3, TorusVariant::third));
  CHECK_THROWS_AS(torus_end_data(cplx(0, 1.2), 1.0 / 3, TorusVariant::third_literal), DomainError);
}

TEST_CASE("every family closes") {
  for (auto kind : {FamilyKind::stacked_planes, FamilyKind::genus_two_ends, FamilyKind::genus_two_ends_023,
                    FamilyKind::scherk_outward, FamilyKind::scherk_inward, FamilyKind::scherk_minimal,
                    FamilyKind::torus_end}) {
    const std::string name = to_string(kind);
    CAPTURE(name);
    const FamilyInstance inst = build_family(FamilySpec::defaults(kind));
    CHECK(inst.period_residual < 1e-8);
    // Scherk periods are the translations, everything else integrates to zero.
    if (inst.conditions.empty()) CHECK(verify_closed(inst.triple, inst.cycles, {}) < 1e-8);
    else CHECK(verify_conditions(inst.triple, inst.cycles, inst.conditions, {}) < 1e-8);
  }
}

TEST_CASE("Scherk lattice") {
  const FamilyInstance inst = build_family(FamilySpec::defaults(FamilyKind::scherk_outward));
  REQUIRE(inst.translations.size() == 2);
  CHECK(max_abs(inst.translations[0] - Vec3{2 * pi, 0, 0}) < 1e-8);
  CHECK(max_abs(inst.translations[1] - Vec3{0, 2 * pi, 0}) < 1e-8);
}

TEST_CASE("minimal Scherk instance is conformal") {
  const FamilyInstance inst = build_family(FamilySpec::defaults(FamilyKind::scherk_minimal));
  REQUIRE(inst.minimal.has_value());
  const auto probes = probe_points(inst, 100, 0.05);
  CHECK(conformality_defect(inst.triple, probes) < 1e-10);
  const RunReport r = diagnose(inst, nullptr);
  CHECK(r.scherk_parameters->first == doctest::Approx(0.12539914).epsilon(1e-6));
}

TEST_CASE("spec overrides") {
  FamilySpec s = FamilySpec::defaults(FamilyKind::torus_end);
  s.apply("tau=0+1.5i");
  s.apply("end=0.25");
  s.apply("resolution=48");
  CHECK(s.tau == cplx(0, 1.5));
  CHECK(s.end == cplx(0.25, 0));
  CHECK(s.mesh.resolution == 48);
  CHECK_THROWS_AS(s.apply("colour=red"), ConfigError);
  CHECK_THROWS_AS(s.apply("n"), ConfigError);
  CHECK_THROWS_AS(family_from_string("klein-bottle"), ConfigError);
}

TEST_CASE("shipped configs round-trip byte for byte") {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(HARMSURF_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    std::ifstream in(entry.path());
    std::stringstream text;
    text << in.rdbuf();
    const FamilySpec spec = load_spec(entry.path().string());
    CHECK(spec_to_json(spec).dump(2) + "\n" == text.str());
  }
  CHECK(seen >= 7);
}

TEST_CASE("malformed specs are config errors") {
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"parameters": {}})")), ConfigError);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"family": "stacked-planes", "parameters": {"n": 0}})")),
                  ConfigError);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"family": "torus-end", "parameters": {"tau": [0, -1]}})")),
                  ConfigError);
}

TEST_CASE("report JSON") {
  const FamilyInstance inst = build_family(FamilySpec::defaults(FamilyKind::stacked_planes));
  const nlohmann::json j = report_to_json(diagnose(inst, nullptr));
  CHECK(j["family"] == "stacked-planes");
  CHECK(j["ends"].size() == 5);
  CHECK(j["total_curvature"]["mesh"].is_null());
  CHECK(j["period_residual"].get<double>() >= 0);
}
