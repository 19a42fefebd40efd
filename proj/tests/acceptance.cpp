// Acceptance run: one PASS/FAIL line per criterion, diagnostics indented below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "harmsurf/gallery.hpp"

using namespace harmsurf;

namespace {

int failures = 0;

void verdict(int id, const char* name, bool ok) {
  std::printf("%s %2d %s\n", ok ? "PASS" : "FAIL", id, name);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class... Args>
void note(const char* fmt, Args... args) {
  std::printf("     ");
  std::printf(fmt, args...);
  std::printf("\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_diff(const std::vector<cplx>& got, const std::vector<cplx>& want) {
  if (got.size() != want.size()) return INFINITY;
  double d = 0;
  for (std::size_t k = 0; k < got.size(); ++k) d = std::max(d, std::abs(got[k] - want[k]));
  return d;
}

void print_lambdas(const std::vector<cplx>& got, const std::vector<cplx>& want) {
  for (std::size_t k = 0; k < got.size(); ++k) {
    const double ratio = std::abs(want[k]) > 0 ? std::abs(got[k]) / std::abs(want[k]) : NAN;
    note("lambda%zu computed % .8f%+.8fi  expected % .8f%+.8fi  |ratio| %.4f", k + 1, got[k].real(),
         got[k].imag(), want[k].real(), want[k].imag(), ratio);
  }
}

bool lambda_case(const PeriodSystem& sys, const std::vector<cplx>& expected, const QuadratureConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const ClosureResult r = close_periods(sys, cfg);
  const double dt = seconds_since(t0);
  const double d = max_diff(r.lambdas, expected);
  print_lambdas(r.lambdas, expected);
  note("max |lambda - expected| %.3e (tol 1e-4), period residual %.3e (tol 1e-8), %.2f s", d, r.residual, dt);
  return d <= 1e-4 && r.residual < 1e-8 && dt < 60;
}

std::vector<double> eight_roots() { return {0.2, 0.25, 0.3, 0.4, 1, 2, 2.2, 4}; }
std::vector<double> half_circle_roots() { return {0.2, 0.25, 0.3, 0.4, -2.5, -10.0 / 3, -4, -5}; }

void criterion1(const QuadratureConfig& cfg) {
  const std::vector<cplx> expected{-0.04470938, 0.32501167, -0.64421279, 0.25789177,
                                  -0.48150461, 2.46598103, -2.99070994, 0.81972586};
  verdict(1, "lambda reproduction, eight-root genus-two data", lambda_case(build_genus_two_ends(eight_roots()), expected, cfg));
}

void criterion2(const QuadratureConfig& cfg) {
  const std::vector<cplx> expected{-0.51419509, -0.0470358, 0.85173589, 0.25097214,
                                  -0.4182869,  1.41955981, 0.07839301, -0.08569918};
  verdict(2, "lambda reproduction, half-circle genus-two data", lambda_case(build_genus_two_ends(half_circle_roots()), expected, cfg));
}

void criterion3(const QuadratureConfig& cfg) {
  struct Case {
    std::array<double, 5> a;
    ScherkOrientation o;
    std::vector<cplx> expected;
  };
  const std::vector<Case> cases{
      {{0.04, 0.08, 0.3, 0.9, 10}, ScherkOrientation::outward, {0.13245255, -1.37068243, -0.36951468 * I, -0.36951468 * I}},
      {{0.01, 0.5, 1, 5, 10}, ScherkOrientation::outward, {1.65200244, -1.62539483, -1.18838503 * I, -1.18838503 * I}},
      {{0.0001, 0.0009, 0.006, 0.02, 10}, ScherkOrientation::inward, {-0.72642528, -0.77146839, 3.38200891 * I, 3.43121095 * I}},
      {{0.00001, 0.0001, 0.006, 0.2, 0.8}, ScherkOrientation::inward, {-0.38387911, -0.42144590, -0.24540826 * I, -0.19500638 * I}},
  };
  bool ok = true;
  for (const auto& c : cases) {
    note("a = (%g, %g, %g, %g, %g) %s", c.a[0], c.a[1], c.a[2], c.a[3], c.a[4],
         c.o == ScherkOrientation::outward ? "outward" : "inward");
    try {
      const PeriodSystem sys = build_scherk(c.a, c.o);
      ok = lambda_case(sys, c.expected, cfg) && ok;
      if (c.o == ScherkOrientation::inward) {
        const ClosureResult r = close_periods(sys, cfg);
        std::vector<PeriodCondition> targeted;
        for (const auto& pc : sys.conditions)
          if (pc.target != 0) targeted.push_back(pc);
        const double miss = verify_conditions(r.triple, sys.cycles, targeted, cfg);
        note("pi-target conditions: max miss %.3e (tol 1e-8)", miss);
        ok = ok && miss < 1e-8;
        // Same system with the pi targets negated (lower-bank reading of the slit integrals).
        PeriodSystem flipped = sys;
        for (auto& pc : flipped.conditions) pc.target = -pc.target;
        const auto& l = close_periods(flipped, cfg).lambdas;
        note("negated targets: lambda1+lambda2 %.8f, lambda2 %.8f, (lambda3+lambda4) %.8fi, lambda4 %.8fi",
             (l[0] + l[1]).real(), l[1].real(), (l[2] + l[3]).imag(), l[3].imag());
      }
    } catch (const Error& e) {
      note("error: %s", e.what());
      ok = false;
    }
  }
  verdict(3, "Scherk examples lambda reproduction", ok);
}

void criterion4(const QuadratureConfig& cfg) {
  const MinimalScherkResult r = solve_minimal_scherk({0.1, 0.3}, cfg);
  const double d = std::max(std::abs(r.a1 - 0.12539914), std::abs(r.a2 - 0.25068715));
  note("(a1, a2) = (%.8f, %.8f), %d iterations, distance %.2e (tol 1e-6)", r.a1, r.a2, r.iterations, d);
  FamilySpec spec = FamilySpec::defaults(FamilyKind::scherk_minimal);
  const FamilyInstance inst = build_family(spec);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<cplx> probes;
  while (probes.size() < 500) {
    const cplx z(u(rng), u(rng));
    if (feature_clearance(inst.triple, z) > 1e-3) probes.push_back(z);
  }
  const double defect = conformality_defect(inst.triple, probes);
  note("conformality defect over 500 probes %.3e (tol 1e-10)", defect);
  verdict(4, "minimal Scherk parameters and conformality", d <= 1e-6 && defect < 1e-10);
}

void criterion5(const QuadratureConfig& cfg) {
  const int n = 2;
  const WeierstrassTriple t = build_stacked_planes(n);
  std::vector<Cycle> cycles;
  for (int k = -n; k <= n; ++k) cycles.push_back(around_puncture_cycle(double(k), 0.25));
  const double closed = verify_closed(t, cycles, cfg);
  note("verify_closed over %zu cycles %.3e (tol 1e-10)", cycles.size(), closed);
  double imag_res = 0;
  for (int k = -n; k <= n; ++k)
    for (const auto& form : t.omega) imag_res = std::max(imag_res, std::abs(residue(t.domain, form, double(k)).imag()));
  note("max |Im residue| %.3e (tol 1e-12)", imag_res);

  const HarmonicMapEval f = HarmonicMapEval::unchecked(t, {}, cfg);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-3.5, 3.5), uy(-2.0, 2.0);
  double f3 = 0;
  int probes = 0;
  while (probes < 100) {
    const cplx z(ux(rng), uy(rng));
    if (nearest_feature_distance(t.domain, z) < 0.05) continue;
    ++probes;
    const double exact = 0.5 * std::log(std::norm(z + 2.0) / std::norm(z - 2.0));
    f3 = std::max(f3, std::abs(f(z).z - exact));
  }
  note("max |f3 - closed form| over 100 points %.3e (tol 1e-10)", f3);

  double normal_err = 0, flipped_err = 0;
  for (int k = -n; k <= n; ++k) {
    const EndDescriptor e = classify_end(t, double(k));
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    if (!e.limiting_normal) {
      note("k = %d: no limiting normal (%s)", k, e.note.c_str());
      normal_err = flipped_err = INFINITY;
      continue;
    }
    const Vec3 N = *e.limiting_normal;
    note("k = %+d: type (%d,%d,%d), N = (%.6f, %.6f, %.6f), expected (0, 0, %+.0f)", k, e.type_tuple[0],
         e.type_tuple[1], e.type_tuple[2], N.x, N.y, N.z, sign);
    normal_err = std::max(normal_err, max_abs(N - Vec3{0, 0, sign}));
    flipped_err = std::max(flipped_err, max_abs(N - Vec3{0, 0, -sign}));
  }
  note("max |N - (0,0,(-1)^k)| %.3e (tol 1e-4); against (0,0,(-1)^(k+1)) %.3e", normal_err, flipped_err);
  verdict(5, "stacked planes n=2: closure, residues, f3, limiting normals",
          closed < 1e-10 && imag_res < 1e-12 && f3 < 1e-10 && normal_err <= 1e-4);
}

void criterion6(const QuadratureConfig& cfg) {
  bool ok = true;
  for (const auto& [end, variant, label] :
       {std::tuple{cplx(0.5), TorusVariant::half, "end 1/2"}, std::tuple{cplx(1.0 / 3), TorusVariant::third, "end 1/3"}}) {
    const TorusClosure c = build_torus_end(cplx(0, 1.2), end, variant, cfg);
    const auto cycles = canonical_cycles(c.triple.domain);
    double worst = 0;
    for (const auto& cy : cycles)
      for (const auto& form : c.triple.omega) worst = std::max(worst, std::abs(integrate_cycle(form, cy, cfg).real()));
    const EndDescriptor e = classify_end(c.triple, end);
    note("%s: lattice periods max %.3e (tol 1e-8), order %d, type (%d,%d,%d)", label, worst, e.order,
         e.type_tuple[0], e.type_tuple[1], e.type_tuple[2]);
    ok = ok && worst < 1e-8 && e.order == 4;
  }
  verdict(6, "torus closure and end order", ok);
}

void criterion7() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5), uim(0.8, 1.6);
  std::uniform_int_distribution<int> order(1, 3);
  double worst = 0;
  for (int s = 0; s < 10; ++s) {
    const cplx tau(0, uim(rng));
    // Balanced divisors: the quasi-periodicity factors are constants only then.
    ThetaQuotientTerm q{{}, {}, tau};
    int za = 0, pb = 0;
    for (int i = 0; i < 2; ++i) {
      const int o = order(rng);
      q.zeros.push_back({cplx(u(rng), u(rng)), o});
      za += o;
    }
    while (pb < za) {
      const int o = std::min(order(rng), za - pb);
      q.poles.push_back({cplx(u(rng), u(rng)), o});
      pb += o;
    }
    cplx moment = 0;
    for (const auto& z : q.zeros) moment += double(z.order) * z.shift;
    for (const auto& p : q.poles) moment -= double(p.order) * p.shift;
    const cplx factor_tau = std::exp(2.0 * pi * I * moment);
    for (int k = 0; k < 50; ++k) {
      const cplx z(u(rng), u(rng));
      const cplx h = q(z);
      worst = std::max(worst, std::abs(q(z + 1.0) - h) / std::abs(h));  // sum(alpha - beta) = 0
      worst = std::max(worst, std::abs(q(z + tau) - factor_tau * h) / std::abs(factor_tau * h));
    }
  }
  const double at0 = std::abs(ThetaFunction(cplx(0, 1.2))(0.0));
  note("max relative error %.3e (tol 1e-9), |theta(0)| %.3e (tol 1e-14)", worst, at0);
  verdict(7, "theta quasi-periodicity", worst < 1e-9 && at0 <= 1e-14);
}

void criterion8() {
  bool ok = true;
  for (auto kind : {FamilyKind::stacked_planes, FamilyKind::genus_two_ends, FamilyKind::genus_two_ends_023,
                    FamilyKind::scherk_outward, FamilyKind::scherk_inward, FamilyKind::scherk_minimal,
                    FamilyKind::torus_end}) {
    const FamilyInstance inst = build_family(FamilySpec::defaults(kind));
    const auto probes = probe_points(inst, 50, default_probe_clearance(inst));
    const HarmonicMapEval f = inst.map();
    const double r = harmonicity_residual(f, probes, 1e-3);
    const double m1 = harmonicity_mean(f, probes, 1e-3), m2 = harmonicity_mean(f, probes, 5e-4);
    const double ratio = m1 / m2;
    const bool good = r < 1e-5 && ratio >= 3.0 && ratio <= 5.0;
    note("%-20s residual %.3e (tol 1e-5), mean ratio h/(h/2) %.3f, probe clearance %.1f%s", to_string(kind), r,
         ratio, default_probe_clearance(inst), good ? "" : "  <-");
    ok = ok && good;
  }
  verdict(8, "harmonicity residual and second-order convergence", ok);
}

void criterion9() {
  struct Row {
    const char* name;
    double formula, corrected, coarse, fine;
  };
  std::vector<Row> rows;
  {
    const WeierstrassTriple graph{PuncturedSphere(std::vector<cplx>{}, true),
                                  {OneForm::constant_dz(1.0), OneForm::constant_dz(-I), OneForm::monomial(2)}, 0.0};
    const HarmonicMapEval f = HarmonicMapEval::unchecked(graph);
    const int orders[] = {classify_end(graph, std::nullopt).order};
    rows.push_back({"graph (1,-i,z^2)", formula_total_curvature(2, orders), corrected_total_curvature(2, orders),
                    total_curvature(tessellate_plane(f, 128, 1e-2)), total_curvature(tessellate_plane(f, 256, 1e-2))});
  }
  for (auto kind : {FamilyKind::stacked_planes, FamilyKind::torus_end}) {
    FamilySpec spec = FamilySpec::defaults(kind);
    spec.n = 1;
    const FamilyInstance inst = build_family(spec);
    std::vector<int> orders;
    for (const auto& e : inst.ends) orders.push_back(classify_end(inst.triple, e).order);
    rows.push_back({kind == FamilyKind::torus_end ? "torus end 1/2" : "stacked planes n=1",
                    formula_total_curvature(inst.euler_characteristic, orders),
                    corrected_total_curvature(inst.euler_characteristic, orders),
                    total_curvature(tessellate(inst, 128, spec.mesh.clearance)),
                    total_curvature(tessellate(inst, 256, spec.mesh.clearance))});
  }
  bool ok = true;
  for (const auto& r : rows) {
    const double e1 = std::abs(r.coarse - r.formula) / std::abs(r.formula);
    const double e2 = std::abs(r.fine - r.formula) / std::abs(r.formula);
    const double c2 = std::abs(r.fine - r.corrected) / std::abs(r.corrected);
    note("%-20s mesh@256 %.4f pi, formula %.4f pi: rel err %.4f (tol 0.03), @128 %.4f", r.name, r.fine / pi,
         r.formula / pi, e2, e1);
    note("%-20s against 2 pi chi - 2 pi sum n = %.4f pi: rel err %.2e", "", r.corrected / pi, c2);
    ok = ok && e2 <= 0.03 && e2 < e1;
  }
  verdict(9, "total curvature against the closed form", ok);
}

void criterion10() {
  const PuncturedSphere sphere({0.0}, true);
  const WeierstrassTriple a{sphere, {OneForm::monomial(-2), OneForm::constant_dz(I), OneForm::monomial(-1)}, 1.0};
  const WeierstrassTriple b{sphere, {OneForm::monomial(-2), OneForm::monomial(-2) + OneForm::constant_dz(I), OneForm::monomial(-1)}, 1.0};
  const WeierstrassTriple c{sphere, {OneForm::monomial(-2), OneForm::monomial(-2, I) + OneForm::constant_dz(I), OneForm::monomial(-1)}, 1.0};
  using T = std::array<int, 3>;
  struct Case {
    const char* name;
    const WeierstrassTriple* t;
    T at0, atinf;
  };
  bool ok = true;
  for (const auto& k : {Case{"prototype a", &a, {0, 1, 2}, {0, 1, 2}}, Case{"prototype b", &b, {0, 1, 2}, {0, 1, 2}},
                        Case{"prototype c", &c, {1, 2, 2}, {0, 1, 2}}}) {
    const T t0 = classify_end(*k.t, 0.0).type_tuple, ti = classify_end(*k.t, std::nullopt).type_tuple;
    note("%s: z=0 (%d,%d,%d), infinity (%d,%d,%d)", k.name, t0[0], t0[1], t0[2], ti[0], ti[1], ti[2]);
    ok = ok && t0 == k.at0 && ti == k.atinf;
  }
  verdict(10, "end classification of the prototype data", ok);
}

}  // namespace

int main() {
  setenv("HARMSURF_THREADS", "1", 0);
  const QuadratureConfig cfg;
  auto guarded = [](int id, const char* name, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      note("error: %s", e.what());
      verdict(id, name, false);
    }
  };
  guarded(1, "lambda reproduction, eight-root genus-two data", [&] { criterion1(cfg); });
  guarded(2, "lambda reproduction, half-circle genus-two data", [&] { criterion2(cfg); });
  guarded(3, "Scherk examples lambda reproduction", [&] { criterion3(cfg); });
  guarded(4, "minimal Scherk parameters and conformality", [&] { criterion4(cfg); });
  guarded(5, "stacked planes n=2", [&] { criterion5(cfg); });
  guarded(6, "torus closure and end order", [&] { criterion6(cfg); });
  guarded(7, "theta quasi-periodicity", [] { criterion7(); });
  guarded(8, "harmonicity", [] { criterion8(); });
  guarded(9, "total curvature", [] { criterion9(); });
  guarded(10, "end classification", [] { criterion10(); });
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
