#include "harmsurf/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace harmsurf {

namespace {

constexpr const char* family_names[] = {"stacked-planes", "genus-two-ends", "genus-two-ends-023",
                                        "scherk-outward", "scherk-inward",  "scherk-minimal",
                                        "torus-end"};

OneForm double_pole(double at, double coefficient) {
  return OneForm::rational({1.0}, {{cplx(at, 0.0), 2}}, coefficient);
}

OneForm simple_pole(double at, double coefficient) {
  return OneForm::rational({1.0}, {{cplx(at, 0.0), 1}}, coefficient);
}

bool clear_of(const HyperellipticCurve& c, cplx z) {
  if (c.on_slit(z)) return false;
  return nearest_feature_distance(Domain(c), z) > 0.05;
}

}  // namespace

const char* to_string(FamilyKind kind) { return family_names[static_cast<int>(kind)]; }

FamilyKind family_from_string(const std::string& name) {
  for (int i = 0; i < 7; ++i)
    if (name == family_names[i]) return static_cast<FamilyKind>(i);
  throw ConfigError("unknown family '" + name + "'");
}

WeierstrassTriple build_stacked_planes(int n) {
  if (n < 1) throw ConfigError("stacked planes: n must be at least 1");
  std::vector<cplx> punctures{0.0};
  for (int k = 1; k <= n; ++k) {
    punctures.emplace_back(-k, 0.0);
    punctures.emplace_back(k, 0.0);
  }
  WeierstrassTriple t;
  t.domain = PuncturedSphere(punctures, false);
  t.base_point = cplx(0.0, 0.5);
  OneForm w1 = double_pole(0, 1), w2 = double_pole(0, 1);
  for (int k = 1; k <= n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    w1 = w1 + double_pole(k, sign) + double_pole(-k, sign);
    w2 = w2 + double_pole(k, 1) + double_pole(-k, 1);
  }
  t.omega[0] = w1;
  t.omega[1] = I * w2;
  t.omega[2] = simple_pole(-n, 1) - simple_pole(n, 1);
  return t;
}

PeriodSystem build_genus_two_ends(const std::vector<double>& a, End3Variant variant) {
  if (a.size() % 2 != 0) throw ConfigError("genus-two-ends: the a-list must have even length");
  OneForm w3 = OneForm::monomial(-1);
  if (variant == End3Variant::pole1plus2) w3 = w3 + OneForm::monomial(-2);
  PeriodSystem sys;
  if (a.empty()) {
    sys.triple.domain = PuncturedSphere({0.0}, true);
    sys.triple.omega = {OneForm::monomial(-2), OneForm::constant_dz(I), w3};
    sys.triple.base_point = 1.0;
    sys.cycles = canonical_cycles(sys.triple.domain);
    return sys;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || a[i] == 0.0) throw ConfigError("genus-two-ends: a_k must be finite and nonzero");
    for (std::size_t j = 0; j < i; ++j)
      if (a[i] == a[j]) throw ConfigError("genus-two-ends: coincident parameters");
  }
  std::vector<double> odd, even{0.0}, roots{0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    (i % 2 == 0 ? odd : even).push_back(a[i]);
    roots.push_back(a[i]);
  }
  std::vector<double> odd_den{0.0};
  odd_den.insert(odd_den.end(), odd.begin(), odd.end());
  std::vector<double> even_num(even.begin() + 1, even.end());

  HyperellipticCurve curve(roots);
  curve.with_cycle_chain(roots);
  sys.triple.domain = curve;
  sys.triple.omega[0] = OneForm::sqrt_product(0, odd, even);
  sys.triple.omega[1] = OneForm::sqrt_product(-1, even_num, odd_den, I);
  sys.triple.omega[2] = w3;
  sys.triple.base_point = 2.0 * std::max(1.0, *std::max_element(a.begin(), a.end()));
  if (!clear_of(curve, sys.triple.base_point)) sys.triple.base_point += I;
  sys.cycles = canonical_cycles(sys.triple.domain);
  const int n = static_cast<int>(a.size() / 2);
  for (int form = 0; form < 2; ++form)
    for (int j = 0; j < n; ++j) {
      OneForm basis = holomorphic_basis_form(curve, j);
      sys.slots.push_back({form, form == 0 ? basis : I * basis});
    }
  for (int c = 0; c < static_cast<int>(sys.cycles.size()); ++c)
    for (int form = 0; form < 2; ++form) sys.conditions.push_back({c, form, 0.0});
  return sys;
}

double scherk_b1(const std::array<double, 5>& a, ScherkOrientation orientation) {
  if (orientation == ScherkOrientation::outward) return -a[0] * a[2] * a[4] / (a[1] * a[3]);
  return -a[0] * a[3] * a[4] / (a[1] * a[2]);
}

GaussMapSpec scherk_gauss_map(const std::array<double, 5>& a, ScherkOrientation orientation) {
  const double b1 = scherk_b1(a, orientation);
  GaussMapSpec g;
  if (orientation == ScherkOrientation::outward) {
    g.numerator_roots = {a[0], a[2], a[4]};
    g.denominator_roots = {a[1], a[3], b1};
  } else {
    g.numerator_roots = {a[0], a[3], a[4]};
    g.denominator_roots = {a[1], a[2], b1};
  }
  return g;
}

PeriodSystem build_scherk(const std::array<double, 5>& a, ScherkOrientation orientation) {
  if (!(a[0] > 0)) throw ConfigError("scherk: need 0 < a1");
  for (int i = 0; i < 4; ++i)
    if (!(a[i] < a[i + 1])) throw ConfigError("scherk: need a1 < a2 < a3 < a4 < a5");
  const double b1 = scherk_b1(a, orientation);
  HyperellipticCurve curve({a[0], a[1], a[2], a[3], a[4], b1}, {0.0}, true);
  curve.with_cycle_chain({a[0], a[1], a[2], a[3], a[4]});
  const GaussMapSpec g = scherk_gauss_map(a, orientation);
  const cplx g0 = g(detail::with_bank(0.0, Bank::upper));
  if (std::abs(g0 - I) > 1e-10) {
    std::ostringstream os;
    os << "scherk: g(0) = " << g0.real() << (g0.imag() < 0 ? "" : "+") << g0.imag() << "i, expected i";
    throw DomainError(os.str());
  }
  const cplx base = clear_of(curve, 1.0) ? cplx(1.0) : cplx(1.0, 1.0);
  PeriodSystem sys;
  sys.triple = triple_from_gauss_map(curve, g, OneForm::monomial(-1), base);
  sys.cycles = canonical_cycles(sys.triple.domain);
  for (int form = 0; form < 2; ++form)
    for (int j = 0; j < 2; ++j) sys.slots.push_back({form, holomorphic_basis_form(curve, j)});
  for (int c = 0; c < 4; ++c)
    for (int form = 0; form < 2; ++form) {
      double target = 0;
      if (orientation == ScherkOrientation::inward && form == 1) {
        if (c == 1) target = pi;
        if (c == 3) target = -pi;
      }
      sys.conditions.push_back({c, form, target});
    }
  return sys;
}

namespace {

struct Divisor {
  std::vector<ThetaFactor> zeros, poles;
};

// Zero and pole sums must balance for the quotient to live on the torus.
void check_balance(const Divisor& d, cplx tau) {
  int za = 0, pb = 0;
  cplx moment = 0;
  for (const auto& f : d.zeros) {
    za += f.order;
    moment += double(f.order) * f.shift;
  }
  for (const auto& f : d.poles) {
    pb += f.order;
    moment -= double(f.order) * f.shift;
  }
  // moment = p + q tau with p, q real; q must vanish and p be an integer.
  const double q = moment.imag() / tau.imag();
  const double p = moment.real() - q * tau.real();
  const bool ok = za == pb && std::abs(q - std::round(q)) < 1e-12 && std::abs(p - std::round(p)) < 1e-12 &&
                  (za - pb) % 2 == 0;
  if (!ok) {
    std::ostringstream os;
    os << "theta quotient is not doubly periodic: orders " << za << "/" << pb << ", divisor sum "
       << moment.real() << (moment.imag() < 0 ? "" : "+") << moment.imag() << "i";
    throw DomainError(os.str());
  }
  // A nonzero integer q would need an extra exp factor; not used by these families.
  if (std::abs(q) > 1e-12) throw DomainError("theta quotient needs an exponential factor");
}

OneForm quotient(const Divisor& d, cplx tau, cplx c) {
  check_balance(d, tau);
  return OneForm::theta_quotient(d.zeros, d.poles, tau, c);
}

}  // namespace

WeierstrassTriple torus_end_data(cplx tau, cplx e, TorusVariant variant) {
  RectTorus torus(tau, {e});
  const cplx s(0.0, 0.6);
  const Divisor d12{{{e + s, 1}, {e - s, 1}}, {{e, 2}}};
  WeierstrassTriple t;
  t.domain = torus;
  t.omega[0] = quotient(d12, tau, 1.0);
  t.omega[1] = quotient(d12, tau, I);
  switch (variant) {
    case TorusVariant::half:
      t.omega[2] = quotient({{{1.0 + s, 1}, {-s, 1}, {0.0, 2}}, {{e, 4}}}, tau, I) +
                   quotient({{{e + s, 1}, {-s, 1}, {0.0, 1}}, {{e, 3}}}, tau, I) -
                   quotient(d12, tau, I);
      break;
    case TorusVariant::third:
      t.omega[2] = quotient({{{1.0 + s, 1}, {e - s, 1}, {0.0, 2}}, {{e, 4}}}, tau, I);
      break;
    case TorusVariant::third_literal:
      t.omega[2] = quotient({{{1.0 + s, 1}, {e - s, 1}, {0.0, 2}}, {{0.5, 4}}}, tau, I);
      break;
  }
  // Base point: the quarter-lattice point farthest from the end.
  double best = -1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const cplx z = 0.25 * i + (0.25 * j) * tau;
      const double d = torus.lattice_distance(z, e);
      if (d > best + 1e-12) {
        best = d;
        t.base_point = z;
      }
    }
  return t;
}

TorusClosure build_torus_end(cplx tau, cplx end, TorusVariant variant, const QuadratureConfig& cfg) {
  return close_torus_periods(torus_end_data(tau, end, variant), cfg);
}

// Specs ---------------------------------------------------------------------

FamilySpec FamilySpec::defaults(FamilyKind family) {
  FamilySpec s;
  s.family = family;
  switch (family) {
    case FamilyKind::stacked_planes:
      s.n = 2;
      break;
    case FamilyKind::genus_two_ends:
      s.a = {0.2, 0.25, 0.3, 0.4, 1.0, 2.0, 2.2, 4.0};
      break;
    case FamilyKind::genus_two_ends_023:
      s.a = {0.2, 0.25, 0.3, 0.4, -2.5, -10.0 / 3.0, -4.0, -5.0};
      break;
    case FamilyKind::scherk_outward:
      s.a = {0.04, 0.08, 0.3, 0.9, 10.0};
      break;
    case FamilyKind::scherk_inward:
      s.a = {0.0001, 0.0009, 0.006, 0.02, 10.0};
      break;
    case FamilyKind::scherk_minimal:
      s.initial = {0.1, 0.3};
      break;
    case FamilyKind::torus_end:
      s.tau = cplx(0.0, 1.2);
      s.end = 0.5;
      s.torus_variant = TorusVariant::half;
      break;
  }
  return s;
}

namespace {

std::vector<double> parse_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw ConfigError("cannot parse number '" + item + "'");
    out.push_back(x);
  }
  return out;
}

// "a+bi", "bi", "a"
cplx parse_complex(std::string v) {
  v.erase(std::remove(v.begin(), v.end(), ' '), v.end());
  if (v.empty()) throw ConfigError("empty complex value");
  if (v.back() != 'i') return parse_list(v).at(0);
  v.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < v.size(); ++i)
    if ((v[i] == '+' || v[i] == '-') && v[i - 1] != 'e' && v[i - 1] != 'E') split = i;
  if (split == std::string::npos) {
    if (v.empty() || v == "+") return I;
    if (v == "-") return -I;
    return cplx(0.0, parse_list(v).at(0));
  }
  const double re = parse_list(v.substr(0, split)).at(0);
  std::string im = v.substr(split);
  double imv = im == "+" ? 1.0 : im == "-" ? -1.0 : parse_list(im).at(0);
  return {re, imv};
}

TorusVariant torus_variant_from(const std::string& v) {
  if (v == "half") return TorusVariant::half;
  if (v == "third") return TorusVariant::third;
  if (v == "third-literal") return TorusVariant::third_literal;
  throw ConfigError("unknown torus variant '" + v + "'");
}

const char* to_string(TorusVariant v) {
  switch (v) {
    case TorusVariant::half: return "half";
    case TorusVariant::third: return "third";
    case TorusVariant::third_literal: return "third-literal";
  }
  return "?";
}

}  // namespace

void FamilySpec::apply(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("parameter '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq), value = assignment.substr(eq + 1);
  auto integer = [&]() {
    const double x = parse_list(value).at(0);
    if (x != std::floor(x)) throw ConfigError(key + " must be an integer");
    return static_cast<int>(x);
  };
  if (key == "n") n = integer();
  else if (key == "a") a = parse_list(value);
  else if (key == "tau") tau = parse_complex(value);
  else if (key == "end") end = parse_complex(value);
  else if (key == "variant") torus_variant = torus_variant_from(value);
  else if (key == "initial") {
    const auto v = parse_list(value);
    if (v.size() != 2) throw ConfigError("initial needs two values a1,a2");
    initial = {v[0], v[1]};
  } else if (key == "resolution") mesh.resolution = integer();
  else if (key == "clearance") mesh.clearance = parse_list(value).at(0);
  else if (key == "copies") mesh.copies = integer();
  else if (key == "tol") quadrature.abs_tol = quadrature.rel_tol = parse_list(value).at(0);
  else throw ConfigError("unknown parameter '" + key + "'");
}

void FamilySpec::validate() const {
  switch (family) {
    case FamilyKind::stacked_planes:
      if (n < 1) throw ConfigError("stacked-planes: n must be at least 1");
      break;
    case FamilyKind::genus_two_ends:
    case FamilyKind::genus_two_ends_023:
      if (a.size() % 2) throw ConfigError("genus-two-ends: a must have even length");
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0 || !std::isfinite(a[i])) throw ConfigError("genus-two-ends: a_k must be finite and nonzero");
        for (std::size_t j = 0; j < i; ++j)
          if (a[i] == a[j]) throw ConfigError("genus-two-ends: a_k must be distinct");
      }
      break;
    case FamilyKind::scherk_outward:
    case FamilyKind::scherk_inward:
      if (a.size() != 5) throw ConfigError("scherk: a must have five entries");
      if (!(a[0] > 0)) throw ConfigError("scherk: need 0 < a1");
      for (int i = 0; i < 4; ++i)
        if (!(a[i] < a[i + 1])) throw ConfigError("scherk: a must be increasing");
      break;
    case FamilyKind::scherk_minimal:
      if (!(initial.first > 0 && initial.first < initial.second && initial.second < 1))
        throw ConfigError("scherk-minimal: need 0 < a1 < a2 < 1");
      break;
    case FamilyKind::torus_end: {
      if (!(tau.imag() > 0)) throw ConfigError("torus-end: Im tau must be positive");
      const double q = end.imag() / tau.imag();
      const double p = end.real() - q * tau.real();
      if (std::abs(p - std::round(p)) < 1e-12 && std::abs(q - std::round(q)) < 1e-12)
        throw ConfigError("torus-end: end lies on the lattice");
      break;
    }
  }
  if (mesh.resolution < 4) throw ConfigError("resolution must be at least 4");
  if (!(mesh.clearance > 0 && mesh.clearance < 0.25)) throw ConfigError("clearance must lie in (0, 0.25)");
  if (mesh.copies < 1) throw ConfigError("copies must be at least 1");
  if (!(quadrature.abs_tol > 0 && quadrature.rel_tol > 0)) throw ConfigError("tolerances must be positive");
}

FamilySpec spec_from_json(const nlohmann::json& j) {
  try {
    FamilySpec s = FamilySpec::defaults(family_from_string(j.at("family").get<std::string>()));
    if (j.contains("parameters")) {
      const auto& p = j.at("parameters");
      for (auto it = p.begin(); it != p.end(); ++it) {
        const std::string key = it.key();
        if (key == "n") s.n = it.value().get<int>();
        else if (key == "a") s.a = it.value().get<std::vector<double>>();
        else if (key == "tau" || key == "end") {
          const auto v = it.value().get<std::vector<double>>();
          if (v.size() != 2) throw ConfigError(key + " must be [re, im]");
          (key == "tau" ? s.tau : s.end) = cplx(v[0], v[1]);
        } else if (key == "variant") s.torus_variant = torus_variant_from(it.value().get<std::string>());
        else if (key == "initial") {
          const auto v = it.value().get<std::vector<double>>();
          if (v.size() != 2) throw ConfigError("initial must be [a1, a2]");
          s.initial = {v[0], v[1]};
        } else throw ConfigError("unknown parameter '" + key + "'");
      }
    }
    if (j.contains("mesh")) {
      const auto& m = j.at("mesh");
      s.mesh.resolution = m.value("resolution", s.mesh.resolution);
      s.mesh.clearance = m.value("clearance", s.mesh.clearance);
      s.mesh.copies = m.value("copies", s.mesh.copies);
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      s.quadrature.abs_tol = t.value("abs_tol", s.quadrature.abs_tol);
      s.quadrature.rel_tol = t.value("rel_tol", s.quadrature.rel_tol);
      s.quadrature.max_refinement_depth = t.value("max_refinement_depth", s.quadrature.max_refinement_depth);
    }
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed spec: ") + e.what());
  }
}

nlohmann::json spec_to_json(const FamilySpec& s) {
  nlohmann::json p = nlohmann::json::object();
  switch (s.family) {
    case FamilyKind::stacked_planes:
      p["n"] = s.n;
      break;
    case FamilyKind::genus_two_ends:
    case FamilyKind::genus_two_ends_023:
    case FamilyKind::scherk_outward:
    case FamilyKind::scherk_inward:
      p["a"] = s.a;
      break;
    case FamilyKind::scherk_minimal:
      p["initial"] = {s.initial.first, s.initial.second};
      break;
    case FamilyKind::torus_end:
      p["tau"] = {s.tau.real(), s.tau.imag()};
      p["end"] = {s.end.real(), s.end.imag()};
      p["variant"] = to_string(s.torus_variant);
      break;
  }
  return {{"family", to_string(s.family)},
          {"parameters", p},
          {"mesh", {{"resolution", s.mesh.resolution}, {"clearance", s.mesh.clearance}, {"copies", s.mesh.copies}}},
          {"tolerances",
           {{"abs_tol", s.quadrature.abs_tol},
            {"rel_tol", s.quadrature.rel_tol},
            {"max_refinement_depth", s.quadrature.max_refinement_depth}}}};
}

FamilySpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed spec: ") + e.what());
  }
  return spec_from_json(j);
}

// Instances -----------------------------------------------------------------

HarmonicMapEval FamilyInstance::map() const {
  return HarmonicMapEval::create(triple, cycles, conditions, {}, spec.quadrature);
}

namespace {

std::array<double, 5> five(const std::vector<double>& a) {
  if (a.size() != 5) throw ConfigError("scherk: a must have five entries");
  return {a[0], a[1], a[2], a[3], a[4]};
}

// Lattice of a Scherk surface: the real periods around z = 0 and z = infinity.
std::vector<Vec3> scherk_translations(const WeierstrassTriple& t) {
  Vec3 at0, atinf;
  const LocalChart inf = chart_at(t.domain, std::nullopt);
  double far = 1.0;
  for (const cplx& f : finite_features(t.domain)) far = std::max(far, std::abs(f));
  for (int k = 0; k < 3; ++k) {
    at0[k] = (2.0 * pi * I * residue(t.domain, t.omega[k], 0.0)).real();
    const auto modes = laurent_modes(t.omega[k], inf, 0.5 / far, -1, -1);
    atinf[k] = (2.0 * pi * I * modes.coefficient(-1)).real();
  }
  return {at0, atinf};
}

void close_into(FamilyInstance& inst, const PeriodSystem& sys) {
  const ClosureResult r = close_periods(sys, inst.spec.quadrature);
  inst.triple = r.triple;
  inst.cycles = sys.cycles;
  inst.conditions = sys.conditions;
  inst.lambdas = r.lambdas;
  inst.period_residual = r.residual;
}

}  // namespace

FamilyInstance build_family(const FamilySpec& spec) {
  spec.validate();
  FamilyInstance inst;
  inst.spec = spec;
  const auto& cfg = spec.quadrature;
  switch (spec.family) {
    case FamilyKind::stacked_planes: {
      inst.triple = build_stacked_planes(spec.n);
      inst.cycles = canonical_cycles(inst.triple.domain);
      for (int c = 0; c < static_cast<int>(inst.cycles.size()); ++c)
        for (int k = 0; k < 3; ++k) inst.conditions.push_back({c, k, 0.0});
      inst.period_residual = verify_conditions(inst.triple, inst.cycles, inst.conditions, cfg);
      for (int k = -spec.n; k <= spec.n; ++k) inst.ends.emplace_back(cplx(k, 0.0));
      inst.euler_characteristic = 2;
      break;
    }
    case FamilyKind::genus_two_ends:
    case FamilyKind::genus_two_ends_023: {
      const auto variant =
          spec.family == FamilyKind::genus_two_ends ? End3Variant::pole1 : End3Variant::pole1plus2;
      close_into(inst, build_genus_two_ends(spec.a, variant));
      inst.ends = {cplx(0.0), std::nullopt};
      inst.euler_characteristic = 2 - static_cast<int>(spec.a.size());
      break;
    }
    case FamilyKind::scherk_outward:
    case FamilyKind::scherk_inward:
    case FamilyKind::scherk_minimal: {
      std::array<double, 5> a{};
      ScherkOrientation o = ScherkOrientation::outward;
      if (spec.family == FamilyKind::scherk_minimal) {
        inst.minimal = solve_minimal_scherk(spec.initial, cfg);
        a = {inst.minimal->a1, inst.minimal->a2, 1.0, 1.0 / inst.minimal->a2, 1.0 / inst.minimal->a1};
        PeriodSystem sys = build_scherk(a, o);
        inst.triple = sys.triple;
        inst.cycles = sys.cycles;
        inst.conditions = sys.conditions;
        inst.period_residual = verify_conditions(inst.triple, inst.cycles, inst.conditions, cfg);
        if (inst.period_residual > 1e-8) throw ClosureError("minimal Scherk periods not closed");
      } else {
        a = five(spec.a);
        if (spec.family == FamilyKind::scherk_inward) o = ScherkOrientation::inward;
        close_into(inst, build_scherk(a, o));
      }
      inst.ends = {cplx(0.0), std::nullopt};
      inst.euler_characteristic = -2;
      inst.translations = scherk_translations(inst.triple);
      break;
    }
    case FamilyKind::torus_end: {
      inst.torus = build_torus_end(spec.tau, spec.end, spec.torus_variant, cfg);
      inst.triple = inst.torus->triple;
      inst.cycles = canonical_cycles(inst.triple.domain);
      for (int c = 0; c < 2; ++c)
        for (int k = 0; k < 3; ++k) inst.conditions.push_back({c, k, 0.0});
      inst.period_residual = inst.torus->residual;
      if (inst.period_residual > 1e-8) throw ClosureError("torus periods not closed");
      inst.ends = {spec.end};
      inst.euler_characteristic = 0;
      break;
    }
  }
  return inst;
}

}  // namespace harmsurf
