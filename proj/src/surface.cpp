#include "harmsurf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "harmsurf/parallel.hpp"

namespace harmsurf {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Features that a route must keep away from, with lattice translates near the
// segment for a torus.
std::vector<cplx> route_features(const Domain& domain, cplx a, cplx b) {
  if (const auto* torus = std::get_if<RectTorus>(&domain)) {
    std::vector<cplx> out;
    const cplx tau = torus->tau();
    const double reach = std::abs(b - a) + 2.0 * std::abs(tau) + 2.0;
    const int mx = static_cast<int>(std::ceil(reach)) + 1;
    const int my = static_cast<int>(std::ceil(reach / tau.imag())) + 1;
    const cplx mid = 0.5 * (a + b);
    for (const cplx& p : torus->punctures())
      for (int i = -mx; i <= mx; ++i)
        for (int j = -my; j <= my; ++j) {
          const cplx q = p + double(i) + double(j) * tau;
          if (std::abs(q - mid) <= 0.5 * std::abs(b - a) + 1.0) out.push_back(q);
        }
    return out;
  }
  return finite_features(domain);
}

// Straight segment with half-circle style detours around nearby features.
std::vector<PathPiece> detoured_segment(const std::vector<cplx>& features, cplx a, cplx b) {
  const cplx d = b - a;
  const double L = std::abs(d);
  if (L == 0) return {};
  struct Detour {
    double s_in, s_out;
    PathPiece arc;
  };
  std::vector<Detour> detours;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const cplx f = features[i];
    double room = std::min({0.5, std::abs(f - a), std::abs(f - b)});
    for (std::size_t j = 0; j < features.size(); ++j)
      if (j != i) room = std::min(room, 0.5 * std::abs(f - features[j]));
    const double r = 0.5 * room;
    if (r <= 0) throw DomainError("route passes through a puncture");
    const double s = ((f - a) * std::conj(d)).real() / (L * L);
    const double dist = std::abs(f - (a + s * d));
    if (s <= 0 || s >= 1 || dist >= r) continue;
    const double half = std::sqrt(r * r - dist * dist) / L;
    const double s_in = s - half, s_out = s + half;
    const cplx p_in = a + s_in * d, p_out = a + s_out * d;
    const double th0 = std::arg(p_in - f);
    double dth = std::arg((p_out - f) / (p_in - f));
    if (dist == 0) dth = pi;
    detours.push_back({s_in, s_out, PathPiece::arc(f, r, th0, th0 + dth)});
  }
  std::sort(detours.begin(), detours.end(), [](const Detour& x, const Detour& y) { return x.s_in < y.s_in; });
  std::vector<PathPiece> out;
  cplx cur = a;
  for (const auto& det : detours) {
    out.push_back(PathPiece::line(cur, det.arc.start));
    out.push_back(det.arc);
    cur = det.arc.end;
  }
  out.push_back(PathPiece::line(cur, b));
  return out;
}

// +1 for the upper half plane (including the upper bank), -1 otherwise.
int side(cplx z) { return (z.imag() > 0 || (z.imag() == 0 && !std::signbit(z.imag()))) ? 1 : -1; }

std::vector<PathPiece> curve_route(const HyperellipticCurve& c, cplx a, cplx b) {
  const bool ra = a.imag() == 0, rb = b.imag() == 0;
  const Bank ba = std::signbit(a.imag()) ? Bank::lower : Bank::upper;
  const Bank bb = std::signbit(b.imag()) ? Bank::lower : Bank::upper;
  if (a == b) return {};
  if (side(a) == side(b)) {
    if (!(ra && rb)) {
      PathPiece p = PathPiece::line(a, b, ra ? ba : bb);
      return {p};
    }
    const double sgn = side(a);
    const cplx apex = 0.5 * (a + b) + cplx(0.0, sgn * (0.5 * std::abs(b - a) + 0.5));
    return {PathPiece::line(a, apex, ba), PathPiece::line(apex, b, bb)};
  }
  double far = 1.0;
  for (double x : c.branch_points()) far = std::max(far, std::abs(x));
  for (const cplx& p : c.punctures()) far = std::max(far, std::abs(p));
  const double X = 2.0 * far + 1.0;
  const double sa = side(a);
  const cplx u(X, sa), v(X, -sa);
  return {PathPiece::line(a, u, ba), PathPiece::line(u, v), PathPiece::line(v, b, bb)};
}

}  // namespace

HarmonicMapEval HarmonicMapEval::create(WeierstrassTriple triple, std::vector<Cycle> cycles,
                                        std::vector<PeriodCondition> conditions, Vec3 base_value,
                                        QuadratureConfig cfg) {
  HarmonicMapEval e;
  e.residual_ = verify_conditions(triple, cycles, conditions, cfg);
  if (!(e.residual_ < 1e-7)) {
    std::ostringstream os;
    os << "periods not closed: residual " << e.residual_;
    throw ClosureError(os.str());
  }
  e.triple_ = std::move(triple);
  e.base_value_ = base_value;
  e.cfg_ = cfg;
  return e;
}

HarmonicMapEval HarmonicMapEval::unchecked(WeierstrassTriple triple, Vec3 base_value, QuadratureConfig cfg) {
  HarmonicMapEval e;
  e.triple_ = std::move(triple);
  e.base_value_ = base_value;
  e.cfg_ = cfg;
  return e;
}

std::vector<PathPiece> HarmonicMapEval::route(cplx from, cplx to) const {
  if (const auto* c = std::get_if<HyperellipticCurve>(&triple_.domain)) {
    if (c->is_branch_point(from, 0) && c->is_branch_point(to, 0) && from == to) return {};
    return curve_route(*c, from, to);
  }
  return detoured_segment(route_features(triple_.domain, from, to), from, to);
}

Vec3 HarmonicMapEval::integrate(std::span<const PathPiece> path) const {
  return real_part(integrate_triple(triple_, path, cfg_));
}

Vec3 HarmonicMapEval::operator()(cplx z) const {
  const auto path = route(z);
  return base_value_ + integrate(path);
}

Vec3 gauss_map(const FormValues& w) {
  const Vec3 v{(w[1] * std::conj(w[2])).imag(), (w[2] * std::conj(w[0])).imag(),
               (w[0] * std::conj(w[1])).imag()};
  const double n = norm(v);
  const double scale = std::norm(w[0]) + std::norm(w[1]) + std::norm(w[2]);
  if (!(n > 1e-14 * scale) || !std::isfinite(n)) {
    std::ostringstream os;
    os.precision(3);
    os << "Gauss map undefined: Im vector (" << v[0] << ", " << v[1] << ", " << v[2] << ")";
    throw DomainError(os.str());
  }
  return {v[0] / n, v[1] / n, v[2] / n};
}

Vec3 gauss_map(const WeierstrassTriple& triple, cplx z) { return gauss_map(triple.values(z)); }

Vec3 gauss_map_in_chart(const WeierstrassTriple& triple, const LocalChart& chart, cplx t) {
  std::array<ChartValue, 3> cv;
  int lo = std::numeric_limits<int>::max();
  for (int k = 0; k < 3; ++k) {
    cv[k] = triple.omega[k].in_chart(chart, t);
    if (cv[k].rest != 0.0) lo = std::min(lo, cv[k].power);
  }
  if (lo == std::numeric_limits<int>::max()) throw DomainError("Gauss map undefined: all forms vanish");
  // A common factor t^lo does not change the normal.
  FormValues w;
  for (int k = 0; k < 3; ++k) {
    const int p = cv[k].power - lo;
    w[k] = cv[k].rest == 0.0 ? cplx(0.0) : (p == 0 ? cv[k].rest : cv[k].rest * std::pow(t, p));
  }
  return gauss_map(w);
}

// Ends ----------------------------------------------------------------------

namespace {

double end_room(const WeierstrassTriple& triple, cplx p) {
  double near = inf;
  if (const auto* torus = std::get_if<RectTorus>(&triple.domain)) {
    const cplx tau = torus->tau();
    for (const cplx& q : torus->punctures()) {
      const double d = torus->lattice_distance(p, q);
      near = std::min(near, d > 1e-12 ? d : std::min(1.0, tau.imag()));
    }
    return near;
  }
  for (const cplx& q : finite_features(triple.domain)) {
    const double d = std::abs(p - q);
    if (d > 1e-12) near = std::min(near, d);
  }
  for (const auto& form : triple.omega)
    for (const cplx& q : form.singular_points()) {
      const double d = std::abs(p - q);
      if (d > 1e-12) near = std::min(near, d);
    }
  return near;
}

double far_extent(const WeierstrassTriple& triple) {
  double far = 1.0;
  for (const cplx& q : finite_features(triple.domain)) far = std::max(far, std::abs(q));
  for (const auto& form : triple.omega)
    for (const cplx& q : form.singular_points()) far = std::max(far, std::abs(q));
  return far;
}

int real_nullity(const std::vector<std::array<cplx, 3>>& rows) {
  if (rows.empty()) return 3;
  Eigen::MatrixXd M(static_cast<Eigen::Index>(2 * rows.size()), 3);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int k = 0; k < 3; ++k) {
      M(2 * r, k) = rows[r][k].real();
      M(2 * r + 1, k) = rows[r][k].imag();
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-8) ++rank;
  return 3 - rank;
}

}  // namespace

EndDescriptor classify_end(const WeierstrassTriple& triple, std::optional<cplx> puncture) {
  constexpr int depth = 8;
  EndDescriptor out;
  out.puncture = puncture;
  const LocalChart chart = chart_at(triple.domain, puncture);
  double rz;
  if (puncture) {
    rz = std::min(0.5, 0.25 * end_room(triple, *puncture));
  } else {
    rz = 0.25 / far_extent(triple);
  }
  const double rt = chart.branched ? std::sqrt(rz) : rz;

  // principal[j-1][k]: coefficient of t^-j of form k, scaled by r^-j and by
  // the form's sample maximum.
  std::vector<std::array<cplx, 3>> principal(depth);
  for (int k = 0; k < 3; ++k) {
    const LaurentModes m = laurent_modes(triple.omega[k], chart, rt, -depth, -1);
    int order = 0;
    for (int j = 1; j <= depth; ++j) {
      const cplx c = m.sample_max > 0 ? m.modes[static_cast<std::size_t>(-j + depth)] / m.sample_max : 0.0;
      principal[j - 1][k] = std::abs(c) > 1e-8 ? c : cplx(0.0);
      if (std::abs(c) > 1e-8) order = j;
    }
    out.pole_orders[k] = order;
  }
  out.order = *std::max_element(out.pole_orders.begin(), out.pole_orders.end());

  // d(m): real combinations with pole order at most m.
  auto nullity = [&](int m) {
    std::vector<std::array<cplx, 3>> rows;
    for (int j = m + 1; j <= depth; ++j) rows.push_back(principal[j - 1]);
    return real_nullity(rows);
  };
  for (int i = 1; i <= 3; ++i) {
    int m = 0;
    while (m < out.order && nullity(m) < i) ++m;
    out.type_tuple[i - 1] = m;
  }

  // Radial ladder of the Gauss map, extrapolated in the radius.
  constexpr int angles = 8, rungs = 7;
  // The ladder starts at 1e-2 unless a neighbouring feature is closer.
  const double r0 = std::min(1e-2, rt);
  std::vector<Vec3> limits;
  double worst = 0;
  bool failed = false;
  for (int a = 0; a < angles && !failed; ++a) {
    const cplx dir = std::polar(1.0, 2 * pi * (a + 0.37) / angles);
    std::vector<Vec3> n;
    try {
      for (int k = 0; k < rungs; ++k) n.push_back(gauss_map_in_chart(triple, chart, r0 * std::ldexp(1.0, -k) * dir));
    } catch (const DomainError& e) {
      out.note = e.what();
      failed = true;
      break;
    }
    const Vec3 prev = 2.0 * n[rungs - 2] - n[rungs - 3], cur = 2.0 * n[rungs - 1] - n[rungs - 2];
    worst = std::max(worst, max_abs(cur - prev));
    limits.push_back(cur * (1.0 / norm(cur)));
  }
  if (!failed) {
    for (const auto& l : limits) worst = std::max(worst, max_abs(l - limits.front()));
    if (worst <= 1e-4) {
      out.limiting_normal = limits.front();
    } else {
      std::ostringstream os;
      os << "no limiting normal: radial values spread by " << worst;
      out.note = os.str();
    }
  }
  return out;
}

double conformality_defect(const WeierstrassTriple& triple, std::span<const cplx> probes) {
  double worst = 0;
  for (const cplx& z : probes) {
    const FormValues w = triple.values(z);
    const double den = std::norm(w[0]) + std::norm(w[1]) + std::norm(w[2]);
    if (den == 0) continue;
    worst = std::max(worst, std::abs(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]) / den);
  }
  return worst;
}

// Harmonicity ---------------------------------------------------------------

double feature_clearance(const WeierstrassTriple& t, cplx z) {
  double near = nearest_feature_distance(t.domain, z);
  if (!std::holds_alternative<RectTorus>(t.domain))
    for (const auto& form : t.omega)
      for (const cplx& q : form.singular_points()) near = std::min(near, std::abs(z - q));
  if (const auto* c = std::get_if<HyperellipticCurve>(&t.domain))
    for (const auto& s : c->slit_intervals()) {
      const double x = std::clamp(z.real(), s.lo, s.hi);
      if (std::isfinite(x)) near = std::min(near, std::abs(z - x));
    }
  return near;
}

namespace {

// 5-point Laplacian per coordinate, differences taken as local integrals.
Vec3 laplacian(const WeierstrassTriple& t, cplx z, double h) {
  const auto& gl = detail::gauss_legendre_unit(20);
  const cplx steps[4] = {h, -h, cplx(0, h), cplx(0, -h)};
  Vec3 acc;
  for (const cplx& d : steps) {
    FormValues s{};
    for (const auto& [x, w] : gl) {
      const FormValues v = t.values(z + x * d);
      for (int k = 0; k < 3; ++k) s[k] += w * v[k];
    }
    for (int k = 0; k < 3; ++k) acc[k] += (s[k] * d).real();
  }
  return acc * (1.0 / (h * h));
}

std::vector<double> probe_residuals(const HarmonicMapEval& eval, std::span<const cplx> probes, double h) {
  std::vector<double> out(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double c = feature_clearance(eval.triple(), probes[i]);
    if (!(c > 4 * h)) {
      std::ostringstream os;
      os << "probe (" << probes[i].real() << ", " << probes[i].imag() << ") has clearance " << c
         << " < 4h";
      throw DomainError(os.str());
    }
  }
  parallel_for(probes.size(), [&](std::size_t i) { out[i] = max_abs(laplacian(eval.triple(), probes[i], h)); });
  return out;
}

}  // namespace

double harmonicity_residual(const HarmonicMapEval& eval, std::span<const cplx> probes, double h) {
  double worst = 0;
  for (double r : probe_residuals(eval, probes, h)) worst = std::max(worst, r);
  return worst;
}

double harmonicity_mean(const HarmonicMapEval& eval, std::span<const cplx> probes, double h) {
  const auto r = probe_residuals(eval, probes, h);
  double s = 0;
  for (double x : r) s += x;
  return r.empty() ? 0.0 : s / double(r.size());
}

double harmonicity_residual(const std::function<Vec3(cplx)>& f, std::span<const cplx> probes, double h) {
  double worst = 0;
  for (const cplx& z : probes) {
    const Vec3 lap = (f(z + h) + f(z - h) + f(z + cplx(0, h)) + f(z - cplx(0, h)) - 4.0 * f(z)) * (1.0 / (h * h));
    worst = std::max(worst, max_abs(lap));
  }
  return worst;
}

// Curvature -----------------------------------------------------------------

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

std::map<EdgeKey, int> edge_counts(const SurfaceMesh& m) {
  std::map<EdgeKey, int> out;
  for (const auto& f : m.faces)
    for (int i = 0; i < 3; ++i) ++out[edge(f[i], f[(i + 1) % 3])];
  return out;
}

double corner_angle(const Vec3& p, const Vec3& q, const Vec3& r) {
  const Vec3 u = q - p, v = r - p;
  return std::atan2(norm(cross(u, v)), dot(u, v));
}

// Angle sums per vertex and a boundary flag per vertex.
void angle_sums(const SurfaceMesh& m, std::vector<double>& sums, std::vector<char>& boundary) {
  sums.assign(m.vertices.size(), 0.0);
  boundary.assign(m.vertices.size(), 0);
  for (const auto& f : m.faces)
    for (int i = 0; i < 3; ++i)
      sums[f[i]] += corner_angle(m.vertices[f[i]], m.vertices[f[(i + 1) % 3]], m.vertices[f[(i + 2) % 3]]);
  for (const auto& [e, c] : edge_counts(m)) {
    if (c > 2) throw MeshError("non-manifold edge in mesh");
    if (c == 1) boundary[e.first] = boundary[e.second] = 1;
  }
}

}  // namespace

double SurfaceMesh::interior_angle_defect() const {
  std::vector<double> sums;
  std::vector<char> boundary;
  angle_sums(*this, sums, boundary);
  std::vector<char> used(vertices.size(), 0);
  for (const auto& f : faces)
    for (int v : f) used[v] = 1;
  double total = 0;
  for (std::size_t v = 0; v < vertices.size(); ++v)
    if (used[v] && !boundary[v]) total += 2 * pi - sums[v];
  return total;
}

double SurfaceMesh::boundary_turning() const {
  std::vector<double> sums;
  std::vector<char> boundary;
  angle_sums(*this, sums, boundary);
  double total = 0;
  for (std::size_t v = 0; v < vertices.size(); ++v)
    if (boundary[v]) total += pi - sums[v];
  return total;
}

int SurfaceMesh::euler_characteristic() const {
  std::vector<char> used(vertices.size(), 0);
  for (const auto& f : faces)
    for (int v : f) used[v] = 1;
  const long V = std::count(used.begin(), used.end(), 1);
  const long E = static_cast<long>(edge_counts(*this).size());
  return static_cast<int>(V - E + static_cast<long>(faces.size()));
}

int SurfaceMesh::boundary_loops() const {
  std::map<int, std::vector<int>> next;
  for (const auto& [e, c] : edge_counts(*this))
    if (c == 1) {
      next[e.first].push_back(e.second);
      next[e.second].push_back(e.first);
    }
  std::map<int, char> seen;
  int loops = 0;
  for (const auto& [v, _] : next) {
    if (seen[v]) continue;
    ++loops;
    std::vector<int> stack{v};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      if (seen[u]) continue;
      seen[u] = 1;
      for (int w : next[u])
        if (!seen[w]) stack.push_back(w);
    }
  }
  return loops;
}

double total_curvature(const SurfaceMesh& mesh) {
  if (mesh.faces.empty()) throw MeshError("total curvature of an empty mesh");
  return mesh.interior_angle_defect();
}

double formula_total_curvature(int chi, std::span<const int> end_orders) {
  double s = 0;
  for (int n : end_orders) s += n - 1;
  return 2 * pi * chi - 2 * pi * s;
}

double corrected_total_curvature(int chi, std::span<const int> end_orders) {
  double s = 0;
  for (int n : end_orders) s += n;
  return 2 * pi * chi - 2 * pi * s;
}

}  // namespace harmsurf
