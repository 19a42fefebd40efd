#include "harmsurf/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace harmsurf {

namespace {

bool same_point(cplx a, cplx b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}

cplx on_bank(cplx z, Bank bank) { return detail::with_bank(z, bank); }

cplx int_pow(cplx t, int p) {
  cplx base = p < 0 ? 1.0 / t : t;
  int n = p < 0 ? -p : p;
  cplx acc = 1.0;
  while (n > 0) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

}  // namespace

PuncturedSphere::PuncturedSphere(std::vector<cplx> punctures, bool infinity_punctured)
    : punctures_(std::move(punctures)), infinity_punctured_(infinity_punctured) {
  for (std::size_t i = 0; i < punctures_.size(); ++i)
    for (std::size_t j = i + 1; j < punctures_.size(); ++j)
      if (same_point(punctures_[i], punctures_[j]))
        throw DomainError("punctured sphere: coincident punctures");
}

namespace detail {

cplx with_bank(cplx z, Bank bank) {
  if (z.imag() == 0.0) return {z.real(), bank == Bank::upper ? 0.0 : -0.0};
  return z;
}

std::vector<Interval> slits_of(std::vector<double> roots) {
  std::sort(roots.begin(), roots.end());
  std::vector<Interval> slits;
  const auto m = static_cast<std::ptrdiff_t>(roots.size());
  // An odd number of roots to the right of x puts x on a cut.
  for (std::ptrdiff_t hi = m - 1; hi >= 0; hi -= 2) {
    const double lo = hi - 1 >= 0 ? roots[hi - 1] : -std::numeric_limits<double>::infinity();
    slits.push_back({lo, roots[hi]});
  }
  std::reverse(slits.begin(), slits.end());
  return slits;
}

cplx sqrt_product(cplx z, std::span<const double> roots) {
  cplx acc = 1.0;
  for (double r : roots) acc *= std::sqrt(z - r);
  return acc;
}

ChartValue sqrt_product_in_chart(const LocalChart& chart, cplx t,
                                 std::span<const double> numerator_roots,
                                 std::span<const double> denominator_roots) {
  ChartValue out{1.0, 0};
  int half_powers = 0;
  auto factor = [&](double c, int sign) {
    cplx f;
    if (chart.at_infinity) {
      if (chart.branched) {
        f = std::sqrt(1.0 - c * t * t);
        out.power -= sign;
      } else {
        f = std::sqrt(1.0 - c * t);
        half_powers += sign;
      }
    } else {
      const cplx p = chart.center;
      if (same_point(p, cplx(c, 0.0), 1e-14)) {
        if (!chart.branched)
          throw DomainError("square-root factor vanishes at an unbranched chart center");
        out.power += sign;
        return;
      }
      const cplx d = on_bank(p - c, Bank::upper);
      const cplx local = chart.branched ? t * t : t;
      f = std::sqrt(d) * std::sqrt(1.0 + local / d);
    }
    out.rest = sign > 0 ? out.rest * f : out.rest / f;
  };
  for (double c : numerator_roots) factor(c, +1);
  for (double c : denominator_roots) factor(c, -1);
  if (half_powers % 2 != 0)
    throw DomainError("square-root product is not single valued at infinity");
  out.power -= half_powers / 2;
  return out;
}

}  // namespace detail

cplx ChartValue::at(cplx t) const {
  if (power == 0) return rest;
  if (t == 0.0) {
    if (power > 0) return 0.0;
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  return rest * int_pow(t, power);
}

HyperellipticCurve::HyperellipticCurve(std::vector<double> branch_points,
                                       std::vector<cplx> punctures, bool infinity_punctured)
    : sorted_(branch_points),
      chain_(std::move(branch_points)),
      punctures_(std::move(punctures)),
      infinity_punctured_(infinity_punctured) {
  if (sorted_.empty()) throw DomainError("hyperelliptic curve needs at least one branch point");
  std::sort(sorted_.begin(), sorted_.end());
  for (std::size_t i = 0; i + 1 < sorted_.size(); ++i)
    if (same_point(sorted_[i], sorted_[i + 1]))
      throw DomainError("hyperelliptic curve: coincident branch points");
  for (double b : sorted_)
    if (!std::isfinite(b)) throw DomainError("hyperelliptic curve: non-finite branch point");
  for (const cplx& p : punctures_)
    if (is_branch_point(p, 1e-12)) throw DomainError("puncture coincides with a branch point");
  slits_ = detail::slits_of(sorted_);
  const std::size_t total = sorted_.size() + (sorted_.size() % 2);
  genus_ = static_cast<int>(total / 2) - 1;
}

HyperellipticCurve& HyperellipticCurve::with_cycle_chain(std::vector<double> chain) {
  for (double c : chain)
    if (!is_branch_point(cplx(c, 0.0), 1e-12))
      throw DomainError("cycle chain entry is not a branch point");
  chain_ = std::move(chain);
  return *this;
}

bool HyperellipticCurve::is_branch_point(cplx z, double tol) const {
  return std::any_of(sorted_.begin(), sorted_.end(), [&](double b) {
    return std::abs(z - b) <= tol * std::max(1.0, std::abs(b));
  });
}

bool HyperellipticCurve::on_slit(cplx z) const {
  if (z.imag() != 0.0) return false;
  return std::any_of(slits_.begin(), slits_.end(),
                     [&](const Interval& s) { return s.contains(z.real()); });
}

cplx HyperellipticCurve::evaluate_w(cplx z) const {
  if (is_branch_point(z)) throw DomainError("evaluate_w: point is a branch point");
  if (on_slit(z)) throw DomainError("evaluate_w: point lies on a slit");
  return w_unchecked(z);
}

cplx HyperellipticCurve::w_unchecked(cplx z) const { return detail::sqrt_product(z, sorted_); }

cplx HyperellipticCurve::w_on_bank(double x, Bank bank) const {
  return w_unchecked(on_bank(cplx(x, 0.0), bank));
}

RectTorus::RectTorus(cplx tau, std::vector<cplx> punctures, double cycle_offset)
    : tau_(tau), punctures_(std::move(punctures)), cycle_offset_(cycle_offset) {
  if (!(tau_.imag() > 0)) throw DomainError("torus modulus must have positive imaginary part");
  for (const cplx& p : punctures_) {
    const double y = p.imag() / tau_.imag();
    const double x = p.real() - y * tau_.real();
    if (x < 0 || x >= 1 || y < 0 || y >= 1)
      throw DomainError("torus puncture outside the fundamental cell");
  }
  for (std::size_t i = 0; i < punctures_.size(); ++i)
    for (std::size_t j = i + 1; j < punctures_.size(); ++j)
      if (lattice_distance(punctures_[i], punctures_[j]) < 1e-12)
        throw DomainError("torus: coincident punctures");
}

cplx RectTorus::reduce(cplx z) const {
  double y = z.imag() / tau_.imag();
  double x = z.real() - y * tau_.real();
  x -= std::floor(x);
  y -= std::floor(y);
  return x + y * tau_;
}

double RectTorus::lattice_distance(cplx z, cplx p) const {
  const cplx d = z - p;
  double y = d.imag() / tau_.imag();
  double x = d.real() - y * tau_.real();
  x -= std::round(x);
  y -= std::round(y);
  double best = std::numeric_limits<double>::infinity();
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) best = std::min(best, std::abs((x + i) + (y + j) * tau_));
  return best;
}

PathPiece PathPiece::line(cplx a, cplx b, Bank bank) {
  PathPiece p;
  p.kind = Kind::line;
  p.start = a;
  p.end = b;
  p.bank = bank;
  return p;
}

PathPiece PathPiece::arc(cplx center, double radius, double theta0, double theta1) {
  PathPiece p;
  p.kind = Kind::arc;
  p.center = center;
  p.radius = radius;
  p.theta0 = theta0;
  p.theta1 = theta1;
  p.start = center + std::polar(radius, theta0);
  p.end = center + std::polar(radius, theta1);
  return p;
}

cplx PathPoint::z() const { return on_bank(base + offset, bank); }

PathPoint PathPiece::locate(double s, double s_complement) const {
  if (kind == Kind::line) {
    const cplx d = end - start;
    if (s <= 0.5) return {start, d * s, bank};
    return {end, -d * s_complement, bank};
  }
  const double span = theta1 - theta0;
  // e^{i phi} - 1 without cancellation.
  auto em1 = [](double phi) {
    const double h = std::sin(0.5 * phi);
    return cplx(-2.0 * h * h, std::sin(phi));
  };
  if (s <= 0.5) return {start, std::polar(radius, theta0) * em1(span * s), bank};
  return {end, std::polar(radius, theta1) * em1(-span * s_complement), bank};
}

cplx PathPiece::derivative(double s) const {
  if (kind == Kind::line) return end - start;
  const double span = theta1 - theta0;
  return I * std::polar(radius, theta0 + span * s) * span;
}

double PathPiece::length() const {
  if (kind == Kind::line) return std::abs(end - start);
  return radius * std::abs(theta1 - theta0);
}

const char* to_string(CycleLabel label) {
  switch (label) {
    case CycleLabel::around_puncture: return "around-puncture";
    case CycleLabel::real_segment: return "real-segment";
    case CycleLabel::half_circle: return "half-circle";
    case CycleLabel::lattice_1: return "lattice-1";
    case CycleLabel::lattice_tau: return "lattice-tau";
  }
  return "?";
}

bool Cycle::closed() const {
  return label == CycleLabel::around_puncture || label == CycleLabel::lattice_1 ||
         label == CycleLabel::lattice_tau;
}

std::string Cycle::describe() const {
  std::ostringstream os;
  os << to_string(label) << "(" << a.real();
  if (a.imag() != 0) os << (a.imag() > 0 ? "+" : "") << a.imag() << "i";
  if (label != CycleLabel::around_puncture) {
    os << ", " << b.real();
    if (b.imag() != 0) os << (b.imag() > 0 ? "+" : "") << b.imag() << "i";
  }
  os << ")";
  return os.str();
}

Cycle around_puncture_cycle(cplx puncture, double radius) {
  Cycle c;
  c.label = CycleLabel::around_puncture;
  c.a = c.b = puncture;
  c.path.push_back(PathPiece::arc(puncture, radius, 0.0, 2 * pi));
  return c;
}

Cycle real_segment_cycle(double a, double b) {
  Cycle c;
  c.label = CycleLabel::real_segment;
  const double lo = std::min(a, b), hi = std::max(a, b);
  c.a = lo;
  c.b = hi;
  auto piece = PathPiece::line(lo, hi, Bank::upper);
  piece.start_singular = piece.end_singular = true;
  c.path.push_back(piece);
  return c;
}

Cycle half_circle_cycle(double a, double b) {
  Cycle c;
  c.label = CycleLabel::half_circle;
  const double lo = std::min(a, b), hi = std::max(a, b);
  c.a = hi;
  c.b = lo;
  auto piece = PathPiece::arc(0.5 * (lo + hi), 0.5 * (hi - lo), 0.0, pi);
  piece.start = hi;
  piece.end = lo;
  piece.start_singular = piece.end_singular = true;
  c.path.push_back(piece);
  return c;
}

std::vector<cplx> finite_features(const Domain& domain) {
  return std::visit(
      [](const auto& d) -> std::vector<cplx> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HyperellipticCurve>) {
          std::vector<cplx> out(d.branch_points().begin(), d.branch_points().end());
          out.insert(out.end(), d.punctures().begin(), d.punctures().end());
          return out;
        } else {
          return d.punctures();
        }
      },
      domain);
}

double nearest_feature_distance(const Domain& domain, cplx z) {
  double best = std::numeric_limits<double>::infinity();
  if (const auto* torus = std::get_if<RectTorus>(&domain)) {
    for (const cplx& p : torus->punctures()) best = std::min(best, torus->lattice_distance(z, p));
    return best;
  }
  for (const cplx& p : finite_features(domain)) best = std::min(best, std::abs(z - p));
  return best;
}

namespace {

double distance_to_segment(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0) return std::abs(p - a);
  const double s = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + s * d));
}

std::vector<Cycle> sphere_cycles(const PuncturedSphere& s) {
  std::vector<Cycle> out;
  const auto& ps = s.punctures();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ps.size(); ++j)
      if (j != i) nearest = std::min(nearest, std::abs(ps[i] - ps[j]));
    const double radius = std::min(1.0, 0.4 * nearest);
    out.push_back(around_puncture_cycle(ps[i], radius));
  }
  return out;
}

std::vector<Cycle> curve_cycles(const HyperellipticCurve& c) {
  std::vector<Cycle> out;
  const auto& chain = c.cycle_chain();
  std::vector<double> features(c.branch_points());
  for (const cplx& p : c.punctures())
    if (p.imag() == 0) features.push_back(p.real());
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    const double a = chain[k], b = chain[k + 1];
    const double lo = std::min(a, b), hi = std::max(a, b);
    const bool blocked = std::any_of(features.begin(), features.end(),
                                     [&](double f) { return lo < f && f < hi; });
    out.push_back(blocked ? half_circle_cycle(a, b) : real_segment_cycle(a, b));
  }
  for (const Cycle& cyc : out) {
    if (cyc.label != CycleLabel::half_circle) continue;
    for (const cplx& p : c.punctures())
      if (std::abs(std::abs(p - cyc.path[0].center) - cyc.path[0].radius) < 1e-6)
        throw DomainError("half-circle cycle passes through a puncture");
  }
  return out;
}

std::vector<Cycle> torus_cycles(const RectTorus& t) {
  const cplx off = t.cycle_offset() * t.tau() / t.tau().imag() * t.tau().imag();
  const cplx h0 = I * t.cycle_offset();
  Cycle h;
  h.label = CycleLabel::lattice_1;
  h.a = h0;
  h.b = h0 + 1.0;
  h.path.push_back(PathPiece::line(h.a, h.b));
  Cycle v;
  v.label = CycleLabel::lattice_tau;
  v.a = 0.0;
  v.b = t.tau();
  v.path.push_back(PathPiece::line(v.a, v.b));
  (void)off;
  for (const Cycle* cyc : {&h, &v})
    for (const cplx& p : t.punctures())
      for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
          if (distance_to_segment(p + double(i) + double(j) * t.tau(), cyc->a, cyc->b) < 1e-6)
            throw DomainError("lattice cycle passes through a puncture; change the cycle offset");
  return {h, v};
}

}  // namespace

std::vector<Cycle> canonical_cycles(const Domain& domain) {
  return std::visit(
      [](const auto& d) -> std::vector<Cycle> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PuncturedSphere>) return sphere_cycles(d);
        else if constexpr (std::is_same_v<T, HyperellipticCurve>) return curve_cycles(d);
        else return torus_cycles(d);
      },
      domain);
}

cplx LocalChart::z_of(cplx t) const {
  if (at_infinity) return branched ? 1.0 / (t * t) : 1.0 / t;
  return branched ? center + t * t : center + t;
}

cplx LocalChart::dz_dt(cplx t) const {
  if (at_infinity) return branched ? -2.0 / (t * t * t) : -1.0 / (t * t);
  return branched ? 2.0 * t : cplx(1.0);
}

LocalChart chart_at(const Domain& domain, std::optional<cplx> point) {
  LocalChart chart;
  chart.at_infinity = !point.has_value();
  if (point) chart.center = on_bank(*point, Bank::upper);
  if (const auto* curve = std::get_if<HyperellipticCurve>(&domain)) {
    chart.branched = point ? curve->is_branch_point(*point, 1e-12) : curve->branched_at_infinity();
    if (point && chart.branched) {
      // Snap to the exact branch point so root matching is exact.
      for (double b : curve->branch_points())
        if (std::abs(*point - b) <= 1e-12 * std::max(1.0, std::abs(b))) chart.center = b;
    }
  } else if (std::holds_alternative<RectTorus>(domain) && !point) {
    throw DomainError("a torus has no point at infinity");
  }
  return chart;
}

}  // namespace harmsurf
