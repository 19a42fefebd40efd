#include "harmsurf/forms.hpp"

#include <algorithm>
#include <cmath>

namespace harmsurf {

namespace {

bool same(cplx a, cplx b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

cplx diff(const PathPoint& p, cplx r) { return detail::with_bank((p.base - r) + p.offset, p.bank); }

cplx ipow(cplx z, int k) {
  if (k == 0) return 1.0;
  cplx base = k < 0 ? 1.0 / z : z;
  cplx acc = 1.0;
  for (int n = k < 0 ? -k : k; n > 0; n >>= 1) {
    if (n & 1) acc *= base;
    base *= base;
  }
  return acc;
}

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

bool lattice_congruent(cplx d, cplx tau) {
  const double y = d.imag() / tau.imag();
  const double x = d.real() - y * tau.real();
  return std::abs(x - std::round(x)) < 1e-12 && std::abs(y - std::round(y)) < 1e-12;
}

std::vector<double> all_roots(const SqrtProductTerm& s) {
  std::vector<double> r(s.numerator_roots);
  r.insert(r.end(), s.denominator_roots.begin(), s.denominator_roots.end());
  return r;
}

bool on_cut(cplx z, const std::vector<double>& roots) {
  if (z.imag() != 0.0) return false;
  for (const Interval& iv : detail::slits_of(roots))
    if (iv.contains(z.real())) return true;
  return false;
}

// Taylor coefficients of the rational term's regular factor at a pole.
cplx rational_residue(const RationalTerm& r, cplx p) {
  int m = 0;
  for (const auto& [q, mult] : r.poles)
    if (same(q, p)) m += mult;
  if (m == 0) return 0.0;
  std::vector<cplx> series(m, 0.0);
  // numerator(p + u)
  for (std::size_t n = 0; n < r.numerator.size(); ++n) {
    double binom = 1.0;
    for (int k = 0; k < m && k <= static_cast<int>(n); ++k) {
      series[k] += r.numerator[n] * binom * ipow(p, static_cast<int>(n) - k);
      binom = binom * static_cast<double>(static_cast<int>(n) - k) / (k + 1);
    }
  }
  for (const auto& [q, mult] : r.poles) {
    if (same(q, p)) continue;
    const cplx d = p - q;
    std::vector<cplx> factor(m, 0.0);
    // (d + u)^{-mult} = d^{-mult} sum_k binom(-mult, k) (u/d)^k
    cplx c = ipow(d, -mult);
    for (int k = 0; k < m; ++k) {
      factor[k] = c;
      c *= -static_cast<double>(mult + k) / (static_cast<double>(k + 1) * d);
    }
    std::vector<cplx> prod(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; i + j < m; ++j) prod[i + j] += series[i] * factor[j];
    series = std::move(prod);
  }
  return series[m - 1];
}

struct ChartTerm {
  cplx rest;
  int power;
};

// z^k expressed in the chart.
ChartTerm power_in_chart(const LocalChart& chart, cplx t, int k) {
  const int e = chart.branched ? 2 : 1;
  if (chart.at_infinity) return {1.0, -e * k};
  if (chart.center == 0.0) return {1.0, e * k};
  return {ipow(chart.z_of(t), k), 0};
}

}  // namespace

cplx ThetaQuotientTerm::operator()(cplx z) const {
  const ThetaFunction th(tau, tol);
  cplx num = 1.0, den = 1.0;
  for (const auto& f : zeros) num *= ipow(th(z - f.shift), f.order);
  for (const auto& f : poles) den *= ipow(th(z - f.shift), f.order);
  if (den == 0.0) throw DomainError("theta quotient evaluated at a pole");
  return num / den;
}

OneForm OneForm::rational(std::vector<cplx> numerator, std::vector<std::pair<cplx, int>> poles,
                          cplx coefficient) {
  return OneForm({Term{coefficient, RationalTerm{std::move(numerator), std::move(poles)}}});
}

OneForm OneForm::monomial(int power, cplx coefficient) {
  if (power >= 0) {
    std::vector<cplx> num(power + 1, 0.0);
    num[power] = 1.0;
    return rational(std::move(num), {}, coefficient);
  }
  return rational({1.0}, {{0.0, -power}}, coefficient);
}

OneForm OneForm::sqrt_product(int z_power, std::vector<double> numerator_roots,
                              std::vector<double> denominator_roots, cplx coefficient) {
  return OneForm({Term{coefficient, SqrtProductTerm{z_power, std::move(numerator_roots),
                                                    std::move(denominator_roots)}}});
}

OneForm OneForm::theta_quotient(std::vector<ThetaFactor> zeros, std::vector<ThetaFactor> poles,
                                cplx tau, cplx coefficient) {
  return OneForm(
      {Term{coefficient, ThetaQuotientTerm{std::move(zeros), std::move(poles), tau, 1e-14}}});
}

OneForm OneForm::constant_dz(cplx coefficient) { return OneForm({Term{coefficient, ConstantDzTerm{}}}); }

OneForm OneForm::operator+(const OneForm& other) const {
  std::vector<Term> t(terms_);
  t.insert(t.end(), other.terms_.begin(), other.terms_.end());
  return OneForm(std::move(t));
}

OneForm OneForm::operator-(const OneForm& other) const { return *this + (-1.0) * other; }

OneForm operator*(cplx c, const OneForm& f) {
  std::vector<Term> t(f.terms_);
  for (Term& term : t) term.coefficient *= c;
  return OneForm(std::move(t));
}

cplx OneForm::at(const PathPoint& p) const {
  const cplx z = p.base + p.offset;
  cplx sum = 0.0;
  for (const Term& term : terms_) {
    if (term.coefficient == 0.0) continue;
    const cplx v = std::visit(
        [&](const auto& k) -> cplx {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, RationalTerm>) {
            cplx den = 1.0;
            for (const auto& [q, m] : k.poles) den *= ipow(diff(p, q), m);
            return horner(k.numerator, z) / den;
          } else if constexpr (std::is_same_v<K, SqrtProductTerm>) {
            cplx v = ipow(z, k.z_power);
            for (double r : k.numerator_roots) v *= std::sqrt(diff(p, r));
            for (double r : k.denominator_roots) v /= std::sqrt(diff(p, r));
            return v;
          } else if constexpr (std::is_same_v<K, HolomorphicBasisTerm>) {
            cplx w = 1.0;
            for (double r : k.branch_points) w *= std::sqrt(diff(p, r));
            return ipow(z, k.exponent) / w;
          } else if constexpr (std::is_same_v<K, ThetaQuotientTerm>) {
            const ThetaFunction th(k.tau, k.tol);
            cplx num = 1.0, den = 1.0;
            for (const auto& f : k.zeros) num *= ipow(th(diff(p, f.shift)), f.order);
            for (const auto& f : k.poles) den *= ipow(th(diff(p, f.shift)), f.order);
            return num / den;
          } else {
            return 1.0;
          }
        },
        term.kind);
    sum += term.coefficient * v;
  }
  return sum;
}

cplx OneForm::operator()(cplx z) const {
  for (const Term& term : terms_) {
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, RationalTerm>) {
            for (const auto& pole : k.poles)
              if (z == pole.first) throw DomainError("form evaluated at a pole");
          } else if constexpr (std::is_same_v<K, SqrtProductTerm>) {
            for (double r : k.denominator_roots)
              if (z == r) throw DomainError("form evaluated at a pole");
            if (k.z_power < 0 && z == 0.0) throw DomainError("form evaluated at a pole");
            if (on_cut(z, all_roots(k))) throw DomainError("form evaluated on a branch cut");
          } else if constexpr (std::is_same_v<K, HolomorphicBasisTerm>) {
            for (double r : k.branch_points)
              if (z == r) throw DomainError("form evaluated at a branch point");
            if (on_cut(z, k.branch_points)) throw DomainError("form evaluated on a branch cut");
          } else if constexpr (std::is_same_v<K, ThetaQuotientTerm>) {
            const ThetaFunction th(k.tau, k.tol);
            for (const auto& f : k.poles)
              if (th(z - f.shift) == 0.0 || lattice_congruent(z - f.shift, k.tau))
                throw DomainError("form evaluated at a pole");
          }
        },
        term.kind);
  }
  return at(PathPoint{z, 0.0, Bank::upper});
}

ChartValue OneForm::in_chart(const LocalChart& chart, cplx t) const {
  std::vector<ChartTerm> parts;
  parts.reserve(terms_.size());
  const int e = chart.branched ? 2 : 1;
  const cplx local = chart.branched ? t * t : t;  // z - center for finite charts
  for (const Term& term : terms_) {
    if (term.coefficient == 0.0) continue;
    ChartTerm part = std::visit(
        [&](const auto& k) -> ChartTerm {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, RationalTerm>) {
            if (chart.at_infinity) {
              // z = t^-e: numerator(z) = t^{-e deg} sum a_k t^{e(deg-k)}
              const int deg = static_cast<int>(k.numerator.size()) - 1;
              cplx num = 0.0;
              const cplx te = chart.branched ? t * t : t;
              for (int n = deg; n >= 0; --n) num = num * te + k.numerator[deg - n];
              ChartTerm out{num, -e * deg};
              for (const auto& [q, m] : k.poles) {
                out.rest /= ipow(1.0 - q * te, m);
                out.power += e * m;
              }
              return out;
            }
            ChartTerm out{horner(k.numerator, chart.center + local), 0};
            for (const auto& [q, m] : k.poles) {
              if (same(q, chart.center)) out.power -= e * m;
              else out.rest /= ipow((chart.center - q) + local, m);
            }
            return out;
          } else if constexpr (std::is_same_v<K, SqrtProductTerm>) {
            ChartTerm out = power_in_chart(chart, t, k.z_power);
            const ChartValue s =
                detail::sqrt_product_in_chart(chart, t, k.numerator_roots, k.denominator_roots);
            return {out.rest * s.rest, out.power + s.power};
          } else if constexpr (std::is_same_v<K, HolomorphicBasisTerm>) {
            ChartTerm out = power_in_chart(chart, t, k.exponent);
            const ChartValue s = detail::sqrt_product_in_chart(chart, t, {}, k.branch_points);
            return {out.rest * s.rest, out.power + s.power};
          } else if constexpr (std::is_same_v<K, ThetaQuotientTerm>) {
            if (chart.at_infinity || chart.branched)
              throw DomainError("theta quotient only has finite unbranched charts");
            ChartTerm out{1.0, 0};
            const ThetaFunction th(k.tau, k.tol);
            for (const auto& f : k.zeros) out.rest *= ipow(th((chart.center - f.shift) + t), f.order);
            for (const auto& f : k.poles) {
              if (lattice_congruent(chart.center - f.shift, k.tau) && t == 0.0)
                throw DomainError("theta quotient chart value requested at its pole");
              out.rest /= ipow(th((chart.center - f.shift) + t), f.order);
            }
            return out;
          } else {
            return {1.0, 0};
          }
        },
        term.kind);
    part.rest *= term.coefficient;
    parts.push_back(part);
  }
  // dz/dt
  int dpow = 0;
  cplx dfac = 1.0;
  if (chart.at_infinity) {
    dpow = chart.branched ? -3 : -2;
    dfac = chart.branched ? -2.0 : -1.0;
  } else if (chart.branched) {
    dpow = 1;
    dfac = 2.0;
  }
  ChartValue out{0.0, 0};
  bool any = false;
  for (const ChartTerm& p : parts) {
    if (p.rest == 0.0) continue;
    if (!any || p.power < out.power) out.power = p.power;
    any = true;
  }
  for (const ChartTerm& p : parts) {
    if (p.rest == 0.0) continue;
    const int gap = p.power - out.power;
    out.rest += p.rest * (gap == 0 ? cplx(1.0) : (t == 0.0 ? cplx(0.0) : ipow(t, gap)));
  }
  out.rest *= dfac;
  out.power += dpow;
  return out;
}

EndpointBehavior OneForm::behavior_at(cplx p) const {
  EndpointBehavior b;
  bool first = true;
  auto note = [&](double e) {
    if (first || e < b.min_exponent) b.min_exponent = e;
    first = false;
    const double twice = 2 * e;
    if (std::abs(twice - std::round(twice)) < 1e-9 && static_cast<long>(std::lround(twice)) % 2 != 0)
      b.half_integer = true;
    else if (e < 0)
      b.negative_integer = true;
  };
  for (const Term& term : terms_) {
    if (term.coefficient == 0.0) continue;
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, RationalTerm>) {
            int m = 0;
            for (const auto& [q, mult] : k.poles)
              if (same(q, p)) m += mult;
            note(-m);
          } else if constexpr (std::is_same_v<K, SqrtProductTerm>) {
            double e = same(p, 0.0) ? k.z_power : 0;
            for (double r : k.numerator_roots)
              if (same(p, r)) e += 0.5;
            for (double r : k.denominator_roots)
              if (same(p, r)) e -= 0.5;
            note(e);
          } else if constexpr (std::is_same_v<K, HolomorphicBasisTerm>) {
            double e = same(p, 0.0) ? k.exponent : 0;
            for (double r : k.branch_points)
              if (same(p, r)) e -= 0.5;
            note(e);
          } else if constexpr (std::is_same_v<K, ThetaQuotientTerm>) {
            int m = 0;
            for (const auto& f : k.poles)
              if (lattice_congruent(p - f.shift, k.tau)) m += f.order;
            note(-m);
          } else {
            note(0);
          }
        },
        term.kind);
  }
  return b;
}

std::vector<cplx> OneForm::singular_points() const {
  std::vector<cplx> out;
  for (const Term& term : terms_) {
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, RationalTerm>) {
            for (const auto& pole : k.poles) out.push_back(pole.first);
          } else if constexpr (std::is_same_v<K, SqrtProductTerm>) {
            for (double r : all_roots(k)) out.push_back(r);
            if (k.z_power < 0) out.push_back(0.0);
          } else if constexpr (std::is_same_v<K, HolomorphicBasisTerm>) {
            for (double r : k.branch_points) out.push_back(r);
          } else if constexpr (std::is_same_v<K, ThetaQuotientTerm>) {
            for (const auto& f : k.poles) out.push_back(f.shift);
          }
        },
        term.kind);
  }
  std::vector<cplx> unique;
  for (const cplx& z : out)
    if (std::none_of(unique.begin(), unique.end(), [&](cplx u) { return same(u, z); }))
      unique.push_back(z);
  return unique;
}

std::vector<Interval> OneForm::cuts() const {
  std::vector<Interval> out;
  for (const Term& term : terms_) {
    if (const auto* s = std::get_if<SqrtProductTerm>(&term.kind)) {
      auto c = detail::slits_of(all_roots(*s));
      out.insert(out.end(), c.begin(), c.end());
    } else if (const auto* h = std::get_if<HolomorphicBasisTerm>(&term.kind)) {
      auto c = detail::slits_of(h->branch_points);
      out.insert(out.end(), c.begin(), c.end());
    }
  }
  return out;
}

bool OneForm::single_valued() const {
  return std::none_of(terms_.begin(), terms_.end(), [](const Term& t) {
    return std::holds_alternative<SqrtProductTerm>(t.kind) ||
           std::holds_alternative<HolomorphicBasisTerm>(t.kind);
  });
}

bool OneForm::has_theta() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return std::holds_alternative<ThetaQuotientTerm>(t.kind); });
}

std::optional<cplx> OneForm::exact_residue(cplx p) const {
  cplx sum = 0.0;
  for (const Term& term : terms_) {
    if (std::holds_alternative<ConstantDzTerm>(term.kind)) continue;
    const auto* r = std::get_if<RationalTerm>(&term.kind);
    if (!r) return std::nullopt;
    sum += term.coefficient * rational_residue(*r, p);
  }
  return sum;
}

OneForm holomorphic_basis_form(const HyperellipticCurve& curve, int exponent) {
  return OneForm({Term{1.0, HolomorphicBasisTerm{curve.branch_points(), exponent}}});
}

std::vector<OneForm> holomorphic_basis(const HyperellipticCurve& curve) {
  std::vector<OneForm> out;
  for (int j = 0; j < curve.genus(); ++j) out.push_back(holomorphic_basis_form(curve, j));
  return out;
}

FormValues WeierstrassTriple::values(cplx z) const { return {omega[0](z), omega[1](z), omega[2](z)}; }

FormValues WeierstrassTriple::values_at(const PathPoint& p) const {
  return {omega[0].at(p), omega[1].at(p), omega[2].at(p)};
}

cplx GaussMapSpec::operator()(cplx z) const {
  cplx v = coefficient;
  for (double r : numerator_roots) v *= std::sqrt(z - r);
  for (double r : denominator_roots) v /= std::sqrt(z - r);
  return v;
}

WeierstrassTriple triple_from_gauss_map(const Domain& domain, const GaussMapSpec& g,
                                        const OneForm& omega3, cplx base_point) {
  if (omega3.terms().size() != 1) throw DomainError("triple_from_gauss_map: omega3 must be c z^k dz");
  const Term& t = omega3.terms().front();
  int k = 0;
  cplx c = t.coefficient;
  if (const auto* r = std::get_if<RationalTerm>(&t.kind)) {
    int nz = -1;
    for (std::size_t i = 0; i < r->numerator.size(); ++i) {
      if (r->numerator[i] == 0.0) continue;
      if (nz >= 0) throw DomainError("triple_from_gauss_map: omega3 must be c z^k dz");
      nz = static_cast<int>(i);
    }
    if (nz < 0) throw DomainError("triple_from_gauss_map: omega3 vanishes");
    c *= r->numerator[nz];
    k = nz;
    for (const auto& [q, m] : r->poles) {
      if (q != 0.0) throw DomainError("triple_from_gauss_map: omega3 must be c z^k dz");
      k -= m;
    }
  } else if (const auto* s = std::get_if<SqrtProductTerm>(&t.kind)) {
    if (!s->numerator_roots.empty() || !s->denominator_roots.empty())
      throw DomainError("triple_from_gauss_map: omega3 must be c z^k dz");
    k = s->z_power;
  } else if (!std::holds_alternative<ConstantDzTerm>(t.kind)) {
    throw DomainError("triple_from_gauss_map: omega3 must be c z^k dz");
  }
  const OneForm inv_g = OneForm::sqrt_product(k, g.denominator_roots, g.numerator_roots, c / g.coefficient);
  const OneForm pos_g = OneForm::sqrt_product(k, g.numerator_roots, g.denominator_roots, c * g.coefficient);
  WeierstrassTriple out;
  out.domain = domain;
  out.base_point = base_point;
  out.omega[0] = 0.5 * inv_g + (-0.5) * pos_g;
  out.omega[1] = cplx(0, 0.5) * inv_g + cplx(0, 0.5) * pos_g;
  out.omega[2] = omega3;
  return out;
}

cplx LaurentModes::coefficient(int k) const {
  return modes.at(static_cast<std::size_t>(k - lo)) / std::pow(radius, k);
}

LaurentModes laurent_modes(const OneForm& form, const LocalChart& chart, double radius, int lo,
                           int hi, int samples) {
  LaurentModes out;
  out.lo = lo;
  out.radius = radius;
  out.modes.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  std::vector<cplx> values(samples);
  for (int j = 0; j < samples; ++j) {
    const cplx t = std::polar(radius, 2 * pi * j / samples);
    values[j] = form.in_chart(chart, t).at(t);
    out.sample_max = std::max(out.sample_max, std::abs(values[j]));
  }
  for (int k = lo; k <= hi; ++k) {
    cplx acc = 0.0;
    for (int j = 0; j < samples; ++j) acc += values[j] * std::polar(1.0, -2 * pi * double(j) * k / samples);
    out.modes[k - lo] = acc / double(samples);
  }
  return out;
}

}  // namespace harmsurf
