#include "harmsurf/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <string>

namespace harmsurf {

namespace {

// Integrand over the piece parameter: fills out[i] for each form.
using VecFn = std::function<void(double s, double sc, cplx* out)>;

constexpr std::array<double, 8> kron_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kron_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  std::vector<cplx> value;
  double error;
};

// One 15-point Kronrod panel on [a,b] of the piece parameter.
Panel gk15(const VecFn& f, std::size_t n, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::vector<cplx> kr(n, 0.0), ga(n, 0.0), buf(n);
  auto eval = [&](double x) {
    const double s = c + h * x;
    // Complement measured from the far end keeps precision near s = 1.
    const double sc = (1.0 - b) + h * (1.0 - x);
    f(s, sc, buf.data());
  };
  eval(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    kr[i] += kron_w[7] * buf[i];
    ga[i] += gauss_w[3] * buf[i];
  }
  for (int j = 0; j < 7; ++j) {
    for (double sign : {-1.0, 1.0}) {
      eval(sign * kron_x[j]);
      for (std::size_t i = 0; i < n; ++i) {
        kr[i] += kron_w[j] * buf[i];
        if (j % 2 == 1) ga[i] += gauss_w[j / 2] * buf[i];
      }
    }
  }
  Panel p{std::vector<cplx>(n), 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    p.value[i] = h * kr[i];
    p.error = std::max(p.error, std::abs(h * (kr[i] - ga[i])));
  }
  return p;
}

double magnitude(const std::vector<cplx>& v) {
  double m = 0;
  for (const cplx& x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<cplx> adaptive_gk(const VecFn& f, std::size_t n, double a, double b,
                              const QuadratureConfig& cfg) {
  const Panel whole = gk15(f, n, a, b);
  const double scale = std::max(cfg.abs_tol, cfg.rel_tol * magnitude(whole.value));
  std::vector<cplx> total(n, 0.0);
  std::function<void(double, double, const Panel&, int)> refine = [&](double lo, double hi,
                                                                        const Panel& p, int depth) {
    const double budget = scale * (hi - lo) / (b - a);
    if (p.error <= budget || (hi - lo) < 1e-15) {
      for (std::size_t i = 0; i < n; ++i) total[i] += p.value[i];
      return;
    }
    if (depth >= cfg.max_refinement_depth + 8)
      throw QuadratureError("adaptive quadrature: tolerance not reached at max depth");
    const double mid = 0.5 * (lo + hi);
    refine(lo, mid, gk15(f, n, lo, mid), depth + 1);
    refine(mid, hi, gk15(f, n, mid, hi), depth + 1);
  };
  refine(a, b, whole, 0);
  return total;
}

// Tanh-sinh on [a,b] of the piece parameter.  Returns false if not converged.
bool tanh_sinh(const VecFn& f, std::size_t n, double a, double b, const QuadratureConfig& cfg,
               int max_level, std::vector<cplx>& result) {
  const double len = b - a;
  std::vector<cplx> buf(n);
  std::vector<cplx> sum(n, 0.0);
  auto add_node = [&](double t, double weight_scale) -> bool {
    const double e = std::exp(pi * std::sinh(t));
    const double sig = 1.0 / (1.0 + 1.0 / e);  // 1/(1+e^{-pi sinh t})
    const double sigc = 1.0 / (1.0 + e);
    if (sig < 1e-290 || sigc < 1e-290 || !std::isfinite(e)) return false;
    const double w = pi * std::cosh(t) * sig * sigc * len * weight_scale;
    const double s = a + len * sig;
    const double sc = (1.0 - b) + len * sigc;
    f(s, sc, buf.data());
    for (std::size_t i = 0; i < n; ++i) sum[i] += w * buf[i];
    return true;
  };
  double h = 0.5;
  const double tmax = 6.5;
  for (double t = -tmax; t <= tmax + 1e-12; t += h) add_node(t, h);
  std::vector<cplx> prev = sum;
  for (int level = 1; level <= max_level; ++level) {
    // S(h/2) = S(h)/2 + (h/2) * sum over new odd nodes
    for (auto& x : sum) x *= 0.5;
    h *= 0.5;
    for (double t = -tmax + h; t <= tmax; t += 2 * h) add_node(t, h);
    double delta = 0;
    for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::abs(sum[i] - prev[i]));
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * magnitude(sum));
    if (level >= 3 && delta <= tol) {
      result = sum;
      return true;
    }
    prev = sum;
  }
  return false;
}

std::vector<cplx> algebraic(const VecFn& f, std::size_t n, double a, double b,
                            const QuadratureConfig& cfg, int depth) {
  std::vector<cplx> out;
  if (tanh_sinh(f, n, a, b, cfg, 8, out)) return out;
  if (depth >= cfg.max_refinement_depth)
    throw QuadratureError("tanh-sinh quadrature: tolerance not reached at max depth");
  const double mid = 0.5 * (a + b);
  auto left = algebraic(f, n, a, mid, cfg, depth + 1);
  auto right = algebraic(f, n, mid, b, cfg, depth + 1);
  for (std::size_t i = 0; i < n; ++i) left[i] += right[i];
  return left;
}

bool same(cplx a, cplx b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

double distance_to_segment(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0) return std::abs(p - a);
  const double s = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + s * d));
}

double distance_to_piece(cplx p, const PathPiece& piece) {
  if (piece.kind == PathPiece::Kind::line) return distance_to_segment(p, piece.start, piece.end);
  const cplx rel = p - piece.center;
  const double ang = std::arg(rel);
  const double lo = std::min(piece.theta0, piece.theta1), hi = std::max(piece.theta0, piece.theta1);
  double best = std::min(std::abs(p - piece.start), std::abs(p - piece.end));
  for (int k = -2; k <= 2; ++k) {
    const double a = ang + 2 * pi * k;
    if (a > lo && a < hi) best = std::min(best, std::abs(std::abs(rel) - piece.radius));
  }
  return best;
}

// Rejects singularities strictly inside a piece and transversal crossings of a cut.
void check_interior(const OneForm& form, const PathPiece& piece) {
  const double scale = std::max({1.0, std::abs(piece.start), std::abs(piece.end)});
  std::vector<cplx> sing = form.singular_points();
  if (form.has_theta()) {
    for (const Term& t : form.terms()) {
      const auto* q = std::get_if<ThetaQuotientTerm>(&t.kind);
      if (!q) continue;
      for (const auto& f : q->poles)
        for (int i = -3; i <= 3; ++i)
          for (int j = -3; j <= 3; ++j) sing.push_back(f.shift + double(i) + double(j) * q->tau);
    }
  }
  for (const cplx& p : sing) {
    if (same(p, piece.start) || same(p, piece.end)) continue;
    if (distance_to_piece(p, piece) < 1e-13 * scale)
      throw QuadratureError("singularity strictly inside an integration segment");
  }
  const auto cuts = form.cuts();
  if (cuts.empty()) return;
  auto crossing_ok = [&](double x) {
    return std::none_of(cuts.begin(), cuts.end(), [&](const Interval& c) { return c.contains(x); });
  };
  if (piece.kind == PathPiece::Kind::line) {
    const double y0 = piece.start.imag(), y1 = piece.end.imag();
    if ((y0 > 0 && y1 < 0) || (y0 < 0 && y1 > 0)) {
      const double s = y0 / (y0 - y1);
      const double x = piece.start.real() + s * (piece.end.real() - piece.start.real());
      if (!crossing_ok(x)) throw QuadratureError("segment crosses a branch cut");
    }
  } else {
    const double lo = std::min(piece.theta0, piece.theta1), hi = std::max(piece.theta0, piece.theta1);
    for (int k = -4; k <= 4; ++k) {
      const double ang = k * pi;
      if (ang <= lo || ang >= hi) continue;
      const double x = piece.center.real() + piece.radius * std::cos(ang);
      if (piece.center.imag() == 0.0 && !crossing_ok(x))
        throw QuadratureError("arc crosses a branch cut");
    }
  }
}

EndRule end_rule(const EndpointBehavior& b) {
  if (b.negative_integer && b.min_exponent < 0) {
    // Integer poles are only allowed when the singular part is purely half-integer.
    throw QuadratureError("non-integrable pole at an integration endpoint");
  }
  if (b.min_exponent <= -1.0) {
    if (b.half_integer && std::abs(b.min_exponent + 1.5) < 1e-9) return EndRule::finite_part;
    throw QuadratureError("non-integrable endpoint singularity");
  }
  if (b.half_integer || b.min_exponent < 0) return EndRule::algebraic;
  return EndRule::regular;
}

std::vector<cplx> plain(std::span<const OneForm> forms, const PathPiece& piece,
                        const QuadratureConfig& cfg, bool singular) {
  const std::size_t n = forms.size();
  VecFn f = [&](double s, double sc, cplx* out) {
    const PathPoint p = piece.locate(s, sc);
    const cplx dz = piece.derivative(s);
    for (std::size_t i = 0; i < n; ++i) out[i] = forms[i].at(p) * dz;
  };
  return singular ? algebraic(f, n, 0.0, 1.0, cfg, 0) : adaptive_gk(f, n, 0.0, 1.0, cfg);
}

// Finite part of the integral of `form` from piece.start along a line piece,
// the form having exponent -3/2 at the start.
cplx finite_part_from_start(const OneForm& form, const PathPiece& piece, const QuadratureConfig& cfg,
                            EndRule end_other) {
  if (piece.kind != PathPiece::Kind::line)
    throw QuadratureError("finite-part integration only supports straight segments");
  const cplx p = piece.start, q = piece.end;
  const double L = std::abs(q - p);
  const cplx dir = (q - p) / L;
  if (piece.bank == Bank::lower && dir.imag() == 0.0)
    throw QuadratureError("finite-part integration on the lower bank is not supported");
  double near = std::numeric_limits<double>::infinity();
  for (const cplx& s : form.singular_points())
    if (!same(s, p)) near = std::min(near, std::abs(s - p));
  const double rho = std::min(0.25 * near, 0.5 * L);
  const cplx t1 = std::sqrt(rho) * std::sqrt(detail::with_bank(dir, Bank::upper));
  const LocalChart chart{false, true, p};
  const ChartValue at0 = form.in_chart(chart, 0.0);
  if (at0.power != -2) throw QuadratureError("finite part: unexpected local exponent");
  const cplx c = at0.rest;
  cplx acc = 0.0;
  for (const auto& [x, w] : detail::gauss_legendre_unit(20)) {
    const cplx t = t1 * x;
    const ChartValue v = form.in_chart(chart, t);
    // rest(t) carries the whole of omega/dt times t^2 when the power stays at -2.
    const cplx rest = v.power == -2 ? v.rest : v.rest * std::pow(t, v.power + 2);
    acc += w * (rest - c) / (t * t);
  }
  cplx fp = t1 * acc - c / t1;
  PathPiece rest_piece = PathPiece::line(p + rho * dir, q, piece.bank);
  rest_piece.end_singular = piece.end_singular;
  const OneForm one[1] = {form};
  fp += plain(one, rest_piece, cfg, end_other != EndRule::regular)[0];
  return fp;
}

}  // namespace

namespace detail {

const std::vector<std::pair<double, double>>& gauss_legendre_unit(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<double, double>> nodes;
  for (int i = 1; i <= n; ++i) {
    double x = std::cos(pi * (i - 0.25) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1 - x * x) * dp * dp);
    nodes.emplace_back(0.5 * (1 + x), 0.5 * w);
  }
  return cache.emplace(n, std::move(nodes)).first->second;
}

}  // namespace detail

std::vector<cplx> integrate_piece(std::span<const OneForm> forms, const PathPiece& piece,
                                  const QuadratureConfig& cfg) {
  const std::size_t n = forms.size();
  std::vector<EndRule> rs(n), re(n);
  bool all_regular = true, any_fp = false;
  const bool closed = piece.kind == PathPiece::Kind::arc && same(piece.start, piece.end);
  for (std::size_t i = 0; i < n; ++i) {
    check_interior(forms[i], piece);
    if (closed) {
      if (forms[i].behavior_at(piece.start).min_exponent < 0 ||
          forms[i].behavior_at(piece.start).half_integer)
        throw QuadratureError("closed arc passes through a singularity");
      rs[i] = re[i] = EndRule::regular;
    } else {
      rs[i] = end_rule(forms[i].behavior_at(piece.start));
      re[i] = end_rule(forms[i].behavior_at(piece.end));
    }
    if (piece.start_singular && rs[i] == EndRule::regular) rs[i] = EndRule::algebraic;
    if (piece.end_singular && re[i] == EndRule::regular) re[i] = EndRule::algebraic;
    all_regular = all_regular && rs[i] == EndRule::regular && re[i] == EndRule::regular;
    any_fp = any_fp || rs[i] == EndRule::finite_part || re[i] == EndRule::finite_part;
  }
  if (!any_fp) return plain(forms, piece, cfg, !all_regular);
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const OneForm one[1] = {forms[i]};
    if (rs[i] == EndRule::finite_part && re[i] == EndRule::finite_part) {
      const cplx mid = 0.5 * (piece.start + piece.end);
      PathPiece a = PathPiece::line(piece.start, mid, piece.bank);
      PathPiece b = PathPiece::line(piece.end, mid, piece.bank);
      out[i] = finite_part_from_start(forms[i], a, cfg, EndRule::regular) -
               finite_part_from_start(forms[i], b, cfg, EndRule::regular);
    } else if (rs[i] == EndRule::finite_part) {
      out[i] = finite_part_from_start(forms[i], piece, cfg, re[i]);
    } else if (re[i] == EndRule::finite_part) {
      PathPiece rev = PathPiece::line(piece.end, piece.start, piece.bank);
      out[i] = -finite_part_from_start(forms[i], rev, cfg, rs[i]);
    } else {
      out[i] = plain(one, piece, cfg, rs[i] != EndRule::regular || re[i] != EndRule::regular)[0];
    }
  }
  return out;
}

cplx integrate_piece(const OneForm& form, const PathPiece& piece, const QuadratureConfig& cfg) {
  const OneForm one[1] = {form};
  return integrate_piece(one, piece, cfg)[0];
}

cplx integrate_segment(const OneForm& form, cplx start, cplx end, const QuadratureConfig& cfg) {
  PathPiece piece = PathPiece::line(start, end);
  piece.start_singular = cfg.endpoint_singular.first;
  piece.end_singular = cfg.endpoint_singular.second;
  return integrate_piece(form, piece, cfg);
}

cplx integrate_path(const OneForm& form, std::span<const PathPiece> path, const QuadratureConfig& cfg) {
  cplx sum = 0.0;
  for (const PathPiece& p : path) sum += integrate_piece(form, p, cfg);
  return sum;
}

cplx integrate_cycle(const OneForm& form, const Cycle& cycle, const QuadratureConfig& cfg) {
  return integrate_path(form, cycle.path, cfg);
}

FormValues integrate_triple(const WeierstrassTriple& triple, std::span<const PathPiece> path,
                            const QuadratureConfig& cfg) {
  FormValues sum{0.0, 0.0, 0.0};
  for (const PathPiece& p : path) {
    const auto v = integrate_piece(triple.omega, p, cfg);
    for (int k = 0; k < 3; ++k) sum[k] += v[k];
  }
  return sum;
}

}  // namespace harmsurf
