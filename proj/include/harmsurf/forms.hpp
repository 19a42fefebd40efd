#pragma once

#include <array>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "harmsurf/domains.hpp"
#include "harmsurf/theta.hpp"

namespace harmsurf {

/// numerator(z) / prod (z - pole)^multiplicity.  Numerator coefficients ascend.
struct RationalTerm {
  std::vector<cplx> numerator{1.0};
  std::vector<std::pair<cplx, int>> poles;
};

/// z^z_power * prod sqrt(z - n) / prod sqrt(z - d), principal root per factor.
struct SqrtProductTerm {
  int z_power = 0;
  std::vector<double> numerator_roots;
  std::vector<double> denominator_roots;
};

/// z^exponent / w on a hyperelliptic curve.
struct HolomorphicBasisTerm {
  std::vector<double> branch_points;
  int exponent = 0;
};

struct ThetaFactor {
  cplx shift;
  int order = 1;
};

/// prod theta(z - a_i)^alpha_i / prod theta(z - b_i)^beta_i.
struct ThetaQuotientTerm {
  std::vector<ThetaFactor> zeros;
  std::vector<ThetaFactor> poles;
  cplx tau;
  double tol = 1e-14;

  cplx operator()(cplx z) const;
};

struct ConstantDzTerm {};

using TermKind =
    std::variant<RationalTerm, SqrtProductTerm, HolomorphicBasisTerm, ThetaQuotientTerm, ConstantDzTerm>;

struct Term {
  cplx coefficient{1.0};
  TermKind kind;
};

/// Local power behaviour of a form at a point: the form is a sum of pieces
/// each behaving like (z - p)^e.
struct EndpointBehavior {
  double min_exponent = 0;
  bool half_integer = false;     // some piece has a half-integer exponent
  bool negative_integer = false; // some piece has an integer exponent below zero
};

/// A meromorphic one-form written as omega = phi(z) dz with phi a sum of terms.
class OneForm {
 public:
  OneForm() = default;
  explicit OneForm(std::vector<Term> terms) : terms_(std::move(terms)) {}

  static OneForm rational(std::vector<cplx> numerator, std::vector<std::pair<cplx, int>> poles,
                          cplx coefficient = 1.0);
  static OneForm monomial(int power, cplx coefficient = 1.0);
  static OneForm sqrt_product(int z_power, std::vector<double> numerator_roots,
                              std::vector<double> denominator_roots, cplx coefficient = 1.0);
  static OneForm theta_quotient(std::vector<ThetaFactor> zeros, std::vector<ThetaFactor> poles,
                                cplx tau, cplx coefficient = 1.0);
  static OneForm constant_dz(cplx coefficient = 1.0);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  OneForm operator+(const OneForm& other) const;
  OneForm operator-(const OneForm& other) const;
  friend OneForm operator*(cplx c, const OneForm& f);

  /// phi(z).  Throws DomainError at a pole or on a branch cut of a square-root term.
  cplx operator()(cplx z) const;
  /// phi at a path point, bank taken from the point.  No cut checks.
  cplx at(const PathPoint& p) const;
  /// omega / dt in a local chart, split as rest * t^power.
  ChartValue in_chart(const LocalChart& chart, cplx t) const;

  EndpointBehavior behavior_at(cplx p) const;
  /// Finite poles and branch points (theta poles as given, not lattice translates).
  std::vector<cplx> singular_points() const;
  /// Branch cuts of all square-root terms.
  std::vector<Interval> cuts() const;
  /// True when every term is single valued on the sphere (no square roots).
  bool single_valued() const;
  bool has_theta() const;
  /// Exact residue when all terms are rational or constant.
  std::optional<cplx> exact_residue(cplx p) const;

 private:
  std::vector<Term> terms_;
};

/// z^j dz / w for j = 0..g-1.  Empty for genus 0.
std::vector<OneForm> holomorphic_basis(const HyperellipticCurve& curve);
OneForm holomorphic_basis_form(const HyperellipticCurve& curve, int exponent);

struct WeierstrassTriple {
  Domain domain;
  std::array<OneForm, 3> omega;
  cplx base_point{0.0};

  /// Values phi_k at z.
  FormValues values(cplx z) const;
  FormValues values_at(const PathPoint& p) const;
};

/// Gauss-map data g = coefficient * prod sqrt(z - n) / prod sqrt(z - d).
struct GaussMapSpec {
  cplx coefficient{1.0};
  std::vector<double> numerator_roots;
  std::vector<double> denominator_roots;

  cplx operator()(cplx z) const;
};

/// omega_1 = (1/g - g) omega_3 / 2, omega_2 = i (1/g + g) omega_3 / 2.
/// omega_3 must be c z^k dz.
WeierstrassTriple triple_from_gauss_map(const Domain& domain, const GaussMapSpec& g,
                                        const OneForm& omega3, cplx base_point);

/// Residue at a finite point: exact for rational forms, otherwise a contour
/// integral over a small circle (or the t^-1 coefficient in a branched chart).
cplx residue(const Domain& domain, const OneForm& form, cplx p);

/// Laurent coefficients of omega/dt in a chart, from index `lo` to `hi`,
/// scaled by r^k (Fourier modes on the circle |t| = r).
struct LaurentModes {
  int lo = 0;
  double radius = 0;
  std::vector<cplx> modes;  // modes[k - lo] = c_k r^k
  double sample_max = 0;    // max |omega/dt| on the circle

  cplx coefficient(int k) const;
};

LaurentModes laurent_modes(const OneForm& form, const LocalChart& chart, double radius, int lo,
                           int hi, int samples = 256);

}  // namespace harmsurf
