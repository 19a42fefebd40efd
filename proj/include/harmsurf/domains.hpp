#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "harmsurf/error.hpp"
#include "harmsurf/types.hpp"

namespace harmsurf {

/// Which limit to take for a point lying on the real axis.  Points with a
/// nonzero imaginary part ignore it.
enum class Bank { upper, lower };

/// Riemann sphere with finitely many punctures.  The point at infinity is
/// handled through the chart 1/z and is flagged rather than stored.
class PuncturedSphere {
 public:
  PuncturedSphere() = default;
  explicit PuncturedSphere(std::vector<cplx> punctures, bool infinity_punctured = false);

  const std::vector<cplx>& punctures() const { return punctures_; }
  bool infinity_punctured() const { return infinity_punctured_; }

 private:
  std::vector<cplx> punctures_;
  bool infinity_punctured_ = false;
};

/// Real open interval; `lo` may be -infinity.
struct Interval {
  double lo;
  double hi;
  bool contains(double x) const { return lo < x && x < hi; }
};

/// The curve w^2 = prod (z - b_k) over distinct real branch points b_k.
/// w is the product of per-factor principal square roots, which makes it
/// single valued and continuous off the slit intervals.  With an odd number of
/// finite branch points infinity is a branch point as well.
class HyperellipticCurve {
 public:
  /// `branch_points` in the order given; that order is kept as the default
  /// chain for `canonical_cycles`.  `punctures` are finite non-branch ends.
  explicit HyperellipticCurve(std::vector<double> branch_points,
                              std::vector<cplx> punctures = {},
                              bool infinity_punctured = false);

  /// Overrides the chain of branch points joined by the period cycles.
  HyperellipticCurve& with_cycle_chain(std::vector<double> chain);

  const std::vector<double>& branch_points() const { return sorted_; }
  const std::vector<double>& cycle_chain() const { return chain_; }
  const std::vector<Interval>& slit_intervals() const { return slits_; }
  const std::vector<cplx>& punctures() const { return punctures_; }
  bool infinity_punctured() const { return infinity_punctured_; }
  int genus() const { return genus_; }
  bool branched_at_infinity() const { return sorted_.size() % 2 == 1; }

  bool is_branch_point(cplx z, double tol = 1e-14) const;
  bool on_slit(cplx z) const;

  /// w at z; throws DomainError on a slit or at a branch point.
  cplx evaluate_w(cplx z) const;
  /// w at z without checks.  A zero imaginary part picks the bank through its sign bit.
  cplx w_unchecked(cplx z) const;
  /// Boundary value of w on the real axis.
  cplx w_on_bank(double x, Bank bank) const;

 private:
  std::vector<double> sorted_;
  std::vector<double> chain_;
  std::vector<Interval> slits_;
  std::vector<cplx> punctures_;
  bool infinity_punctured_ = false;
  int genus_ = 0;
};

/// Rectangular torus C / (Z + tau Z).
class RectTorus {
 public:
  RectTorus(cplx tau, std::vector<cplx> punctures, double cycle_offset = 0.3);

  cplx tau() const { return tau_; }
  const std::vector<cplx>& punctures() const { return punctures_; }
  double cycle_offset() const { return cycle_offset_; }

  /// Representative of z in the fundamental cell [0,1) x [0, Im tau).
  cplx reduce(cplx z) const;
  /// Distance from z to the nearest lattice translate of p.
  double lattice_distance(cplx z, cplx p) const;

 private:
  cplx tau_;
  std::vector<cplx> punctures_;
  double cycle_offset_;
};

using Domain = std::variant<PuncturedSphere, HyperellipticCurve, RectTorus>;

/// A point held as base + offset.  Near a singular end the base is that end
/// and the offset is small and exact, so differences to the end keep precision.
struct PathPoint {
  cplx base;
  cplx offset;
  Bank bank = Bank::upper;

  cplx z() const;
};

/// One piece of an integration path: a straight segment or a circular arc.
struct PathPiece {
  enum class Kind { line, arc };

  Kind kind = Kind::line;
  cplx start;
  cplx end;
  cplx center;
  double radius = 0;
  double theta0 = 0;
  double theta1 = 0;
  bool start_singular = false;
  bool end_singular = false;
  Bank bank = Bank::upper;

  static PathPiece line(cplx a, cplx b, Bank bank = Bank::upper);
  /// Arc of the circle |z - center| = radius from angle theta0 to theta1.
  static PathPiece arc(cplx center, double radius, double theta0, double theta1);

  /// Point at parameter s in [0,1].  `s_complement` = 1 - s computed by the
  /// caller; points near an end are rebuilt from that end to keep precision.
  PathPoint locate(double s, double s_complement) const;
  cplx point(double s, double s_complement) const { return locate(s, s_complement).z(); }
  cplx point(double s) const { return point(s, 1.0 - s); }
  /// dz/ds at parameter s.
  cplx derivative(double s) const;
  double length() const;
};

enum class CycleLabel { around_puncture, real_segment, half_circle, lattice_1, lattice_tau };

const char* to_string(CycleLabel label);

struct Cycle {
  CycleLabel label = CycleLabel::real_segment;
  cplx a;  // puncture, or segment start
  cplx b;  // segment end (unused for around_puncture)
  std::vector<PathPiece> path;

  bool closed() const;
  std::string describe() const;
};

Cycle around_puncture_cycle(cplx puncture, double radius);
Cycle real_segment_cycle(double a, double b);
/// Half circle in the upper half plane from a to b.
Cycle half_circle_cycle(double a, double b);

/// Cycles that carry the period conditions of each domain kind.
///  - sphere: a counterclockwise circle around each finite puncture
///  - hyperelliptic: real segments between consecutive entries of the cycle
///    chain (oriented left to right); a segment whose interior would meet a
///    branch point or puncture is replaced by the upper half circle
///  - torus: horizontal cycle at height `cycle_offset` and vertical [0, tau]
std::vector<Cycle> canonical_cycles(const Domain& domain);

/// Minimum distance from z to any puncture or finite branch point.
double nearest_feature_distance(const Domain& domain, cplx z);

/// All finite special points (punctures and branch points), not reduced mod lattice.
std::vector<cplx> finite_features(const Domain& domain);

/// Local coordinate t around a point of the domain.
///  finite unbranched: z = c + t        finite branched: z = c + t^2
///  infinity unbranched: z = 1/t        infinity branched: z = 1/t^2
struct LocalChart {
  bool at_infinity = false;
  bool branched = false;
  cplx center;

  cplx z_of(cplx t) const;
  cplx dz_dt(cplx t) const;
};

/// Chart at `point` (nullopt means infinity); branched when the point is a
/// branch point of a hyperelliptic domain.
LocalChart chart_at(const Domain& domain, std::optional<cplx> point);

/// A value of the form rest * t^power, kept split so that t = 0 can be
/// evaluated exactly.
struct ChartValue {
  cplx rest;
  int power = 0;

  cplx at(cplx t) const;
};

namespace detail {

/// Forces the sign of a zero imaginary part to select a bank.
cplx with_bank(cplx z, Bank bank);

/// prod sqrt(z - r) over the roots, principal branch per factor.
cplx sqrt_product(cplx z, std::span<const double> roots);

/// prod sqrt(z - r)^{sign} expressed in a local chart.  `sign` is +1 for
/// numerator roots and -1 for denominator roots.  Throws DomainError when the
/// product is not single valued in the chart.
ChartValue sqrt_product_in_chart(const LocalChart& chart, cplx t,
                                 std::span<const double> numerator_roots,
                                 std::span<const double> denominator_roots);

/// Slits of a per-factor principal square-root product over the given roots.
std::vector<Interval> slits_of(std::vector<double> roots);

}  // namespace detail

}  // namespace harmsurf
