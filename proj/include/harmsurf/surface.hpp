#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "harmsurf/periods.hpp"

namespace harmsurf {

/// f(z) = base_value + Re of the integral of the triple from base_point to z.
class HarmonicMapEval {
 public:
  /// Throws ClosureError when some condition is violated by more than 1e-7.
  static HarmonicMapEval create(WeierstrassTriple triple, std::vector<Cycle> cycles,
                                std::vector<PeriodCondition> conditions, Vec3 base_value = {},
                                QuadratureConfig cfg = {});
  /// No period check; for triples on simply connected domains.
  static HarmonicMapEval unchecked(WeierstrassTriple triple, Vec3 base_value = {},
                                   QuadratureConfig cfg = {});

  Vec3 operator()(cplx z) const;
  /// Route used to reach z from the base point.
  std::vector<PathPiece> route(cplx z) const { return route(triple_.base_point, z); }
  std::vector<PathPiece> route(cplx from, cplx to) const;
  /// Re of the integral along an explicit path.
  Vec3 integrate(std::span<const PathPiece> path) const;

  const WeierstrassTriple& triple() const { return triple_; }
  const QuadratureConfig& config() const { return cfg_; }
  double period_residual() const { return residual_; }

 private:
  WeierstrassTriple triple_;
  Vec3 base_value_;
  QuadratureConfig cfg_;
  double residual_ = 0;
};

/// Unit normal Im(w2 conj w3, w3 conj w1, w1 conj w2) / norm.  Throws DomainError
/// (with the raw vector in the message) where the numerator vanishes.
Vec3 gauss_map(const WeierstrassTriple& triple, cplx z);
Vec3 gauss_map(const FormValues& values);
/// Same in a local chart; exact at t = 0 (branch points).
Vec3 gauss_map_in_chart(const WeierstrassTriple& triple, const LocalChart& chart, cplx t);

struct EndDescriptor {
  std::optional<cplx> puncture;  // nullopt: infinity
  std::array<int, 3> pole_orders{};
  int order = 0;
  std::array<int, 3> type_tuple{};
  std::optional<Vec3> limiting_normal;
  std::string note;  // diagnostics when no limiting normal is found
};

/// Pole orders from Laurent modes in the local chart; type by the nullity
/// filtration of the real span of the principal parts.
EndDescriptor classify_end(const WeierstrassTriple& triple, std::optional<cplx> puncture);

double conformality_defect(const WeierstrassTriple& triple, std::span<const cplx> probes);

/// Distance from z to the nearest end, pole, branch point or slit.
double feature_clearance(const WeierstrassTriple& triple, cplx z);

/// 5-point Laplacian of f, with each difference f(z+d) - f(z) computed as a
/// short local integral.  Throws DomainError when a probe lacks clearance 4h.
double harmonicity_residual(const HarmonicMapEval& eval, std::span<const cplx> probes, double h);
/// Mean over probes instead of the max.
double harmonicity_mean(const HarmonicMapEval& eval, std::span<const cplx> probes, double h);
/// Difference-based variant for an arbitrary map (used for control maps).
double harmonicity_residual(const std::function<Vec3(cplx)>& f, std::span<const cplx> probes, double h);

struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<Vec3> normals;
  std::vector<cplx> parameters;
  std::map<std::string, std::string> metadata;

  /// Sum over interior vertices of 2 pi minus the incident angles.
  double interior_angle_defect() const;
  /// Sum over boundary vertices of pi minus the incident angles.
  double boundary_turning() const;
  int euler_characteristic() const;
  int boundary_loops() const;
  double max_weld_gap = 0;
};

double total_curvature(const SurfaceMesh& mesh);
/// 2 pi chi - 2 pi sum (n_j - 1), the quoted closed form.
double formula_total_curvature(int chi, std::span<const int> end_orders);
/// 2 pi chi - 2 pi sum n_j, the value the discrete curvature converges to.
double corrected_total_curvature(int chi, std::span<const int> end_orders);

}  // namespace harmsurf
