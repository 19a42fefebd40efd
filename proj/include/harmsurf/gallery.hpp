#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "harmsurf/periods.hpp"
#include "harmsurf/surface.hpp"

namespace harmsurf {

enum class FamilyKind {
  stacked_planes,
  genus_two_ends,
  genus_two_ends_023,
  scherk_outward,
  scherk_inward,
  scherk_minimal,
  torus_end,
};

enum class End3Variant { pole1, pole1plus2 };
enum class ScherkOrientation { outward, inward };
// third_literal keeps the theta(z - 1/2)^4 pole as quoted for the z = 1/3 surface.
enum class TorusVariant { half, third, third_literal };

const char* to_string(FamilyKind kind);
FamilyKind family_from_string(const std::string& name);

// Builders ------------------------------------------------------------------

/// Genus zero: catenoid ends at +-n, planar ends at the integers in between.
WeierstrassTriple build_stacked_planes(int n);

/// Two ends at 0 and infinity with 2n branch points a.  Empty a gives the
/// genus zero prototype on the sphere punctured at 0 and infinity.
PeriodSystem build_genus_two_ends(const std::vector<double>& a, End3Variant variant = End3Variant::pole1);

double scherk_b1(const std::array<double, 5>& a, ScherkOrientation orientation);
/// The Gauss map g of the Scherk families.
GaussMapSpec scherk_gauss_map(const std::array<double, 5>& a, ScherkOrientation orientation);
PeriodSystem build_scherk(const std::array<double, 5>& a, ScherkOrientation orientation);

/// Theta-quotient data before closure.  Throws DomainError when the zero and
/// pole divisors do not balance on the torus.
WeierstrassTriple torus_end_data(cplx tau, cplx end, TorusVariant variant);
TorusClosure build_torus_end(cplx tau, cplx end, TorusVariant variant, const QuadratureConfig& cfg = {});

// Specs and instances -------------------------------------------------------

struct MeshSettings {
  int resolution = 64;
  double clearance = 1e-2;
  int copies = 2;  // Scherk tiling per direction
};

struct FamilySpec {
  FamilyKind family = FamilyKind::stacked_planes;
  int n = 2;
  std::vector<double> a;
  cplx tau{0.0, 1.2};
  cplx end{0.5, 0.0};
  TorusVariant torus_variant = TorusVariant::half;
  std::pair<double, double> initial{0.1, 0.3};
  MeshSettings mesh;
  QuadratureConfig quadrature;

  /// Canonical parameters for a family (the reference examples).
  static FamilySpec defaults(FamilyKind family);
  /// Applies "key=value" overrides (n, a, tau, end, variant, initial, resolution, clearance, copies, tol).
  void apply(const std::string& assignment);
  void validate() const;
};

FamilySpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const FamilySpec& spec);
FamilySpec load_spec(const std::string& path);

struct FamilyInstance {
  FamilySpec spec;
  WeierstrassTriple triple;  // closed
  std::vector<Cycle> cycles;
  std::vector<PeriodCondition> conditions;
  std::vector<cplx> lambdas;
  double period_residual = 0;
  std::vector<std::optional<cplx>> ends;  // nullopt: infinity
  int euler_characteristic = 2;          // of the compact domain
  std::vector<Vec3> translations;         // lattice of the doubly periodic families
  std::optional<MinimalScherkResult> minimal;
  std::optional<TorusClosure> torus;

  HarmonicMapEval map() const;
};

FamilyInstance build_family(const FamilySpec& spec);

// Meshing -------------------------------------------------------------------

/// Family charts: O-grids around punctures for the sphere and torus families,
/// a log-polar grid on the upper half plane for the hyperelliptic families,
/// then reflected copies (and lattice translates for Scherk).
SurfaceMesh tessellate(const FamilyInstance& instance, int resolution, double clearance,
                       bool parallel = true);
/// Disk of radius 1/clearance for a triple on the plane (single end at infinity).
SurfaceMesh tessellate_plane(const HarmonicMapEval& eval, int resolution, double clearance,
                             bool parallel = true);

void write_obj(const SurfaceMesh& mesh, const std::string& path);

// Reports -------------------------------------------------------------------

struct RunReport {
  std::string family;
  std::vector<cplx> lambdas;
  double period_residual = 0;
  double harmonicity_residual = 0;
  double conformality_defect = 0;
  std::vector<EndDescriptor> ends;
  double mesh_total_curvature = 0;
  double formula_total_curvature = 0;
  double corrected_total_curvature = 0;
  double wall_time = 0;
  std::optional<std::pair<double, double>> scherk_parameters;
  std::size_t vertices = 0, faces = 0;
};

/// Deterministic probe set away from the features of an instance.
std::vector<cplx> probe_points(const FamilyInstance& instance, int count, double clearance);
/// Probe clearance used by diagnose: 1, or 0.7 on the torus cell.
double default_probe_clearance(const FamilyInstance& instance);

RunReport diagnose(const FamilyInstance& instance, const SurfaceMesh* mesh);
nlohmann::json report_to_json(const RunReport& report);

}  // namespace harmsurf
