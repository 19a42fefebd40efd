#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "harmsurf/gallery.hpp"

using namespace harmsurf;

namespace {

// Largest distance from a point of `a` to the nearest point of `b` (sweep on x).
double directed_hausdorff(std::vector<Vec3> a, std::vector<Vec3> b) {
  std::sort(b.begin(), b.end(), [](const Vec3& p, const Vec3& q) { return p.x < q.x; });
  double worst = 0;
  for (const Vec3& p : a) {
    double best = INFINITY;
    auto it = std::lower_bound(b.begin(), b.end(), p.x, [](const Vec3& q, double x) { return q.x < x; });
    for (auto j = it; j != b.end() && j->x - p.x < best; ++j) best = std::min(best, norm(*j - p));
    for (auto j = it; j != b.begin() && p.x - std::prev(j)->x < best;) {
      --j;
      best = std::min(best, norm(*j - p));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

FamilyInstance instance(FamilyKind kind, int n = 2) {
  FamilySpec spec = FamilySpec::defaults(kind);
  spec.n = n;
  return build_family(spec);
}

}  // namespace

TEST_CASE("stacked planes n=1: three flares ordered by height") {
  const FamilyInstance inst = instance(FamilyKind::stacked_planes, 1);
  const SurfaceMesh m = tessellate(inst, 64, 1e-2);
  CHECK(m.boundary_loops() == 3);
  CHECK(m.euler_characteristic() == -1);
  CHECK(m.max_weld_gap < 1e-7);
  // Mean height of the vertices around each puncture.
  double h[3] = {0, 0, 0};
  int count[3] = {0, 0, 0};
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    for (int k = -1; k <= 1; ++k)
      if (std::abs(m.parameters[v] - double(k)) < 0.02) {
        h[k + 1] += m.vertices[v].z;
        ++count[k + 1];
      }
  for (int k = 0; k < 3; ++k) {
    REQUIRE(count[k] > 0);
    h[k] /= count[k];
  }
  // f3 = log|z+1|/|z-1| increases along the real axis.
  CHECK(h[0] < h[1]);
  CHECK(h[1] < h[2]);
}

TEST_CASE("eight-root genus-two mesh has two symmetry planes") {
  const SurfaceMesh m = tessellate(instance(FamilyKind::genus_two_ends), 32, 1e-2);
  for (int axis : {0, 1}) {
    double lo = INFINITY, hi = -INFINITY;
    for (const Vec3& v : m.vertices) {
      lo = std::min(lo, v[axis]);
      hi = std::max(hi, v[axis]);
    }
    std::vector<Vec3> mirrored = m.vertices;
    for (Vec3& v : mirrored) v[axis] = lo + hi - v[axis];
    CHECK(directed_hausdorff(mirrored, m.vertices) < 1e-6);
  }
}

TEST_CASE("torus mesh closes up") {
  const SurfaceMesh m = tessellate(instance(FamilyKind::torus_end), 32, 1e-2);
  CHECK(m.max_weld_gap < 1e-7);
  CHECK(m.boundary_loops() == 1);
  CHECK(m.euler_characteristic() == -1);
}

TEST_CASE("serial and parallel tessellation agree") {
  const FamilyInstance inst = instance(FamilyKind::genus_two_ends_023);
  const SurfaceMesh a = tessellate(inst, 24, 1e-2, false);
  const SurfaceMesh b = tessellate(inst, 24, 1e-2, true);
  REQUIRE(a.vertices.size() == b.vertices.size());
  double d = 0;
  for (std::size_t i = 0; i < a.vertices.size(); ++i) d = std::max(d, max_abs(a.vertices[i] - b.vertices[i]));
  CHECK(d == 0.0);
  CHECK(a.faces == b.faces);
}

TEST_CASE("normals and faces") {
  for (auto kind : {FamilyKind::stacked_planes, FamilyKind::scherk_outward, FamilyKind::torus_end}) {
    const SurfaceMesh m = tessellate(instance(kind), 24, 1e-2);
    REQUIRE(m.normals.size() == m.vertices.size());
    for (const Vec3& n : m.normals) CHECK(std::abs(norm(n) - 1) < 1e-9);
    std::size_t agree = 0;
    for (const auto& f : m.faces) {
      const Vec3 fn = cross(m.vertices[f[1]] - m.vertices[f[0]], m.vertices[f[2]] - m.vertices[f[0]]);
      CHECK(norm(fn) > 0);
      agree += dot(fn, m.normals[f[0]] + m.normals[f[1]] + m.normals[f[2]]) > 0;
    }
    // Counterclockwise faces follow the Gauss map orientation.
    CHECK(agree > 0.99 * m.faces.size());
  }
}

TEST_CASE("planar disk for the graph surface") {
  const WeierstrassTriple g{PuncturedSphere(std::vector<cplx>{}, true),
                            {OneForm::constant_dz(1.0), OneForm::constant_dz(-I), OneForm::monomial(2)}, 0.0};
  const HarmonicMapEval f = HarmonicMapEval::unchecked(g);
  const SurfaceMesh m = tessellate_plane(f, 64, 0.1);
  CHECK(m.euler_characteristic() == 1);
  for (std::size_t v = 0; v < m.vertices.size(); v += 97) {
    const double x = m.parameters[v].real(), y = m.parameters[v].imag();
    CHECK(max_abs(m.vertices[v] - Vec3{x, y, x * x * x / 3 - x * y * y}) < 1e-8);
  }
  // Interior defect plus boundary turning is 2 pi chi.
  CHECK(m.interior_angle_defect() + m.boundary_turning() == doctest::Approx(2 * pi));
}

TEST_CASE("curvature of the stacked mesh against 2 pi chi - 2 pi sum n") {
  const SurfaceMesh m = tessellate(instance(FamilyKind::stacked_planes, 1), 64, 1e-2);
  CHECK(total_curvature(m) == doctest::Approx(-8 * pi).epsilon(1e-3));
}

TEST_CASE("bad settings") {
  const FamilyInstance inst = instance(FamilyKind::stacked_planes, 1);
  CHECK_THROWS_AS(tessellate(inst, 2, 1e-2), MeshError);
  CHECK_THROWS_AS(tessellate(inst, 32, 0.4), MeshError);
  CHECK_THROWS_AS(tessellate(instance(FamilyKind::torus_end), 32, 0.5), MeshError);
  CHECK_THROWS_AS(tessellate(instance(FamilyKind::torus_end), 8, 1e-2), MeshError);
}

TEST_CASE("OBJ output") {
  SurfaceMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1.0 / 3, 0}};
  m.faces = {{0, 1, 2}};
  const auto path = std::filesystem::temp_directory_path() / "harmsurf_test.obj";
  write_obj(m, path.string());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "v 0 0 0\nv 1 0 0\nv 0 0.333333333 0\nf 1 2 3\n");
  std::filesystem::remove(path);
}

TEST_CASE("coarse meshes stay manifold") {
  for (auto kind : {FamilyKind::stacked_planes, FamilyKind::genus_two_ends, FamilyKind::genus_two_ends_023,
                    FamilyKind::scherk_outward, FamilyKind::scherk_inward, FamilyKind::torus_end}) {
    const FamilyInstance inst = instance(kind);
    for (int r : {kind == FamilyKind::torus_end ? 12 : 8, 16, 24, 32}) {
      const std::string name = to_string(kind);
      CAPTURE(name);
      CAPTURE(r);
      const SurfaceMesh m = tessellate(inst, r, 1e-2);
      CHECK_NOTHROW(total_curvature(m));
    }
  }
}
