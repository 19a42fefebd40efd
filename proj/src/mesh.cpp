// Family tessellations.  Each chart patch is a structured grid of parameter
// points; vertex positions come from short segment integrals marched out from
// one anchor per patch.
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "harmsurf/gallery.hpp"
#include "harmsurf/parallel.hpp"

namespace harmsurf {

namespace {

struct Builder {
  const HarmonicMapEval& eval;
  std::vector<cplx> z;
  std::vector<char> at_infinity;
  std::vector<Vec3> pos;
  std::vector<char> known;
  std::vector<std::array<int, 3>> faces;
  std::map<std::pair<long long, long long>, int> shared;

  explicit Builder(const HarmonicMapEval& e) : eval(e) {}

  int add(cplx p, bool share = false) {
    if (share) {
      // Edges shared by two patches are sampled from opposite ends.
      const auto key = std::make_pair(std::llround(p.real() * 1e9), std::llround(p.imag() * 1e9));
      const auto it = shared.find(key);
      if (it != shared.end()) return it->second;
      shared[key] = static_cast<int>(z.size());
    }
    z.push_back(p);
    at_infinity.push_back(0);
    pos.emplace_back();
    known.push_back(0);
    return static_cast<int>(z.size()) - 1;
  }

  int add_infinity() {
    const int id = add(0.0);
    at_infinity[id] = 1;
    return id;
  }

  // Re of the integral from vertex a to vertex b.
  Vec3 step(int a, int b) const {
    if (at_infinity[a] || at_infinity[b]) {
      const int fin = at_infinity[a] ? b : a;
      const Vec3 d = chart_step(z[fin]);
      return at_infinity[b] ? d : -1.0 * d;
    }
    const PathPiece piece = PathPiece::line(z[a], z[b]);
    return eval.integrate(std::span<const PathPiece>(&piece, 1));
  }

  // From a finite point to infinity through the chart z = 1/t.
  Vec3 chart_step(cplx from) const {
    const LocalChart chart = chart_at(eval.triple().domain, std::nullopt);
    const cplx t0 = 1.0 / from;
    const auto& gl = detail::gauss_legendre_unit(20);
    constexpr int pieces = 8;
    FormValues acc{};
    for (int p = 0; p < pieces; ++p)
      for (const auto& [x, w] : gl) {
        const double s = (p + x) / pieces;
        const cplx t = t0 * (1.0 - s);
        for (int k = 0; k < 3; ++k) acc[k] += w * eval.triple().omega[k].in_chart(chart, t).at(t);
      }
    Vec3 out;
    for (int k = 0; k < 3; ++k) out[k] = (acc[k] * (-t0) / double(pieces)).real();
    return out;
  }

  void anchor(int v) {
    if (known[v]) return;
    pos[v] = eval(z[v]);
    known[v] = 1;
  }

  void advance(int from, int to) {
    if (known[to]) return;
    pos[to] = pos[from] + step(from, to);
    known[to] = 1;
  }
};

// ids[i][j]: ring i, column j.
using Grid = std::vector<std::vector<int>>;

void grid_faces(Builder& b, const Grid& g, bool closed) {
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const std::size_t m = g[i].size();
    const std::size_t last = closed ? m : m - 1;
    for (std::size_t j = 0; j < last; ++j) {
      const std::size_t k = (j + 1) % m;
      const int a = g[i][j], bb = g[i + 1][j], c = g[i + 1][k], d = g[i][k];
      b.faces.push_back({a, bb, c});
      b.faces.push_back({a, c, d});
    }
  }
}

// Fan from the outermost ring of a grid to a single vertex beyond it.
void fan_faces(Builder& b, const std::vector<int>& ring, int apex, bool closed, bool apex_outside) {
  const std::size_t m = ring.size();
  const std::size_t last = closed ? m : m - 1;
  for (std::size_t j = 0; j < last; ++j) {
    const int a = ring[j], c = ring[(j + 1) % m];
    if (apex_outside) b.faces.push_back({a, apex, c});
    else b.faces.push_back({apex, a, c});
  }
}

// March positions: along ring `ar` first, then every column in both directions.
void fill(Builder& b, const Grid& g, std::size_t ar, bool closed, bool parallel) {
  const auto& ring = g[ar];
  const std::size_t m = ring.size();
  std::size_t start = m;
  for (std::size_t j = 0; j < m; ++j)
    if (b.known[ring[j]]) {
      start = j;
      break;
    }
  if (start == m) {
    start = m / 2;
    b.anchor(ring[start]);
  }
  for (std::size_t j = start + 1; j < m; ++j) b.advance(ring[j - 1], ring[j]);
  if (closed) {
    if (start > 0) b.advance(ring[m - 1], ring[0]);
    for (std::size_t j = 1; j < start; ++j) b.advance(ring[j - 1], ring[j]);
  } else {
    for (std::size_t j = start; j-- > 0;) b.advance(ring[j + 1], ring[j]);
  }
  parallel_for(
      m,
      [&](std::size_t j) {
        for (std::size_t i = ar; i-- > 0;) b.advance(g[i + 1][j], g[i][j]);
        for (std::size_t i = ar + 1; i < g.size(); ++i) b.advance(g[i - 1][j], g[i][j]);
      },
      parallel);
}

std::vector<double> log_rings(double lo, double hi, int count) {
  std::vector<double> r(count + 1);
  for (int i = 0; i <= count; ++i) r[i] = lo * std::pow(hi / lo, double(i) / count);
  r.front() = lo;
  r.back() = hi;
  return r;
}

// O-grid around `center`: log rings from `hole` to `rho`, then rings blending
// the circle of radius rho into the boundary polygon.  Column j follows the
// ray towards boundary[j].
Grid o_grid(Builder& b, cplx center, const std::vector<cplx>& boundary, double hole, double rho, int log_count,
            int blend_count) {
  const auto radii = log_rings(hole, rho, log_count);
  Grid g;
  std::vector<cplx> dirs;
  std::vector<double> reach;
  for (const cplx& p : boundary) {
    const cplx d = p - center;
    dirs.push_back(d / std::abs(d));
    reach.push_back(std::abs(d));
  }
  auto on_axis = [&](cplx p, std::size_t j) {
    // Rays along the real axis stay exactly real.
    return dirs[j].imag() == 0 ? cplx(p.real(), 0.0) : p;
  };
  for (double r : radii) {
    std::vector<int> ring;
    for (std::size_t j = 0; j < dirs.size(); ++j) ring.push_back(b.add(on_axis(center + r * dirs[j], j)));
    g.push_back(ring);
  }
  for (int i = 1; i <= blend_count; ++i) {
    const double s = double(i) / blend_count;
    std::vector<int> ring;
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      if (i == blend_count) {
        ring.push_back(b.add(boundary[j], true));
      } else {
        const double r = rho + s * (reach[j] - rho);
        ring.push_back(b.add(on_axis(center + r * dirs[j], j)));
      }
    }
    g.push_back(ring);
  }
  return g;
}

std::vector<cplx> polyline(const std::vector<cplx>& corners, const std::vector<int>& counts) {
  std::vector<cplx> out;
  for (std::size_t e = 0; e + 1 < corners.size(); ++e)
    for (int k = 0; k < counts[e]; ++k) {
      const double s = double(k) / counts[e];
      out.push_back(corners[e] + s * (corners[e + 1] - corners[e]));
    }
  out.push_back(corners.back());
  return out;
}

void compute_normals(const Builder& b, std::vector<Vec3>& normals) {
  const auto& t = b.eval.triple();
  const auto* curve = std::get_if<HyperellipticCurve>(&t.domain);
  normals.assign(b.z.size(), Vec3{});
  std::vector<char> ok(b.z.size(), 0);
  parallel_for(b.z.size(), [&](std::size_t v) {
    try {
      if (b.at_infinity[v]) {
        normals[v] = gauss_map_in_chart(t, chart_at(t.domain, std::nullopt), 0.0);
      } else if (curve && curve->is_branch_point(b.z[v], 0)) {
        normals[v] = gauss_map_in_chart(t, chart_at(t.domain, b.z[v]), 0.0);
      } else {
        normals[v] = gauss_map(t.values_at(PathPoint{b.z[v], 0.0, Bank::upper}));
      }
      ok[v] = 1;
    } catch (const DomainError&) {
    }
  });
  // Where the Gauss map is undefined fall back to the face normals around the vertex.
  std::vector<Vec3> acc(b.z.size());
  for (const auto& f : b.faces) {
    const Vec3 n = cross(b.pos[f[1]] - b.pos[f[0]], b.pos[f[2]] - b.pos[f[0]]);
    for (int v : f) acc[v] += n;
  }
  for (std::size_t v = 0; v < b.z.size(); ++v)
    if (!ok[v]) {
      const double l = norm(acc[v]);
      normals[v] = l > 0 ? acc[v] * (1.0 / l) : Vec3{0, 0, 1};
    }
}

// A copy of the base patch set under an isometry x -> R x + c (R diagonal).
struct Copy {
  Vec3 diag{1, 1, 1};
  Vec3 shift;
  bool flip = false;

  Vec3 apply(const Vec3& x) const { return {diag.x * x.x + shift.x, diag.y * x.y + shift.y, diag.z * x.z + shift.z}; }
  Vec3 rotate(const Vec3& n) const { return {diag.x * n.x, diag.y * n.y, diag.z * n.z}; }
};

struct Weld {
  int copy_a, vertex_a, copy_b, vertex_b;
};

double weld_tolerance(const Vec3& p) { return 1e-7 * std::max(1.0, max_abs(p)); }

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

SurfaceMesh assemble(const Builder& b, const std::vector<Copy>& copies, const std::vector<Weld>& welds,
                     bool required, const std::string& what) {
  const int nv = static_cast<int>(b.z.size());
  std::vector<Vec3> base_normals;
  compute_normals(b, base_normals);
  const int total = nv * static_cast<int>(copies.size());
  std::vector<int> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto position = [&](int c, int v) { return copies[c].apply(b.pos[v]); };
  double max_gap = 0;
  int open = 0;
  for (const auto& w : welds) {
    const Vec3 pa = position(w.copy_a, w.vertex_a), pb = position(w.copy_b, w.vertex_b);
    const double gap = max_abs(pa - pb);
    if (gap <= weld_tolerance(pa)) {
      max_gap = std::max(max_gap, gap);
      const int ra = find_root(parent, w.copy_a * nv + w.vertex_a);
      const int rb = find_root(parent, w.copy_b * nv + w.vertex_b);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    } else if (required) {
      std::ostringstream os;
      os << what << ": weld mismatch " << gap << " at parameter (" << b.z[w.vertex_a].real() << ", "
         << b.z[w.vertex_a].imag() << ")";
      throw MeshError(os.str());
    } else {
      ++open;
    }
  }
  SurfaceMesh mesh;
  std::vector<int> index(total, -1);
  for (int g = 0; g < total; ++g) {
    const int r = find_root(parent, g);
    if (index[r] < 0) {
      index[r] = static_cast<int>(mesh.vertices.size());
      const int c = r / nv, v = r % nv;
      mesh.vertices.push_back(position(c, v));
      mesh.normals.push_back(copies[c].rotate(base_normals[v]));
      const cplx zp = b.z[v];
      mesh.parameters.push_back(copies[c].flip ? std::conj(zp) : zp);
    }
    index[g] = index[r];
  }
  for (std::size_t c = 0; c < copies.size(); ++c)
    for (const auto& f : b.faces) {
      std::array<int, 3> t{index[c * nv + f[0]], index[c * nv + f[1]], index[c * nv + f[2]]};
      if (copies[c].flip) std::swap(t[1], t[2]);
      if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
      mesh.faces.push_back(t);
    }
  mesh.max_weld_gap = max_gap;
  mesh.metadata["open_seam_vertices"] = std::to_string(open);
  return mesh;
}

void check_faces(const SurfaceMesh& m) {
  for (const auto& f : m.faces) {
    const Vec3 n = cross(m.vertices[f[1]] - m.vertices[f[0]], m.vertices[f[2]] - m.vertices[f[0]]);
    if (!(norm(n) > 0)) throw MeshError("degenerate face in mesh");
  }
}

int log_count_for(double lo, double hi, int resolution) {
  return std::max(4, static_cast<int>(std::ceil(resolution * std::log(hi / lo) / (2 * pi))));
}

// Sphere with real punctures: half O-grids over unit cells around each
// puncture, a cap through infinity, then the mirror image in the lower half plane.
SurfaceMesh stacked_mesh(const HarmonicMapEval& eval, int n, int resolution, double clearance, bool parallel) {
  const double rho = 0.25;
  if (!(clearance < rho)) throw MeshError("clearance too large for the puncture patches");
  Builder b(eval);
  const int per_edge = std::max(2, resolution / 3);
  const int logs = log_count_for(clearance, rho, resolution);
  const int blends = std::max(2, resolution / 8);
  const double H = 1.0;
  for (int k = -n; k <= n; ++k) {
    const double left = double(2 * k - 1) / 2, right = double(2 * k + 1) / 2;
    const auto boundary =
        polyline({cplx(right, 0.0), cplx(right, H), cplx(left, H), cplx(left, 0.0)}, {per_edge, per_edge, per_edge});
    const Grid g = o_grid(b, cplx(k, 0.0), boundary, clearance, rho, logs, blends);
    grid_faces(b, g, false);
    fill(b, g, g.size() - 1, false, parallel);
  }
  // Cap: rays from the origin through the outer polyline out to infinity.
  const double edge = double(2 * n + 1) / 2;
  std::vector<cplx> corners{cplx(edge, 0.0), cplx(edge, H)};
  std::vector<int> counts{per_edge};
  for (int k = n; k >= -n; --k) {
    corners.emplace_back(double(2 * k - 1) / 2, H);
    counts.push_back(per_edge);
  }
  corners.emplace_back(-edge, 0.0);
  counts.push_back(per_edge);
  const auto outer = polyline(corners, counts);
  const int cap_rings = std::max(4, resolution / 4);
  Grid cap;
  for (int i = 0; i < cap_rings; ++i) {
    const double s = 1.0 - double(i) / cap_rings;
    std::vector<int> ring;
    for (const cplx& p : outer) {
      if (i == 0) ring.push_back(b.add(p, true));
      else ring.push_back(b.add(p.imag() == 0 ? cplx(p.real() / s, 0.0) : p / s));
    }
    cap.push_back(ring);
  }
  grid_faces(b, cap, false);
  fill(b, cap, 0, false, parallel);
  const int infinity = b.add_infinity();
  b.advance(cap.back()[0], infinity);
  fan_faces(b, cap.back(), infinity, false, true);

  // Mirror: f(conj z) = R f(z) + c with R = diag(1, -1, 1).
  Copy mirror{{1, -1, 1}, {}, true};
  int seam = -1;
  for (std::size_t v = 0; v < b.z.size(); ++v)
    if (b.z[v].imag() == 0 && !b.at_infinity[v]) {
      seam = static_cast<int>(v);
      break;
    }
  mirror.shift = b.pos[seam] - mirror.rotate(b.pos[seam]);
  std::vector<Weld> welds;
  for (std::size_t v = 0; v < b.z.size(); ++v)
    if (b.z[v].imag() == 0) welds.push_back({0, int(v), 1, int(v)});
  return assemble(b, {Copy{}, mirror}, welds, true, "stacked planes");
}

// Upper half plane of sheet one in log-polar coordinates around 0, then the
// images under the two reflections and their product.
SurfaceMesh hyperelliptic_mesh(const HarmonicMapEval& eval, int resolution, double clearance, bool required,
                               bool parallel) {
  const auto& curve = std::get<HyperellipticCurve>(eval.triple().domain);
  std::vector<double> marks;
  for (double x : curve.branch_points())
    if (x != 0) marks.push_back(std::abs(x));
  for (const cplx& p : curve.punctures())
    if (p != 0.0) marks.push_back(std::abs(p));
  double lo_mark = *std::min_element(marks.begin(), marks.end());
  double hi_mark = *std::max_element(marks.begin(), marks.end());
  const double hole = std::min(clearance, 0.5 * lo_mark);
  const double outer = std::max(1.0 / clearance, 2.0 * hi_mark);
  auto radii = log_rings(hole, outer, log_count_for(hole, outer, 2 * resolution));
  const double ratio = std::pow(outer / hole, 1.0 / (radii.size() - 1));
  // Put every |branch point| on a ring, dropping rings that would make slivers.
  std::vector<double> merged;
  for (double r : radii) {
    bool close = false;
    for (double m : marks) close = close || std::abs(std::log(r / m)) < 0.3 * std::log(ratio);
    if (!close || r == hole || r == outer) merged.push_back(r);
  }
  merged.insert(merged.end(), marks.begin(), marks.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  // Two adjacent marks need a ring between them, otherwise the lifts of the
  // real segment joining them collapse onto one edge.
  std::sort(marks.begin(), marks.end());
  for (std::size_t i = 0; i + 1 < merged.size(); ++i)
    if (std::binary_search(marks.begin(), marks.end(), merged[i]) &&
        std::binary_search(marks.begin(), marks.end(), merged[i + 1]))
      merged.insert(merged.begin() + static_cast<long>(i) + 1, std::sqrt(merged[i] * merged[i + 1]));

  Builder b(eval);
  const int cols = std::max(4, resolution / 2);
  Grid g;
  for (double r : merged) {
    std::vector<int> ring;
    for (int j = 0; j <= cols; ++j) {
      cplx p;
      if (j == 0) p = cplx(r, 0.0);
      else if (j == cols) p = cplx(-r, 0.0);
      else p = std::polar(r, pi * j / cols);
      ring.push_back(b.add(p));
    }
    g.push_back(ring);
  }
  grid_faces(b, g, false);
  fill(b, g, g.size() / 2, false, parallel);

  // Reflection constants from one seam vertex of each kind.
  const Vec3 Rs{1, -1, 1}, Rt{-1, 1, 1};
  int fixed_sigma = -1, fixed_w = -1;
  for (std::size_t v = 0; v < b.z.size(); ++v) {
    const cplx p = b.z[v];
    if (p.imag() != 0 || curve.is_branch_point(p, 0)) continue;
    if (curve.on_slit(p)) {
      if (fixed_w < 0 || p.real() > b.z[fixed_w].real()) fixed_w = static_cast<int>(v);
    } else if (fixed_sigma < 0 || p.real() > b.z[fixed_sigma].real()) {
      fixed_sigma = static_cast<int>(v);
    }
  }
  if (fixed_sigma < 0 || fixed_w < 0) throw MeshError("hyperelliptic mesh: no seam vertex for a reflection");
  Copy sigma{Rs, {}, true}, reflect_w{Rt, {}, true};
  sigma.shift = b.pos[fixed_sigma] - sigma.rotate(b.pos[fixed_sigma]);
  reflect_w.shift = b.pos[fixed_w] - reflect_w.rotate(b.pos[fixed_w]);
  // sigma reflect_w: x -> Rs (Rt x + c_t) + c_s.
  Copy both{{-1, -1, 1}, sigma.apply(reflect_w.shift), false};
  // Copies: 0 identity, 1 sigma, 2 reflect_w, 3 sigma reflect_w.
  const int times_sigma[4] = {1, 0, 3, 2}, times_w[4] = {2, 3, 0, 1};
  std::vector<Weld> welds;
  for (std::size_t v = 0; v < b.z.size(); ++v) {
    const cplx p = b.z[v];
    if (p.imag() != 0) continue;
    const bool branch = curve.is_branch_point(p, 0);
    const bool slit = curve.on_slit(p);
    for (int c = 0; c < 4; ++c) {
      if (branch || !slit) welds.push_back({c, int(v), times_sigma[c], int(v)});
      if (branch || slit) welds.push_back({c, int(v), times_w[c], int(v)});
    }
  }
  return assemble(b, {Copy{}, sigma, reflect_w, both}, welds, required, "hyperelliptic");
}

// Parallelogram cell centred on the end with an O-grid; opposite edges welded.
SurfaceMesh torus_mesh(const HarmonicMapEval& eval, int resolution, double clearance, bool parallel) {
  const auto& torus = std::get<RectTorus>(eval.triple().domain);
  if (torus.punctures().size() != 1) throw MeshError("torus mesh supports a single end");
  const cplx e = torus.punctures().front(), tau = torus.tau();
  const double rho = 0.25 * std::min(1.0, std::abs(tau));
  if (!(clearance < rho)) throw MeshError("clearance too large for the torus cell");
  // Two points per edge would weld into parallel edges between corner and midpoint.
  if (resolution < 12) throw MeshError("torus mesh needs resolution of at least 12");
  const int m = resolution / 4;
  const cplx c00 = e - 0.5 - 0.5 * tau, c10 = e + 0.5 - 0.5 * tau, c11 = e + 0.5 + 0.5 * tau,
             c01 = e - 0.5 + 0.5 * tau;
  auto boundary = polyline({c00, c10, c11, c01, c00}, {m, m, m, m});
  boundary.pop_back();
  Builder b(eval);
  const Grid g = o_grid(b, e, boundary, clearance, rho, log_count_for(clearance, rho, resolution),
                        std::max(2, resolution / 4));
  grid_faces(b, g, true);
  fill(b, g, g.size() - 1, true, parallel);
  const auto& ring = g.back();
  std::vector<Weld> welds;
  // bottom j <-> top (m - j), right j <-> left (m - j), over one full edge each.
  for (int j = 0; j <= m; ++j) {
    welds.push_back({0, ring[j], 0, ring[(3 * m - j) % (4 * m)]});
    welds.push_back({0, ring[m + j], 0, ring[(4 * m - j) % (4 * m)]});
  }
  return assemble(b, {Copy{}}, welds, true, "torus");
}

}  // namespace

SurfaceMesh tessellate_plane(const HarmonicMapEval& eval, int resolution, double clearance, bool parallel) {
  if (resolution < 4) throw MeshError("resolution must be at least 4");
  if (!(clearance > 0 && clearance < 1)) throw MeshError("clearance must lie in (0, 1)");
  const double R = 1.0 / clearance;
  const int rings = std::max(2, resolution / 2);
  Builder b(eval);
  const int center = b.add(0.0);
  b.anchor(center);
  Grid g;
  for (int i = 1; i <= rings; ++i) {
    std::vector<int> ring;
    const double r = R * i / rings;
    for (int j = 0; j < resolution; ++j) ring.push_back(b.add(std::polar(r, 2 * pi * j / resolution)));
    g.push_back(ring);
  }
  fan_faces(b, g.front(), center, true, false);
  grid_faces(b, g, true);
  parallel_for(
      static_cast<std::size_t>(resolution),
      [&](std::size_t j) {
        b.advance(center, g[0][j]);
        for (std::size_t i = 1; i < g.size(); ++i) b.advance(g[i - 1][j], g[i][j]);
      },
      parallel);
  SurfaceMesh mesh = assemble(b, {Copy{}}, {}, true, "plane");
  check_faces(mesh);
  return mesh;
}

SurfaceMesh tessellate(const FamilyInstance& inst, int resolution, double clearance, bool parallel) {
  if (resolution < 4) throw MeshError("resolution must be at least 4");
  if (!(clearance > 0)) throw MeshError("clearance must be positive");
  const HarmonicMapEval eval = inst.map();
  SurfaceMesh mesh;
  switch (inst.spec.family) {
    case FamilyKind::stacked_planes:
      mesh = stacked_mesh(eval, inst.spec.n, resolution, clearance, parallel);
      break;
    case FamilyKind::genus_two_ends:
    case FamilyKind::genus_two_ends_023:
      if (inst.spec.a.empty()) throw MeshError("the genus zero prototype has no hyperelliptic chart");
      mesh = hyperelliptic_mesh(eval, resolution, clearance, true, parallel);
      break;
    case FamilyKind::scherk_outward:
    case FamilyKind::scherk_inward:
    case FamilyKind::scherk_minimal: {
      const SurfaceMesh cell = hyperelliptic_mesh(eval, resolution, clearance, false, parallel);
      const int copies = inst.spec.mesh.copies;
      mesh.metadata = cell.metadata;
      mesh.max_weld_gap = cell.max_weld_gap;
      for (int i = 0; i < copies; ++i)
        for (int j = 0; j < copies; ++j) {
          const Vec3 shift = double(i) * inst.translations.at(0) + double(j) * inst.translations.at(1);
          const int off = static_cast<int>(mesh.vertices.size());
          for (const auto& v : cell.vertices) mesh.vertices.push_back(v + shift);
          mesh.normals.insert(mesh.normals.end(), cell.normals.begin(), cell.normals.end());
          mesh.parameters.insert(mesh.parameters.end(), cell.parameters.begin(), cell.parameters.end());
          for (const auto& f : cell.faces) mesh.faces.push_back({f[0] + off, f[1] + off, f[2] + off});
        }
      mesh.metadata["copies"] = std::to_string(copies);
      break;
    }
    case FamilyKind::torus_end:
      mesh = torus_mesh(eval, resolution, clearance, parallel);
      break;
  }
  check_faces(mesh);
  mesh.metadata["family"] = to_string(inst.spec.family);
  mesh.metadata["resolution"] = std::to_string(resolution);
  std::ostringstream os;
  os << clearance;
  mesh.metadata["clearance"] = os.str();
  return mesh;
}

void write_obj(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write " + path);
  out.precision(9);
  for (const auto& v : mesh.vertices) out << "v " << v.x << " " << v.y << " " << v.z << "\n";
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
  if (!out) throw MeshError("error while writing " + path);
}

}  // namespace harmsurf
