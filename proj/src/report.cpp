#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "harmsurf/gallery.hpp"

namespace harmsurf {

namespace {

double digits12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

nlohmann::json vec_json(const Vec3& v) { return {digits12(v.x), digits12(v.y), digits12(v.z)}; }

}  // namespace

std::vector<cplx> probe_points(const FamilyInstance& inst, int count, double clearance) {
  const auto& t = inst.triple;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::function<cplx()> draw;
  if (const auto* torus = std::get_if<RectTorus>(&t.domain)) {
    const cplx center = torus->punctures().empty() ? cplx(0.5, 0.0) : torus->punctures().front();
    const cplx tau = torus->tau();
    draw = [&, center, tau] { return center + u(rng) + u(rng) * tau; };
  } else {
    double far = 1.0, lo = 0, hi = 0;
    for (const cplx& f : finite_features(t.domain)) {
      far = std::max(far, std::abs(f));
      lo = std::min(lo, f.real());
      hi = std::max(hi, f.real());
    }
    if (std::holds_alternative<PuncturedSphere>(t.domain)) {
      draw = [&, lo, hi] { return cplx(0.5 * (lo + hi) + (hi - lo + 2) * u(rng), 3.0 * u(rng)); };
    } else {
      draw = [&, far] { return cplx(4 * far * u(rng), 4 * far * u(rng)); };
    }
  }
  std::vector<cplx> out;
  for (int tries = 0; static_cast<int>(out.size()) < count; ++tries) {
    if (tries > 10000 * count) throw DomainError("no probe points with the requested clearance");
    const cplx z = draw();
    if (feature_clearance(t, z) >= clearance) out.push_back(z);
  }
  return out;
}

double default_probe_clearance(const FamilyInstance& inst) {
  return std::holds_alternative<RectTorus>(inst.triple.domain) ? 0.7 : 1.0;
}

RunReport diagnose(const FamilyInstance& inst, const SurfaceMesh* mesh) {
  const auto start = std::chrono::steady_clock::now();
  RunReport r;
  r.family = to_string(inst.spec.family);
  r.lambdas = inst.lambdas;
  r.period_residual = inst.period_residual;
  const auto probes = probe_points(inst, 50, default_probe_clearance(inst));
  r.harmonicity_residual = harmonicity_residual(inst.map(), probes, 1e-3);
  r.conformality_defect = conformality_defect(inst.triple, probes);
  std::vector<int> orders;
  for (const auto& e : inst.ends) {
    r.ends.push_back(classify_end(inst.triple, e));
    orders.push_back(r.ends.back().order);
  }
  r.formula_total_curvature = formula_total_curvature(inst.euler_characteristic, orders);
  r.corrected_total_curvature = corrected_total_curvature(inst.euler_characteristic, orders);
  r.mesh_total_curvature = std::nan("");
  if (mesh) {
    r.mesh_total_curvature = total_curvature(*mesh);
    r.vertices = mesh->vertices.size();
    r.faces = mesh->faces.size();
  }
  if (inst.minimal) r.scherk_parameters = std::make_pair(inst.minimal->a1, inst.minimal->a2);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

nlohmann::json report_to_json(const RunReport& r) {
  nlohmann::json j;
  j["family"] = r.family;
  auto& lam = j["lambdas"] = nlohmann::json::array();
  for (const cplx& l : r.lambdas) lam.push_back({digits12(l.real()), digits12(l.imag())});
  j["period_residual"] = r.period_residual;
  j["harmonicity_residual"] = r.harmonicity_residual;
  j["conformality_defect"] = r.conformality_defect;
  auto& ends = j["ends"] = nlohmann::json::array();
  for (const auto& e : r.ends) {
    nlohmann::json d;
    if (e.puncture) d["puncture"] = {digits12(e.puncture->real()), digits12(e.puncture->imag())};
    else d["puncture"] = "infinity";
    d["pole_orders"] = e.pole_orders;
    d["order"] = e.order;
    d["type"] = e.type_tuple;
    if (e.limiting_normal) d["limiting_normal"] = vec_json(*e.limiting_normal);
    else d["limiting_normal"] = nullptr;
    if (!e.note.empty()) d["note"] = e.note;
    ends.push_back(d);
  }
  auto& curv = j["total_curvature"];
  if (std::isnan(r.mesh_total_curvature)) curv["mesh"] = nullptr;
  else curv["mesh"] = r.mesh_total_curvature;
  curv["formula"] = r.formula_total_curvature;
  curv["corrected"] = r.corrected_total_curvature;
  if (r.scherk_parameters)
    j["scherk_parameters"] = {digits12(r.scherk_parameters->first), digits12(r.scherk_parameters->second)};
  j["mesh"] = {{"vertices", r.vertices}, {"faces", r.faces}};
  j["wall_time"] = r.wall_time;
  return j;
}

}  // namespace harmsurf
