#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "harmsurf/gallery.hpp"

using namespace harmsurf;

namespace {

struct GenerateArgs {
  std::string family, config, out, meta;
  std::vector<std::string> params;
  int resolution = 0;
  double clearance = 0, tol = 0;
  bool serial = false;
};

FamilySpec resolve_spec(const GenerateArgs& g) {
  FamilySpec spec;
  if (!g.config.empty()) spec = load_spec(g.config);
  else if (!g.family.empty()) spec = FamilySpec::defaults(family_from_string(g.family));
  else throw ConfigError("either --family or --config is required");
  if (!g.config.empty() && !g.family.empty() && family_from_string(g.family) != spec.family)
    throw ConfigError("--family disagrees with the config file");
  for (const auto& p : g.params) spec.apply(p);
  if (g.resolution) spec.mesh.resolution = g.resolution;
  if (g.clearance) spec.mesh.clearance = g.clearance;
  if (g.tol) spec.quadrature.abs_tol = spec.quadrature.rel_tol = g.tol;
  spec.validate();
  return spec;
}

int generate(const GenerateArgs& g) {
  const auto t0 = std::chrono::steady_clock::now();
  const FamilySpec spec = resolve_spec(g);
  const FamilyInstance inst = build_family(spec);
  const SurfaceMesh mesh = tessellate(inst, spec.mesh.resolution, spec.mesh.clearance, !g.serial);
  write_obj(mesh, g.out);
  RunReport report = diagnose(inst, &mesh);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!g.meta.empty()) {
    nlohmann::json j = report_to_json(report);
    j["spec"] = spec_to_json(spec);
    std::ofstream out(g.meta);
    out << j.dump(2) << "\n";
    if (!out) throw ConfigError("cannot write " + g.meta);
  }
  std::printf("%s: %zu vertices, %zu faces -> %s\n", report.family.c_str(), report.vertices, report.faces,
              g.out.c_str());
  return 0;
}

int verify(const GenerateArgs& g) {
  const FamilySpec spec = resolve_spec(g);
  const FamilyInstance inst = build_family(spec);
  std::optional<SurfaceMesh> mesh;
  try {
    mesh = tessellate(inst, spec.mesh.resolution, spec.mesh.clearance, !g.serial);
  } catch (const MeshError& e) {
    std::fprintf(stderr, "note: no mesh (%s)\n", e.what());
  }
  const RunReport r = diagnose(inst, mesh ? &*mesh : nullptr);
  std::printf("family                 %s\n", r.family.c_str());
  for (std::size_t k = 0; k < r.lambdas.size(); ++k)
    std::printf("lambda[%zu]              %.12g %+.12gi\n", k + 1, r.lambdas[k].real(), r.lambdas[k].imag());
  std::printf("period_residual        %.3e\n", r.period_residual);
  std::printf("harmonicity_residual   %.3e\n", r.harmonicity_residual);
  std::printf("conformality_defect    %.3e\n", r.conformality_defect);
  for (const auto& e : r.ends) {
    const std::string where =
        e.puncture ? "(" + std::to_string(e.puncture->real()) + "," + std::to_string(e.puncture->imag()) + ")"
                   : "infinity";
    std::printf("end %-18s type (%d,%d,%d)", where.c_str(), e.type_tuple[0], e.type_tuple[1], e.type_tuple[2]);
    if (e.limiting_normal)
      std::printf(" normal (%.6f, %.6f, %.6f)", e.limiting_normal->x, e.limiting_normal->y, e.limiting_normal->z);
    std::printf("\n");
  }
  if (mesh) std::printf("total_curvature mesh   %.6f\n", r.mesh_total_curvature);
  std::printf("total_curvature formula %.6f\n", r.formula_total_curvature);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harmonic surfaces from Weierstrass data"};
  app.require_subcommand(1);

  GenerateArgs g;
  auto* gen = app.add_subcommand("generate", "build, close, tessellate and write an OBJ mesh");
  gen->add_option("--family", g.family, "stacked-planes, genus-two-ends, genus-two-ends-023, scherk-outward, "
                                        "scherk-inward, scherk-minimal, torus-end");
  gen->add_option("--param", g.params, "key=value override")->allow_extra_args(false);
  gen->add_option("--config", g.config, "spec file (JSON)");
  gen->add_option("--out", g.out, "OBJ output")->required();
  gen->add_option("--meta", g.meta, "report output (JSON)");
  gen->add_option("--resolution", g.resolution);
  gen->add_option("--clearance", g.clearance);
  gen->add_option("--tol", g.tol);
  gen->add_flag("--serial", g.serial, "single threaded vertex evaluation");

  GenerateArgs v;
  auto* ver = app.add_subcommand("verify", "print residuals, end table and curvature pair");
  ver->add_option("--config", v.config)->required();
  ver->add_option("--param", v.params)->allow_extra_args(false);
  ver->add_option("--resolution", v.resolution);

  std::vector<double> initial{0.1, 0.3};
  auto* sms = app.add_subcommand("solve-minimal-scherk", "Newton solve for the minimal Scherk parameters");
  sms->add_option("--initial", initial, "a1,a2")->delimiter(',')->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return exit_code(ErrorKind::config);
  }

  try {
    if (*gen) return generate(g);
    if (*ver) return verify(v);
    const auto r = solve_minimal_scherk({initial.at(0), initial.at(1)}, QuadratureConfig{});
    std::printf("a1 %.10f\na2 %.10f\niterations %d\nresidual %.3e\n", r.a1, r.a2, r.iterations, r.residual);
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return 1;
  }
}
