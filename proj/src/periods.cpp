#include "harmsurf/periods.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "harmsurf/gallery.hpp"
#include "harmsurf/parallel.hpp"

namespace harmsurf {

WeierstrassTriple PeriodSystem::corrected(std::span<const cplx> lambdas) const {
  if (lambdas.size() != slots.size()) throw ClosureError("lambda count does not match the slots");
  WeierstrassTriple out = triple;
  for (std::size_t s = 0; s < slots.size(); ++s)
    out.omega[slots[s].form] = out.omega[slots[s].form] + lambdas[s] * slots[s].correction;
  return out;
}

AssembledSystem assemble_system(const PeriodSystem& sys, const QuadratureConfig& cfg, bool parallel) {
  const std::size_t nc = sys.conditions.size(), ns = sys.slots.size(), ncyc = sys.cycles.size();
  for (const auto& c : sys.conditions)
    if (c.cycle < 0 || c.cycle >= static_cast<int>(ncyc) || c.form < 0 || c.form > 2)
      throw ClosureError("period condition refers to a missing cycle or form");
  AssembledSystem out;
  out.base_periods.assign(nc, 0.0);
  out.slot_periods.assign(ns, std::vector<cplx>(ncyc, 0.0));
  // Jobs: every condition's base period, then every (slot, cycle) pair.
  const std::size_t jobs = nc + ns * ncyc;
  parallel_for(
      jobs,
      [&](std::size_t j) {
        if (j < nc) {
          const auto& c = sys.conditions[j];
          out.base_periods[j] = integrate_cycle(sys.triple.omega[c.form], sys.cycles[c.cycle], cfg);
        } else {
          const std::size_t s = (j - nc) / ncyc, k = (j - nc) % ncyc;
          out.slot_periods[s][k] = integrate_cycle(sys.slots[s].correction, sys.cycles[k], cfg);
        }
      },
      parallel);
  out.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nc), static_cast<Eigen::Index>(2 * ns));
  out.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nc));
  for (std::size_t r = 0; r < nc; ++r) {
    const auto& c = sys.conditions[r];
    out.b(r) = c.target - out.base_periods[r].real();
    for (std::size_t s = 0; s < ns; ++s) {
      if (sys.slots[s].form != c.form) continue;
      const cplx P = out.slot_periods[s][c.cycle];
      out.A(r, 2 * s) = P.real();
      out.A(r, 2 * s + 1) = -P.imag();
    }
  }
  return out;
}

double verify_conditions(const WeierstrassTriple& triple, std::span<const Cycle> cycles,
                         std::span<const PeriodCondition> conditions, const QuadratureConfig& cfg) {
  std::vector<double> err(conditions.size(), 0.0);
  parallel_for(conditions.size(), [&](std::size_t i) {
    const auto& c = conditions[i];
    err[i] = std::abs(integrate_cycle(triple.omega[c.form], cycles[c.cycle], cfg).real() - c.target);
  });
  double worst = 0;
  for (double e : err) worst = std::max(worst, e);
  return worst;
}

double verify_closed(const WeierstrassTriple& triple, std::span<const Cycle> cycles,
                     const QuadratureConfig& cfg) {
  std::vector<PeriodCondition> conds;
  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (int k = 0; k < 3; ++k) {
      if (!cycles[i].closed() && triple.omega[k].single_valued()) continue;
      conds.push_back({static_cast<int>(i), k, 0.0});
    }
  return verify_conditions(triple, cycles, conds, cfg);
}

ClosureResult close_periods(const PeriodSystem& sys, const QuadratureConfig& cfg, double tolerance) {
  const AssembledSystem as = assemble_system(sys, cfg);
  ClosureResult out;
  out.basis_periods = as.slot_periods;
  const auto cols = as.A.cols();
  if (cols > 0) {
    if (as.A.rows() < cols) throw ClosureError("period system is underdetermined");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(as.A);
    qr.setThreshold(1e-12);
    out.rank = static_cast<int>(qr.rank());
    if (out.rank < cols) {
      std::ostringstream os;
      os << "rank-deficient period system: rank " << out.rank << ", null space dimension "
         << (cols - out.rank);
      throw ClosureError(os.str());
    }
    const Eigen::VectorXd x = qr.solve(as.b);
    for (Eigen::Index s = 0; s < cols / 2; ++s) out.lambdas.emplace_back(x(2 * s), x(2 * s + 1));
  }
  out.triple = sys.corrected(out.lambdas);
  out.residual = verify_conditions(out.triple, sys.cycles, sys.conditions, cfg);
  if (!(out.residual <= tolerance)) {
    std::ostringstream os;
    os << "period residual " << out.residual << " exceeds tolerance " << tolerance;
    throw ClosureError(os.str());
  }
  return out;
}

TorusClosure close_torus_periods(const WeierstrassTriple& triple, const QuadratureConfig& cfg) {
  const auto* torus = std::get_if<RectTorus>(&triple.domain);
  if (!torus) throw DomainError("close_torus_periods needs a torus domain");
  const auto cycles = canonical_cycles(triple.domain);
  const cplx tau = torus->tau();
  TorusClosure out;
  out.triple = triple;
  std::array<cplx, 3> ph{}, pv{};
  for (int k = 0; k < 3; ++k) {
    ph[k] = integrate_cycle(triple.omega[k], cycles[0], cfg);
    pv[k] = integrate_cycle(triple.omega[k], cycles[1], cfg);
    out.alpha_beta[k] = cplx(ph[k].real(), (pv[k] / tau).imag());
  }
  // Real parts of the corrected lattice periods for a trial coefficient c.
  auto defect = [&](int k, cplx c) {
    return std::max(std::abs((ph[k] + c).real()), std::abs((pv[k] + c * tau).real()));
  };
  double best[2] = {0, 0};
  for (int k = 0; k < 3; ++k) {
    best[0] = std::max(best[0], defect(k, out.alpha_beta[k]));
    best[1] = std::max(best[1], defect(k, -out.alpha_beta[k]));
  }
  const double scale = 1e-10 * std::max(1.0, std::abs(tau));
  if (best[0] <= scale || best[1] <= scale) {
    out.sign = best[0] <= best[1] ? 1 : -1;
    for (int k = 0; k < 3; ++k) out.correction[k] = double(out.sign) * out.alpha_beta[k];
  } else {
    out.sign = 0;
    for (int k = 0; k < 3; ++k) {
      const double x = -ph[k].real();
      const double y = (pv[k].real() + x * tau.real()) / tau.imag();
      out.correction[k] = cplx(x, y);
    }
  }
  for (int k = 0; k < 3; ++k)
    if (out.correction[k] != 0.0)
      out.triple.omega[k] = out.triple.omega[k] + OneForm::constant_dz(out.correction[k]);
  out.residual = verify_closed(out.triple, cycles, cfg);
  return out;
}

namespace {

std::array<double, 2> minimal_scherk_defect(double a1, double a2, const QuadratureConfig& cfg) {
  const PeriodSystem sys = build_scherk({a1, a2, 1.0, 1.0 / a2, 1.0 / a1}, ScherkOrientation::outward);
  const double f1 = integrate_cycle(sys.triple.omega[0], sys.cycles[0], cfg).real();
  const double f2 = integrate_cycle(sys.triple.omega[1], sys.cycles[1], cfg).real();
  return {f1, f2};
}

bool admissible(double a1, double a2) { return a1 > 0 && a1 < a2 && a2 < 1; }

}  // namespace

MinimalScherkResult solve_minimal_scherk(std::pair<double, double> initial, const QuadratureConfig& cfg) {
  double x[2] = {initial.first, initial.second};
  if (!admissible(x[0], x[1])) throw ConfigError("minimal Scherk: need 0 < a1 < a2 < 1");
  auto F = minimal_scherk_defect(x[0], x[1], cfg);
  MinimalScherkResult out;
  for (int iter = 1; iter <= 50; ++iter) {
    double J[2][2];
    for (int j = 0; j < 2; ++j) {
      const double h = 1e-6 * x[j];
      double xp[2] = {x[0], x[1]}, xm[2] = {x[0], x[1]};
      xp[j] += h;
      xm[j] -= h;
      const auto fp = minimal_scherk_defect(xp[0], xp[1], cfg);
      const auto fm = minimal_scherk_defect(xm[0], xm[1], cfg);
      for (int i = 0; i < 2; ++i) J[i][j] = (fp[i] - fm[i]) / (2 * h);
    }
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (det == 0 || !std::isfinite(det)) throw ClosureError("minimal Scherk: singular Jacobian");
    const double dx[2] = {-(J[1][1] * F[0] - J[0][1] * F[1]) / det,
                          -(-J[1][0] * F[0] + J[0][0] * F[1]) / det};
    const double fnorm = std::hypot(F[0], F[1]);
    double t = 1.0;
    bool accepted = false;
    for (int shrink = 0; shrink < 30; ++shrink, t *= 0.5) {
      const double y0 = x[0] + t * dx[0], y1 = x[1] + t * dx[1];
      if (!admissible(y0, y1)) continue;
      const auto Fy = minimal_scherk_defect(y0, y1, cfg);
      if (std::hypot(Fy[0], Fy[1]) < fnorm || fnorm < 1e-13) {
        x[0] = y0;
        x[1] = y1;
        F = Fy;
        accepted = true;
        break;
      }
    }
    out.iterations = iter;
    if (!accepted) {
      if (fnorm < 1e-10) break;
      throw ClosureError("minimal Scherk: Newton step leaves the admissible region");
    }
    if (std::hypot(t * dx[0], t * dx[1]) < 1e-13 * std::hypot(x[0], x[1])) break;
    if (iter == 50) throw ClosureError("minimal Scherk: Newton iteration did not converge");
  }
  out.a1 = x[0];
  out.a2 = x[1];
  out.residual = std::max(std::abs(F[0]), std::abs(F[1]));
  return out;
}

}  // namespace harmsurf
