#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "harmsurf/forms.hpp"
#include "harmsurf/quadrature.hpp"

namespace harmsurf {

/// An unknown complex coefficient lambda multiplying `correction`, added to omega[form].
struct LambdaSlot {
  int form = 0;
  OneForm correction;
};

/// Re of the integral of omega[form] over cycles[cycle] must equal target.
struct PeriodCondition {
  int cycle = 0;
  int form = 0;
  double target = 0;
};

struct PeriodSystem {
  WeierstrassTriple triple;
  std::vector<Cycle> cycles;
  std::vector<LambdaSlot> slots;
  std::vector<PeriodCondition> conditions;

  WeierstrassTriple corrected(std::span<const cplx> lambdas) const;
};

struct AssembledSystem {
  Eigen::MatrixXd A;  // one row per condition, columns (Re, Im) per slot
  Eigen::VectorXd b;
  std::vector<cplx> base_periods;               // per condition
  std::vector<std::vector<cplx>> slot_periods;  // [slot][cycle]
};

struct ClosureResult {
  std::vector<cplx> lambdas;
  double residual = 0;  // max |Re period - target| after re-integration
  std::vector<std::vector<cplx>> basis_periods;  // [slot][cycle]
  WeierstrassTriple triple;                      // corrected forms
  int rank = 0;
};

/// Serial and OpenMP variants produce identical results.
AssembledSystem assemble_system(const PeriodSystem& sys, const QuadratureConfig& cfg,
                                bool parallel = true);

/// Least-squares solve (column-pivoted QR) followed by re-integration.
/// Throws ClosureError on rank deficiency or when the residual exceeds `tolerance`.
ClosureResult close_periods(const PeriodSystem& sys, const QuadratureConfig& cfg,
                            double tolerance = 1e-8);

/// max |Re integral - target| over the listed conditions.
double verify_conditions(const WeierstrassTriple& triple, std::span<const Cycle> cycles,
                         std::span<const PeriodCondition> conditions, const QuadratureConfig& cfg);

/// max |Re integral| over every cycle and all three forms.  On an open cycle
/// (a segment between branch points) a single-valued form integrates to zero
/// over the lifted closed cycle and is skipped.
double verify_closed(const WeierstrassTriple& triple, std::span<const Cycle> cycles,
                     const QuadratureConfig& cfg);

struct TorusClosure {
  WeierstrassTriple triple;
  std::array<cplx, 3> alpha_beta;   // alpha_k + i beta_k as defined from the two lattice periods
  std::array<cplx, 3> correction;   // coefficient of dz actually added
  int sign = 0;                     // +1 or -1 relative to alpha + i beta; 0 when solved directly
  double residual = 0;
};

/// Adds c_k dz to each form so both lattice periods have zero real part.
TorusClosure close_torus_periods(const WeierstrassTriple& triple, const QuadratureConfig& cfg);

struct MinimalScherkResult {
  double a1 = 0, a2 = 0;
  int iterations = 0;
  double residual = 0;
};

/// Newton iteration (central-difference Jacobian, damped) for the minimal
/// Scherk surface with a3 = 1, a4 = 1/a2, a5 = 1/a1.
MinimalScherkResult solve_minimal_scherk(std::pair<double, double> initial, const QuadratureConfig& cfg);

}  // namespace harmsurf
