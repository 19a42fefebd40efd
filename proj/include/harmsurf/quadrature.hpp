#pragma once

#include <span>
#include <utility>
#include <vector>

#include "harmsurf/domains.hpp"
#include "harmsurf/forms.hpp"

namespace harmsurf {

struct QuadratureConfig {
  double abs_tol = 1e-11;
  double rel_tol = 1e-11;
  int max_refinement_depth = 12;
  // Hints for integrate_segment; singular ends are also detected from the form.
  std::pair<bool, bool> endpoint_singular{false, false};
};

// Which rule handles a given end of a piece.
enum class EndRule { regular, algebraic, finite_part };

/// Integral of each form along one path piece.  Regular integrands use adaptive
/// Gauss-Kronrod (7/15); ends with algebraic singularities use tanh-sinh; an
/// exponent of -3/2 at an end is given its Hadamard finite part, computed in the
/// branched chart z = p + t^2.
std::vector<cplx> integrate_piece(std::span<const OneForm> forms, const PathPiece& piece,
                                  const QuadratureConfig& cfg);
cplx integrate_piece(const OneForm& form, const PathPiece& piece, const QuadratureConfig& cfg);

cplx integrate_segment(const OneForm& form, cplx start, cplx end, const QuadratureConfig& cfg);
cplx integrate_path(const OneForm& form, std::span<const PathPiece> path, const QuadratureConfig& cfg);
cplx integrate_cycle(const OneForm& form, const Cycle& cycle, const QuadratureConfig& cfg);

/// The three forms of a triple along a path, sharing point evaluations.
FormValues integrate_triple(const WeierstrassTriple& triple, std::span<const PathPiece> path,
                            const QuadratureConfig& cfg);

namespace detail {

/// Nodes and weights of n-point Gauss-Legendre on [0,1].
const std::vector<std::pair<double, double>>& gauss_legendre_unit(int n);

}  // namespace detail

}  // namespace harmsurf
