#pragma once

#include "harmsurf/types.hpp"

namespace harmsurf {

// Odd Jacobi theta function on the lattice Z + tau Z:
//   theta(z) = sum_n exp(pi i (n+1/2)^2 tau + 2 pi i (n+1/2)(z+1/2))
// theta(0) = 0, theta(z+1) = -theta(z),
// theta(z+tau) = exp(-pi i tau - 2 pi i (z+1/2)) theta(z).
class ThetaFunction {
 public:
  explicit ThetaFunction(cplx tau, double truncation_tol = 1e-14);

  cplx operator()(cplx z) const;

  cplx tau() const { return tau_; }
  double truncation_tol() const { return tol_; }

 private:
  cplx tau_;
  double tol_;
};

}  // namespace harmsurf
