#include "harmsurf/theta.hpp"

#include <cmath>

#include "harmsurf/error.hpp"

namespace harmsurf {

ThetaFunction::ThetaFunction(cplx tau, double truncation_tol) : tau_(tau), tol_(truncation_tol) {
  if (!(tau.imag() > 0)) throw DomainError("theta: Im tau must be positive");
  if (!(truncation_tol > 0 && truncation_tol <= 1e-8))
    throw DomainError("theta: truncation tolerance must lie in (0, 1e-8]");
}

cplx ThetaFunction::operator()(cplx z) const {
  auto term = [&](long n) {
    const double m = n + 0.5;
    return std::exp(I * pi * (m * m * tau_ + 2.0 * m * (z + 0.5)));
  };
  // Terms are Gaussian in n, peaked where n + 1/2 = -Im z / Im tau.
  const long peak = std::lround(-z.imag() / tau_.imag() - 0.5);
  const long centre = peak;
  cplx sum = term(centre);
  for (long k = 1;; ++k) {
    const cplx up = term(centre + k);
    const cplx down = term(centre - k);
    sum += up + down;
    const double tail = std::abs(up) + std::abs(down);
    // Beyond the peak the ratio of successive terms falls like exp(-2 pi k Im tau),
    // so the remaining tail is bounded by a small multiple of the last pair.
    const double ratio = std::exp(-2.0 * pi * k * tau_.imag());
    if (tail / (1.0 - ratio) <= tol_ * (std::abs(sum) + 1.0) * 1e-2 && k > 1) break;
    if (k > 10000) break;
  }
  return sum;
}

}  // namespace harmsurf
