#include <algorithm>
#include <cmath>
#include <limits>

#include "harmsurf/forms.hpp"
#include "harmsurf/quadrature.hpp"

namespace harmsurf {

cplx residue(const Domain& domain, const OneForm& form, cplx p) {
  if (auto exact = form.exact_residue(p)) return *exact;
  double near = std::numeric_limits<double>::infinity();
  auto consider = [&](cplx f) {
    double d;
    if (const auto* torus = std::get_if<RectTorus>(&domain)) {
      d = torus->lattice_distance(p, f);
      if (d < 1e-12) d = std::min(1.0, std::abs(torus->tau()));
    } else {
      d = std::abs(p - f);
    }
    if (d > 1e-12) near = std::min(near, d);
  };
  for (const cplx& f : finite_features(domain)) consider(f);
  for (const cplx& f : form.singular_points()) consider(f);
  if (std::holds_alternative<RectTorus>(domain)) consider(p);
  const double r = std::min(1e-2, 0.5 * near);
  const LocalChart chart = chart_at(domain, p);
  if (!chart.branched && form.single_valued())
    return integrate_cycle(form, around_puncture_cycle(p, r), QuadratureConfig{}) / (2.0 * pi * I);
  const double rt = chart.branched ? std::sqrt(r) : r;
  return laurent_modes(form, chart, rt, -1, -1).coefficient(-1);
}

}  // namespace harmsurf
