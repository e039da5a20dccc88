#pragma once

#include "nehari/errors.hpp"

namespace nehari {

// Problem data for the coupled system
//
//   -Lap u + lambda u + (mu11 phi_u - mu12 phi_v) u = angular force in u
//   -Lap v + lambda v + (mu22 phi_v - mu12 phi_u) v = angular force in v
//
// with 1 < p < 3 and all couplings positive.  The component order follows the
// convention mu11 <= mu22; swap (u, mu11) with (v, mu22) to use the other
// ordering.
struct Params {
  double p = 2.0;
  double lambda = 1.0;
  double mu11 = 1.0;
  double mu22 = 1.0;
  double mu12 = 1.0;

  void validate() const {
    if (!(p > 1.0) || !(p < 3.0)) throw config_error("params: exponent p must lie in (1, 3)");
    if (!(lambda > 0.0)) throw config_error("params: lambda must be positive");
    if (!(mu11 > 0.0) || !(mu22 > 0.0) || !(mu12 > 0.0))
      throw config_error("params: all couplings must be positive");
    if (mu11 > mu22)
      throw config_error("params: component convention requires mu11 <= mu22 (swap the components)");
  }

  double det_mu() const { return mu11 * mu22 - mu12 * mu12; }
};

}  // namespace nehari
