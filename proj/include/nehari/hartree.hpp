#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "nehari/radial_grid.hpp"

namespace nehari {

// Newtonian (Riesz) potential of a radial density rho = w^2:
//
//   phi(r) = 4 pi [ (1/r) \int_0^r s^2 rho(s) ds + \int_r^{rmax} s rho(s) ds ]
//
// evaluated with prefix sums of the grid's trapezoid masses.  This is the
// quadrature of the symmetric kernel 1/max(r, s) with one shared weight set,
// so the induced pairing
//
//   <rho1, rho2>  =  \int phi_{w1} w2^2 dx
//
// is symmetric in (w1, w2) up to roundoff by construction.
namespace hartree_detail {

inline std::vector<double> potential_of_density(const RadialGrid& g, const std::vector<double>& rho) {
  const std::size_t n = g.n();
  const auto& r = g.nodes();
  const auto& q = g.mass_weights();  // q_i = c_i r_i^2
  std::vector<double> phi(n);
  // inner moment: prefix sums of q_i rho_i;  outer moment: suffix of q_i rho_i / r_i
  double inner = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    inner += q[i] * rho[i];
    phi[i] = inner / r[i];
  }
  double outer = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    phi[i] = 4.0 * std::numbers::pi * (phi[i] + outer);
    outer += q[i] * rho[i] / r[i];
  }
  return phi;
}

}  // namespace hartree_detail

inline RadialFn hartree_potential(const RadialFn& w) {
  const RadialGrid& g = *w.grid;
  std::vector<double> rho(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) rho[i] = w.values[i] * w.values[i];
  return RadialFn(w.grid, hartree_detail::potential_of_density(g, rho));
}

// \int phi_{w1} w2^2 dx on the shared mass layer.
inline double hartree_pairing(const RadialFn& w1, const RadialFn& w2) {
  require_same_grid(w1, w2);
  const RadialGrid& g = *w1.grid;
  RadialFn phi = hartree_potential(w1);
  const auto& q = g.mass_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i)
    s += q[i] * phi.values[i] * w2.values[i] * w2.values[i];
  return 4.0 * std::numbers::pi * s;
}

}  // namespace nehari
