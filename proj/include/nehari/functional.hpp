#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "nehari/hartree.hpp"
#include "nehari/params.hpp"
#include "nehari/radial_grid.hpp"
#include "nehari/theta.hpp"

namespace nehari {

// A two-component radial state.
struct PairFn {
  RadialFn u;
  RadialFn v;

  PairFn() = default;
  PairFn(RadialFn uu, RadialFn vv) : u(std::move(uu)), v(std::move(vv)) {
    require_same_grid(u, v);
  }

  const GridPtr& grid() const { return u.grid; }

  PairFn scaled(double t) const {
    PairFn out = *this;
    for (auto& x : out.u.values) x *= t;
    for (auto& x : out.v.values) x *= t;
    return out;
  }
};

enum class NehariClass { Minus, Zero, Plus };

inline const char* to_string(NehariClass c) {
  switch (c) {
    case NehariClass::Minus: return "minus";
    case NehariClass::Zero: return "zero";
    case NehariClass::Plus: return "plus";
  }
  return "?";
}

// The three ray coefficients of the action along t -> t * state:
//
//   J(t * state) = (t^2/2) A + (t^4/4) B - (t^{p+1}/(p+1)) C
//
// A = ||(u,v)||_H^2, B the signed Coulomb coupling, C the angular power term.
// The three Coulomb integrals are kept for the identity checks.
struct Coefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double phi_uu = 0.0;  // \int phi_u u^2
  double phi_vv = 0.0;  // \int phi_v v^2
  double phi_vu = 0.0;  // \int phi_v u^2
};

inline Coefficients coefficients(const PairFn& state, const Params& prm, int theta_m = 128) {
  const RadialGrid& g = *state.grid();
  const std::size_t n = g.n();
  const auto& q = g.mass_weights();

  Coefficients out;
  out.a = h1_norm_sq(state.u, prm.lambda) + h1_norm_sq(state.v, prm.lambda);

  std::vector<double> rho_u(n), rho_v(n);
  for (std::size_t i = 0; i < n; ++i) {
    rho_u[i] = state.u.values[i] * state.u.values[i];
    rho_v[i] = state.v.values[i] * state.v.values[i];
  }
  const std::vector<double> phi_u = hartree_detail::potential_of_density(g, rho_u);
  const std::vector<double> phi_v = hartree_detail::potential_of_density(g, rho_v);
  double suu = 0.0, svv = 0.0, svu = 0.0, sc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    suu += q[i] * phi_u[i] * rho_u[i];
    svv += q[i] * phi_v[i] * rho_v[i];
    svu += q[i] * phi_v[i] * rho_u[i];
    sc += q[i] * theta_avg_power(state.u.values[i], state.v.values[i], prm.p, theta_m);
  }
  const double fourpi = 4.0 * std::numbers::pi;
  out.phi_uu = fourpi * suu;
  out.phi_vv = fourpi * svv;
  out.phi_vu = fourpi * svu;
  out.b = prm.mu11 * out.phi_uu + prm.mu22 * out.phi_vv - 2.0 * prm.mu12 * out.phi_vu;
  out.c = fourpi * sc;
  return out;
}

inline double energy_from(const Coefficients& k, double p, double t = 1.0) {
  return 0.5 * t * t * k.a + 0.25 * t * t * t * t * k.b -
         std::pow(t, p + 1.0) / (p + 1.0) * k.c;
}

inline double energy(const PairFn& state, const Params& prm, int theta_m = 128) {
  return energy_from(coefficients(state, prm, theta_m), prm.p);
}

// <J'(state), state>; zero on the constraint set.
inline double nehari_value(const PairFn& state, const Params& prm, int theta_m = 128) {
  const Coefficients k = coefficients(state, prm, theta_m);
  return k.a + k.b - k.c;
}

struct FiberingReport {
  double t = 1.0;
  double value = 0.0;
  double slope = 0.0;
  double curvature = 0.0;
};

inline FiberingReport fibering_from(const Coefficients& k, double p, double t) {
  FiberingReport r;
  r.t = t;
  const double tp = std::pow(t, p);
  r.value = 0.5 * t * t * k.a + 0.25 * t * t * t * t * k.b - tp * t / (p + 1.0) * k.c;
  r.slope = t * k.a + t * t * t * k.b - tp * k.c;
  r.curvature = k.a + 3.0 * t * t * k.b - p * (tp / t) * k.c;
  return r;
}

inline FiberingReport fibering(const PairFn& state, const Params& prm, double t, int theta_m = 128) {
  if (!(t > 0.0)) throw config_error("fibering: ray parameter must be positive");
  return fibering_from(coefficients(state, prm, theta_m), prm.p, t);
}

// Classify the constrained curvature h''(1) relative to the scale of A.
inline NehariClass classify_curvature(double curvature, double scale, double tol = 1e-9) {
  const double band = tol * std::max(scale, 1e-300);
  if (curvature < -band) return NehariClass::Minus;
  if (curvature > band) return NehariClass::Plus;
  return NehariClass::Zero;
}

// Exact gradient of the discrete action with respect to the grid L^2 inner
// product: <residual(s), w> = dJ(s)[w] holds to roundoff for every direction
// w on the same grid.  Componentwise it reads
//
//   -Lap u + lambda u + (mu11 phi_u - mu12 phi_v) u - angular force.
inline PairFn residual(const PairFn& state, const Params& prm, int theta_m = 128) {
  const RadialGrid& g = *state.grid();
  const std::size_t n = g.n();

  std::vector<double> rho_u(n), rho_v(n);
  for (std::size_t i = 0; i < n; ++i) {
    rho_u[i] = state.u.values[i] * state.u.values[i];
    rho_v[i] = state.v.values[i] * state.v.values[i];
  }
  const std::vector<double> phi_u = hartree_detail::potential_of_density(g, rho_u);
  const std::vector<double> phi_v = hartree_detail::potential_of_density(g, rho_v);

  const std::vector<double> su = radial_stiffness(g, state.u.values);
  const std::vector<double> sv = radial_stiffness(g, state.v.values);

  PairFn res{RadialFn(state.grid()), RadialFn(state.grid())};
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = state.u.values[i];
    const double vi = state.v.values[i];
    const ThetaEval te = theta_eval(ui, vi, prm.p, theta_m);
    res.u.values[i] = su[i] + prm.lambda * ui + (prm.mu11 * phi_u[i] - prm.mu12 * phi_v[i]) * ui -
                      te.force_a;
    res.v.values[i] = sv[i] + prm.lambda * vi + (prm.mu22 * phi_v[i] - prm.mu12 * phi_u[i]) * vi -
                      te.force_b;
  }
  return res;
}

// Grid L^2 inner product and norm over pairs (mass layer).
inline double pair_dot(const PairFn& a, const PairFn& b) {
  require_same_grid(a.u, b.u);
  const auto& q = a.grid()->mass_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    s += q[i] * (a.u.values[i] * b.u.values[i] + a.v.values[i] * b.v.values[i]);
  return 4.0 * std::numbers::pi * s;
}

inline double pair_l2_norm(const PairFn& a) { return std::sqrt(pair_dot(a, a)); }

inline double pair_h_norm_sq(const PairFn& a, double lambda) {
  return h1_norm_sq(a.u, lambda) + h1_norm_sq(a.v, lambda);
}

}  // namespace nehari
