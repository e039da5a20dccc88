#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "nehari/functional.hpp"

namespace nehari {

// The six quadratures every stationarity check reduces to.  For a critical
// point of the action they satisfy two linear identities (the constraint
// value and the dilation identity), which leaves a four-parameter family;
// everything in this header works in those coordinates.

struct ZVector {
  double z1 = 0.0;  // \int |grad u|^2 + |grad v|^2
  double z2 = 0.0;  // \int lambda (u^2 + v^2)
  double z3 = 0.0;  // \int phi_u u^2
  double z4 = 0.0;  // \int phi_v v^2
  double z5 = 0.0;  // \int phi_v u^2
  double z6 = 0.0;  // angular average of \int |u + e^{i theta} v|^{p+1}
};

inline ZVector z_vector(const PairFn& state, const Params& prm, int theta_m = 128) {
  const Coefficients k = coefficients(state, prm, theta_m);
  ZVector z;
  z.z1 = grad_norm_sq(state.u) + grad_norm_sq(state.v);
  z.z2 = prm.lambda * (mass_norm_sq(state.u) + mass_norm_sq(state.v));
  z.z3 = k.phi_uu;
  z.z4 = k.phi_vv;
  z.z5 = k.phi_vu;
  z.z6 = k.c;
  return z;
}

struct IdentityReport {
  double nehari_residual = 0.0;
  double pohozaev_residual = 0.0;
};

namespace identities_detail {

inline double coulomb_combo(const ZVector& z, const Params& prm) {
  return prm.mu11 * z.z3 + prm.mu22 * z.z4 - 2.0 * prm.mu12 * z.z5;
}

inline double scale_guard(const ZVector& z) { return std::max(z.z1 + z.z2, 1e-300); }

}  // namespace identities_detail

// Residuals of the two stationarity identities, relative to the quadratic
// part of the norm.  The first is enforced by the solver; the second is a
// property of exact solutions only, so on a grid it measures discretization
// error and must never be fed back into descent.
inline IdentityReport identity_residuals(const ZVector& z, const Params& prm) {
  const double combo = identities_detail::coulomb_combo(z, prm);
  const double guard = identities_detail::scale_guard(z);
  IdentityReport rep;
  rep.nehari_residual = std::abs(z.z1 + z.z2 + combo - z.z6) / guard;
  rep.pohozaev_residual =
      std::abs(0.5 * z.z1 + 1.5 * z.z2 + 1.25 * combo - 3.0 * z.z6 / (prm.p + 1.0)) / guard;
  return rep;
}

inline IdentityReport check_identities(const PairFn& state, const Params& prm,
                                       int theta_m = 128) {
  return identity_residuals(z_vector(state, prm, theta_m), prm);
}

// Coordinates of the four-parameter family solving both identities: theta is
// the energy level, s and t weigh the two same-species Coulomb integrals,
// and w weighs the nonlinearity.
struct CoeffDecomp {
  double theta = 0.0;
  double s = 0.0;
  double t = 0.0;
  double w = 0.0;
};

inline ZVector reconstruct(const CoeffDecomp& c, const Params& prm) {
  const double p = prm.p;
  ZVector z;
  z.z1 = c.theta + (p - 1.0) * c.w;
  z.z2 = 3.0 * c.theta - 2.0 * (p - 2.0) * c.w;
  z.z3 = c.t / prm.mu11;
  z.z4 = c.s / prm.mu22;
  z.z5 = (2.0 * c.theta + 0.5 * c.s + 0.5 * c.t - (p - 1.0) * c.w) / prm.mu12;
  z.z6 = (p + 1.0) * c.w;
  return z;
}

// Invert the family: three coordinates are pinned by the integrals they
// multiply, the level comes from the identity-derived formula, and the two
// leftover rows act as consistency checks.  A vector that fails them did not
// come from a near-solution.
inline CoeffDecomp decompose(const ZVector& z, const Params& prm, double tol = 1e-6) {
  const double p = prm.p;
  CoeffDecomp c;
  c.t = prm.mu11 * z.z3;
  c.s = prm.mu22 * z.z4;
  c.w = z.z6 / (p + 1.0);
  c.theta = ((p - 1.0) * z.z2 + (p - 2.0) * identities_detail::coulomb_combo(z, prm)) / (5.0 - p);

  const ZVector back = reconstruct(c, prm);
  const double guard = identities_detail::scale_guard(z);
  const double worst = std::max(
      {std::abs(back.z1 - z.z1), std::abs(back.z2 - z.z2), std::abs(back.z3 - z.z3),
       std::abs(back.z4 - z.z4), std::abs(back.z5 - z.z5), std::abs(back.z6 - z.z6)});
  if (worst > tol * guard)
    throw inconsistent_z("decompose: quadratures do not solve the stationarity identities");
  return c;
}

enum class GroundStateStatus { InMinusBranch, Violated };

inline const char* to_string(GroundStateStatus s) {
  return s == GroundStateStatus::InMinusBranch ? "in_minus_branch" : "violated";
}

struct GroundStateCheck {
  GroundStateStatus status = GroundStateStatus::Violated;
  // sign certificate: curvature of the fibering map at unit scale; negative
  // keeps the state on the maximal branch
  double curvature = 0.0;
  // w < 8 theta / ((p-1)(3-p))
  bool w_within_primary_bound = false;
  // w < 3 theta / (2p-4), meaningful above the quadratic exponent only
  std::optional<bool> w_within_quadratic_bound;
  CoeffDecomp coeffs;
};

inline GroundStateCheck check_ground_state_condition(const ZVector& z, const Params& prm,
                                                     double tol = 1e-6) {
  GroundStateCheck out;
  out.coeffs = decompose(z, prm, tol);
  const double p = prm.p;
  out.curvature =
      -(p - 1.0) * (z.z1 + z.z2) + (3.0 - p) * identities_detail::coulomb_combo(z, prm);
  out.status =
      out.curvature < 0.0 ? GroundStateStatus::InMinusBranch : GroundStateStatus::Violated;
  out.w_within_primary_bound = out.coeffs.w < 8.0 * out.coeffs.theta / ((p - 1.0) * (3.0 - p));
  if (p > 2.0)
    out.w_within_quadratic_bound = out.coeffs.w < 3.0 * out.coeffs.theta / (2.0 * p - 4.0);
  return out;
}

}  // namespace nehari
