#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "nehari/errors.hpp"
#include "nehari/params.hpp"

namespace nehari {

// Closed-form constants of the variational theory.  Everything here is a pure
// function of (p, lambda, couplings) and, where an embedding enters, of the
// radial Sobolev constant S in the operator-norm-inverse convention
//
//   ||u||_{L^{p+1}} <= S^{-1} ( \int |grad u|^2 + lambda u^2 dx )^{1/2},
//
// so a larger S means a weaker embedding and every S-dependent threshold
// below shrinks accordingly.

// Piecewise amplitude factor; continuous at p = 2.
inline double a_of_p(double p) {
  if (!(p > 1.0) || !(p < 3.0)) throw config_error("a_of_p: p must lie in (1, 3)");
  if (p <= 2.0) return std::pow(0.5 * (3.0 - p), 1.0 / (p - 1.0));
  return 0.5;
}

// Coupling size below which the single-field problem keeps its two-branch
// structure (and the seed energies stay in the useful window).
inline double lambda0(double p, double lambda, double sobolev) {
  if (!(sobolev > 0.0)) throw config_error("lambda0: Sobolev constant must be positive");
  const double pi = std::numbers::pi;
  const double lead = 3.0 * std::sqrt(3.0) * (p - 1.0) * pi * std::pow(lambda, 1.5) /
                      (32.0 * (3.0 - p) * a_of_p(p));
  const double emb = std::pow((3.0 - p) / (2.0 * std::pow(sobolev, p + 1.0)), 2.0 / (p - 1.0));
  return lead * emb;
}

// Exponent above which the ground-state window condition holds automatically.
inline constexpr double automatic_window_exponent() {
  // (sqrt(73) - 2) / 3
  return 2.1813345817725103;
}

// Coupling size below which the computed action window certifies membership in
// the low-norm manifold piece; +inf once the exponent is large enough that the
// window condition is automatic.
inline double lambda0_bar(double p, double lambda, double sobolev) {
  if (!(sobolev > 0.0)) throw config_error("lambda0_bar: Sobolev constant must be positive");
  if (p >= automatic_window_exponent()) return std::numeric_limits<double>::infinity();
  if (p < 2.0) return std::numeric_limits<double>::infinity();
  const double pi = std::numbers::pi;
  const double lead = 3.0 * std::sqrt(3.0) * (p + 1.0) * (p + 1.0) * std::sqrt(p - 1.0) * pi *
                      std::pow(lambda, 1.5) /
                      (8.0 * (5.0 - p) * (5.0 - p) * std::sqrt(3.0 - p));
  const double emb = std::pow((3.0 - p) / (2.0 * std::pow(sobolev, p + 1.0)), 2.0 / (p - 1.0));
  return lead * emb;
}

// Action level bounding the sublevel set that splits into the two norm pieces.
inline double d0_threshold(double p, double sobolev) {
  if (!(sobolev > 0.0)) throw config_error("d0_threshold: Sobolev constant must be positive");
  return a_of_p(p) * (p - 1.0) / (2.0 * (p + 1.0)) *
         std::pow(2.0 * std::pow(sobolev, p + 1.0) / (3.0 - p), 2.0 / (p - 1.0));
}

// Norm radius separating the two pieces of the low-action sublevel set, and
// the a priori bound on the single-field mountain-pass solution.
inline double norm_cap(double p, double lambda, double mu) {
  if (!(mu > 0.0)) throw config_error("norm_cap: coupling must be positive");
  return std::sqrt(3.0 * std::sqrt(3.0) * (p - 1.0) * std::numbers::pi *
                   std::pow(lambda, 1.5) / (16.0 * mu * (3.0 - p)));
}

// Optimal mixing share between the two components and the effective coupling
// it produces: minimising g(s) = mu11 s^2 + mu22 (1-s)^2 - 2 mu12 s(1-s).
struct MixingShare {
  double share = 0.0;      // argmin in [0, 1]
  double coupling = 0.0;   // g at the argmin, sign of det(mu)
};

inline MixingShare mixing_share(double mu11, double mu22, double mu12) {
  if (!(mu11 > 0.0) || !(mu22 > 0.0) || !(mu12 > 0.0))
    throw config_error("mixing_share: couplings must be positive");
  const double denom = mu11 + mu22 + 2.0 * mu12;
  MixingShare out;
  out.share = (mu22 + mu12) / denom;
  out.coupling = (mu11 * mu22 - mu12 * mu12) / denom;
  return out;
}

inline MixingShare mixing_share(const Params& prm) {
  return mixing_share(prm.mu11, prm.mu22, prm.mu12);
}

// Sign analysis of f_d(s) = lambda - 2^p s^{p-1} + d s for 1 < p < 2: the
// critical slope below which f dips negative, the location of the minimum,
// and the negativity window found by bisection.
struct NegativityWindow {
  double critical_slope = 0.0;  // largest d with a negative dip
  double stationary = 0.0;      // argmin of f_d
  bool has_window = false;
  double lo = 0.0;
  double hi = 0.0;
};

inline double critical_slope(double p, double lambda) {
  if (!(p > 1.0 && p <= 2.0)) throw config_error("critical_slope: p must lie in (1, 2]");
  if (!(lambda > 0.0)) throw config_error("critical_slope: lambda must be positive");
  if (p == 2.0) return 4.0;
  return (p - 1.0) *
         std::pow(std::pow(2.0, p) * std::pow(2.0 - p, 2.0 - p) / std::pow(lambda, 2.0 - p),
                  1.0 / (p - 1.0));
}

inline NegativityWindow negativity_window(double p, double lambda, double d) {
  if (!(p > 1.0) || !(p < 2.0)) throw config_error("negativity_window: p must lie in (1, 2)");
  if (!(lambda > 0.0) || !(d > 0.0))
    throw config_error("negativity_window: lambda and d must be positive");
  NegativityWindow out;
  out.critical_slope = critical_slope(p, lambda);
  out.stationary = std::pow(std::pow(2.0, p) * (p - 1.0) / d, 1.0 / (2.0 - p));
  auto f = [&](double s) { return lambda - std::pow(2.0, p) * std::pow(s, p - 1.0) + d * s; };
  if (!(f(out.stationary) < 0.0)) return out;  // no dip below zero
  out.has_window = true;
  auto bisect = [&](double a, double b) {
    // f(a) and f(b) have opposite signs
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      if ((f(a) < 0.0) == (f(m) < 0.0)) a = m; else b = m;
      if (std::abs(b - a) <= 1e-14 * std::max(1.0, std::abs(b))) break;
    }
    return 0.5 * (a + b);
  };
  double lo_bracket = out.stationary;
  while (f(lo_bracket) < 0.0) lo_bracket *= 0.5;
  out.lo = bisect(lo_bracket, out.stationary);
  double hi_bracket = out.stationary;
  while (f(hi_bracket) < 0.0) hi_bracket *= 2.0;
  out.hi = bisect(out.stationary, hi_bracket);
  if (out.lo > out.hi) std::swap(out.lo, out.hi);
  return out;
}

// Size threshold on det(mu)/(mu11 + mu22) above which no positive solution
// can exist (exponent range 1 < p <= 2).
inline double nonexist_threshold(double p, double lambda) {
  if (!(p > 1.0) || !(p <= 2.0)) throw config_error("nonexist_threshold: p must lie in (1, 2]");
  if (!(lambda > 0.0)) throw config_error("nonexist_threshold: lambda must be positive");
  const double d = critical_slope(p, lambda);
  return 0.25 * d * d;
}

// Every named constant for one parameter point.  Entries whose exponent range
// excludes the given p are reported as NaN rather than refusing the bundle.
struct ConstantsBundle {
  double lambda0 = 0.0;
  double lambda0_bar = 0.0;
  double a_p = 0.0;
  double d0_level = 0.0;
  double s_min = 0.0;
  double g_min = 0.0;
  double d_lambda = 0.0;
  double nonexist_threshold = 0.0;
  double sobolev = 0.0;
};

inline ConstantsBundle constants_bundle(const Params& prm, double sobolev) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ConstantsBundle b;
  b.sobolev = sobolev;
  b.lambda0 = lambda0(prm.p, prm.lambda, sobolev);
  b.lambda0_bar = lambda0_bar(prm.p, prm.lambda, sobolev);
  b.a_p = a_of_p(prm.p);
  b.d0_level = d0_threshold(prm.p, sobolev);
  const MixingShare mix = mixing_share(prm);
  b.s_min = mix.share;
  b.g_min = mix.coupling;
  b.d_lambda = prm.p <= 2.0 ? critical_slope(prm.p, prm.lambda) : nan;
  b.nonexist_threshold = prm.p <= 2.0 ? nehari::nonexist_threshold(prm.p, prm.lambda) : nan;
  return b;
}

}  // namespace nehari
