#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "nehari/constants.hpp"
#include "nehari/errors.hpp"
#include "nehari/functional.hpp"

namespace nehari {

// Projection of a state onto the natural constraint set along its ray.
//
// With A = |state|_H^2, B the Coulomb form and C the angular-average power,
// the ray slope divided by t is
//
//   g(t) = A + B t^2 - C t^{p-1},          1 < p < 3,
//
// so stationary points of the ray energy are positive roots of g.  For B <= 0
// there is exactly one root and it is a ray maximum; for B > 0 there are zero
// or two, the smaller a maximum (Minus class) and the larger a minimum (Plus).

struct NehariRoot {
  double t = 0.0;
  FiberingReport report;
  NehariClass cls = NehariClass::Zero;
};

struct ProjectionResult {
  Coefficients coeffs;           // of the unscaled state
  std::vector<NehariRoot> roots; // ascending in t
  std::optional<NehariRoot> minus;
  std::optional<NehariRoot> plus;
};

namespace manifold_detail {

inline constexpr double kLadderLo = 1e-6;
inline constexpr double kLadderHi = 1e6;
inline constexpr int kLadderPoints = 256;

inline double ray_slope_over_t(const Coefficients& k, double p, double t) {
  return k.a + k.b * t * t - k.c * std::pow(t, p - 1.0);
}

inline double ray_slope_derivative(const Coefficients& k, double p, double t) {
  return 2.0 * k.b * t - (p - 1.0) * k.c * std::pow(t, p - 2.0);
}

// Bisection to high relative accuracy followed by a short Newton polish.
inline double refine_root(const Coefficients& k, double p, double lo, double hi) {
  double flo = ray_slope_over_t(k, p, lo);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = ray_slope_over_t(k, p, mid);
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 5; ++it) {
    const double f = ray_slope_over_t(k, p, t);
    const double df = ray_slope_derivative(k, p, t);
    if (df == 0.0) break;
    const double next = t - f / df;
    if (!(next > lo && next < hi)) break;
    if (std::abs(next - t) <= 1e-15 * t) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

}  // namespace manifold_detail

// Root scan over a wide geometric ladder; never throws on an empty root set.
inline ProjectionResult try_project_nehari(const Coefficients& k, double p) {
  using namespace manifold_detail;
  if (!(k.a > 0.0)) throw config_error("project: state must be nonzero");
  if (k.c < 0.0) throw config_error("project: angular power must be nonnegative");

  ProjectionResult out;
  out.coeffs = k;

  std::vector<double> ts;
  ts.reserve(kLadderPoints);
  const double step = std::log(kLadderHi / kLadderLo) / (kLadderPoints - 1);
  for (int i = 0; i < kLadderPoints; ++i) ts.push_back(kLadderLo * std::exp(step * i));

  double prev = ray_slope_over_t(k, p, ts.front());
  for (int i = 1; i < kLadderPoints; ++i) {
    const double cur = ray_slope_over_t(k, p, ts[i]);
    if ((prev < 0.0) != (cur < 0.0)) {
      NehariRoot root;
      root.t = refine_root(k, p, ts[i - 1], ts[i]);
      root.report = fibering_from(k, p, root.t);
      const double scale =
          k.a + 3.0 * std::abs(k.b) * root.t * root.t + p * k.c * std::pow(root.t, p - 1.0);
      root.cls = classify_curvature(root.report.curvature, scale);
      out.roots.push_back(root);
    }
    prev = cur;
  }

  for (const NehariRoot& r : out.roots) {
    if (r.cls == NehariClass::Minus && !out.minus) out.minus = r;
    if (r.cls == NehariClass::Plus && !out.plus) out.plus = r;
  }
  return out;
}

inline ProjectionResult try_project_nehari(const PairFn& state, const Params& prm,
                                           int theta_m = 128) {
  return try_project_nehari(coefficients(state, prm, theta_m), prm.p);
}

inline ProjectionResult project_nehari(const PairFn& state, const Params& prm,
                                       int theta_m = 128) {
  ProjectionResult out = try_project_nehari(state, prm, theta_m);
  if (out.roots.empty())
    throw no_projection("project_nehari: ray energy has no stationary point");
  return out;
}

// The ray-maximum scaling; every descent step reprojects through this root.
inline const NehariRoot& require_minus(const ProjectionResult& proj) {
  if (!proj.minus) throw no_projection("require_minus: no ray maximum found");
  return *proj.minus;
}

// The ray-minimum scaling, used when descending the lower constrained branch.
inline const NehariRoot& require_plus(const ProjectionResult& proj) {
  if (!proj.plus) throw no_projection("require_plus: no ray minimum found");
  return *proj.plus;
}

// Symmetric two-component seed built from one radial profile: the share
// minimising the Coulomb form turns it into g_min * (self pairing of w).
inline PairFn seed_pair(const RadialFn& w, const Params& prm) {
  const MixingShare ms = mixing_share(prm);
  RadialFn u(w.grid);
  RadialFn v(w.grid);
  const double su = std::sqrt(ms.share);
  const double sv = std::sqrt(1.0 - ms.share);
  const std::size_t n = w.values.size();
  u.values.resize(n);
  v.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    u.values[i] = su * w.values[i];
    v.values[i] = sv * w.values[i];
  }
  return PairFn{std::move(u), std::move(v)};
}

// Membership of a constrained state in the low-action sublevel set, split by
// the norm radius tied to the second component's self-coupling.
enum class SublevelClass { LowNorm, HighNorm, Outside };

inline const char* to_string(SublevelClass c) {
  switch (c) {
    case SublevelClass::LowNorm: return "low-norm";
    case SublevelClass::HighNorm: return "high-norm";
    default: return "outside";
  }
}

inline SublevelClass classify_sublevel(const PairFn& state, const Params& prm, double sobolev,
                                       double manifold_tol = 1e-6, int theta_m = 128) {
  const Coefficients k = coefficients(state, prm, theta_m);
  const double constraint = k.a + k.b - k.c;
  const double scale = std::max({k.a, std::abs(k.b), k.c});
  if (std::abs(constraint) > manifold_tol * std::max(scale, 1e-300))
    throw not_on_manifold("classify_sublevel: state does not satisfy the constraint");
  const double value = energy_from(k, prm.p);
  if (!(value < d0_threshold(prm.p, sobolev))) return SublevelClass::Outside;
  const double norm = std::sqrt(k.a);
  return norm < norm_cap(prm.p, prm.lambda, prm.mu22) ? SublevelClass::LowNorm
                                                      : SublevelClass::HighNorm;
}

}  // namespace nehari
