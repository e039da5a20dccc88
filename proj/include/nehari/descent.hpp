#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "nehari/functional.hpp"
#include "nehari/manifold.hpp"

namespace nehari {

// Gradient flow for the action, optionally constrained to the ray-maximum
// set.  Steps are preconditioned by the screened radial Laplacian, the line
// search enforces sufficient decrease, and iterates stay in the positive cone
// (taking absolute values never raises the action: the quadratic part can
// only drop and both nonlinear parts are even under sign flips of u v).

struct DescentOptions {
  int max_iter = 20000;
  // Residual L2 against the H-norm of the iterate.  Values much below 1e-7
  // chase the roundoff floor of the energy comparison in the line search.
  double tol_rel = 1e-7;
  double armijo = 1e-4;
  double alpha_init = 1.0;
  double alpha_min = 1e-12;
  double alpha_max = 1e6;   // ceiling for the warm-started line search
  int stall_window = 40;    // consecutive machine-level action changes
  // How many residual-contraction rescue steps may run once the action
  // comparison drowns in rounding noise; bounds the endgame cost.
  int rescue_steps = 400;
  int theta_m = 128;
  bool enforce_positive = true;
  bool project = true;      // reproject along the ray after every step
  // Which stationary scaling the projection keeps: the ray maximum by default,
  // or the ray minimum when chasing the lower constrained branch.
  NehariClass branch = NehariClass::Minus;
  double decay_floor = 0.0; // stop early once the H-norm falls below this
};

struct DescentReport {
  PairFn state;
  Coefficients coeffs;
  double action = 0.0;
  double residual_norm = 0.0;
  double h_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool decayed = false;
  std::string stop_reason;
};

namespace descent_detail {

// Solve the screened conservative operator (the exact linear part of the
// discrete gradient) with the last node pinned to zero: Thomas sweep on the
// tridiagonal rows of radial_stiffness + screen.  The screening field holds
// the local positive potential: lambda everywhere, plus the repulsive
// Coulomb part, which dwarfs lambda near deep minimisers and would otherwise
// distort the direction where the potential peaks.
inline RadialFn screened_inverse(const RadialFn& g_fn, const std::vector<double>& screen) {
  const RadialGrid& g = *g_fn.grid;
  const std::size_t n = g.n();
  const double h = g.spacing();
  const auto& r = g.nodes();
  auto mid2 = [h](std::size_t i) {
    const double m = (static_cast<double>(i) + 1.5) * h;
    return m * m;
  };

  const std::size_t m = n - 1;  // unknowns at nodes 0 .. n-2
  std::vector<double> cp(m), dp(m);
  auto diag = [&](std::size_t j) {
    const double s = (j > 0 ? mid2(j - 1) : 0.0) + mid2(j);
    return s / (h * h * r[j] * r[j]) + screen[j];
  };
  auto upper = [&](std::size_t j) { return -mid2(j) / (h * h * r[j] * r[j]); };
  auto lower = [&](std::size_t j) { return -mid2(j - 1) / (h * h * r[j] * r[j]); };

  double beta = diag(0);
  cp[0] = upper(0) / beta;
  dp[0] = g_fn.values[0] / beta;
  for (std::size_t j = 1; j < m; ++j) {
    beta = diag(j) - lower(j) * cp[j - 1];
    cp[j] = upper(j) / beta;
    dp[j] = (g_fn.values[j] - lower(j) * dp[j - 1]) / beta;
  }
  RadialFn out(g_fn.grid);
  out.values[m - 1] = dp[m - 1];
  for (std::size_t j = m - 1; j-- > 0;) out.values[j] = dp[j] - cp[j] * out.values[j + 1];
  out.values[n - 1] = 0.0;
  return out;
}

inline void enforce_cone(PairFn& s) {
  for (double& x : s.u.values) x = std::abs(x);
  for (double& x : s.v.values) x = std::abs(x);
}

inline void clamp_boundary(PairFn& s) {
  s.u.values.back() = 0.0;
  s.v.values.back() = 0.0;
}

inline PairFn step(const PairFn& s, const PairFn& d, double alpha) {
  PairFn out = s;
  const std::size_t n = s.u.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.u.values[i] -= alpha * d.u.values[i];
    out.v.values[i] -= alpha * d.v.values[i];
  }
  return out;
}

}  // namespace descent_detail

inline DescentReport descend(PairFn seed, const Params& prm, const DescentOptions& opt = {}) {
  using namespace descent_detail;

  DescentReport rep;
  PairFn state = std::move(seed);
  clamp_boundary(state);
  if (opt.enforce_positive) enforce_cone(state);

  if (opt.project) {
    const ProjectionResult pr = try_project_nehari(coefficients(state, prm, opt.theta_m), prm.p);
    const NehariRoot& root =
        opt.branch == NehariClass::Plus ? require_plus(pr) : require_minus(pr);
    state = state.scaled(root.t);
  }

  double prev_action = 0.0;
  bool have_prev = false;
  int stall = 0;
  // Each line search warms up from twice the last accepted step; restarting at
  // alpha_init every time costs thousands of extra iterations on the deep
  // negative-action branch, where the usable step keeps growing.
  double alpha_start = opt.alpha_init;
  int rescue_left = opt.rescue_steps;

  for (int iter = 0; iter <= opt.max_iter; ++iter) {
    const Coefficients k = coefficients(state, prm, opt.theta_m);
    const double action = energy_from(k, prm.p);
    const double h_norm = std::sqrt(std::max(k.a, 0.0));
    const PairFn res = residual(state, prm, opt.theta_m);
    const double res_norm = pair_l2_norm(res);

    rep.coeffs = k;
    rep.action = action;
    rep.h_norm = h_norm;
    rep.residual_norm = res_norm;
    rep.iterations = iter;

    if (opt.decay_floor > 0.0 && h_norm < opt.decay_floor) {
      rep.decayed = true;
      rep.stop_reason = "norm decayed below floor";
      break;
    }
    if (res_norm <= opt.tol_rel * std::max(h_norm, 1e-300)) {
      rep.converged = true;
      rep.stop_reason = "residual tolerance reached";
      break;
    }
    if (have_prev && std::abs(action - prev_action) <= 1e-15 * std::max(1.0, std::abs(action))) {
      if (++stall >= opt.stall_window) {
        rep.stop_reason = "action stalled";
        break;
      }
    } else {
      stall = 0;
    }
    prev_action = action;
    have_prev = true;
    if (iter == opt.max_iter) {
      rep.stop_reason = "iteration limit";
      break;
    }

    const RadialFn phi_u = hartree_potential(state.u);
    const RadialFn phi_v = hartree_potential(state.v);
    const std::size_t nn = state.u.values.size();
    std::vector<double> screen_u(nn), screen_v(nn);
    for (std::size_t i = 0; i < nn; ++i) {
      screen_u[i] =
          prm.lambda + std::max(0.0, prm.mu11 * phi_u.values[i] - prm.mu12 * phi_v.values[i]);
      screen_v[i] =
          prm.lambda + std::max(0.0, prm.mu22 * phi_v.values[i] - prm.mu12 * phi_u.values[i]);
    }
    PairFn dir{screened_inverse(res.u, screen_u), screened_inverse(res.v, screen_v)};
    double slope = pair_dot(res, dir);
    if (!(slope > 0.0)) {  // fall back to the raw gradient direction
      dir = res;
      clamp_boundary(dir);
      slope = pair_dot(res, dir);
      if (!(slope > 0.0)) {
        rep.stop_reason = "gradient degenerate";
        break;
      }
    }

    // candidate for a step of size alpha, reprojected when constrained;
    // the action value comes back through the second argument
    auto make_candidate = [&](double alpha, double& cand_action) -> PairFn {
      PairFn cand = step(state, dir, alpha);
      if (opt.enforce_positive) enforce_cone(cand);
      clamp_boundary(cand);
      const Coefficients kc = coefficients(cand, prm, opt.theta_m);
      if (!(kc.a > 0.0)) return PairFn{RadialFn(state.grid()), RadialFn(state.grid())};
      if (opt.project) {
        const ProjectionResult pr = try_project_nehari(kc, prm.p);
        const std::optional<NehariRoot>& root =
            opt.branch == NehariClass::Plus ? pr.plus : pr.minus;
        if (!root) return PairFn{RadialFn(state.grid()), RadialFn(state.grid())};
        cand_action = root->report.value;
        return cand.scaled(root->t);
      }
      cand_action = energy_from(kc, prm.p);
      return cand;
    };
    auto is_zero = [](const PairFn& s) {
      for (double x : s.u.values) if (x != 0.0) return false;
      for (double x : s.v.values) if (x != 0.0) return false;
      return true;
    };

    // below this, a sufficient-decrease test compares rounding noise
    const double noise_floor =
        4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(action));

    bool accepted = false;
    for (double alpha = alpha_start; alpha >= opt.alpha_min; alpha *= 0.5) {
      // compare the full first-order decrease, not the armijo fraction of it:
      // steps whose decrease is resolvable must stay testable
      if (alpha * slope < noise_floor) break;
      const double predicted = opt.armijo * alpha * slope;
      double cand_action = 0.0;
      PairFn cand = make_candidate(alpha, cand_action);
      if (is_zero(cand)) continue;
      if (cand_action <= action - predicted) {
        state = std::move(cand);
        alpha_start = std::min(2.0 * alpha, opt.alpha_max);
        accepted = true;
        break;
      }
    }
    if (!accepted && rescue_left > 0) {
      // the action can no longer resolve progress; take whichever step over
      // the whole ladder contracts the residual norm the most, if any does
      double best_ratio = 1.0 - 1e-4;
      double best_alpha = 0.0;
      PairFn best_cand{RadialFn(state.grid()), RadialFn(state.grid())};
      for (double alpha = alpha_start; alpha >= opt.alpha_min; alpha *= 0.5) {
        double cand_action = 0.0;
        PairFn cand = make_candidate(alpha, cand_action);
        if (is_zero(cand)) continue;
        const double ratio = pair_l2_norm(residual(cand, prm, opt.theta_m)) / res_norm;
        if (ratio < best_ratio) {
          best_ratio = ratio;
          best_alpha = alpha;
          best_cand = std::move(cand);
        }
      }
      if (best_alpha > 0.0) {
        state = std::move(best_cand);
        alpha_start = std::min(2.0 * best_alpha, opt.alpha_max);
        --rescue_left;
        accepted = true;
      }
    }
    if (!accepted) {
      rep.stop_reason = rescue_left > 0 ? "line search exhausted" : "rescue budget exhausted";
      break;
    }
  }

  if (rep.stop_reason.empty()) rep.stop_reason = "iteration limit";
  rep.state = std::move(state);
  return rep;
}

}  // namespace nehari
