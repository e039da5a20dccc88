#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "nehari/descent.hpp"

namespace nehari {

// Single-field reduction: v = 0 turns the pair action into
//
//   I_mu(w) = 1/2 |w|_H^2 + mu/4 \int phi_w w^2 - 1/(p+1) \int |w|^{p+1}.
//
// For every mu > 0 the constrained branch (ray maxima) carries a positive
// ground state; below the quadratic exponent and for small mu a second
// solution appears as a global minimiser with negative action.

enum class ScalarBranch { Minus, Plus };

inline const char* to_string(ScalarBranch b) {
  return b == ScalarBranch::Minus ? "minus" : "plus";
}

struct ScalarSolveResult {
  RadialFn w;
  double p = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  ScalarBranch branch = ScalarBranch::Minus;
  double action = 0.0;
  double h_norm = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
};

namespace scalar_detail {

// The cross coupling never acts on a one-component state, so any positive
// placeholder keeps the pair machinery valid.
inline Params reduced_params(double p, double lambda, double mu) {
  Params prm;
  prm.p = p;
  prm.lambda = lambda;
  prm.mu11 = mu;
  prm.mu22 = mu;
  prm.mu12 = 1.0;
  return prm;
}

inline PairFn lift(const RadialFn& w) {
  return PairFn{w, RadialFn(w.grid)};
}

// w(beta r) by linear interpolation; flat below the first node, zero past the
// last.
inline RadialFn dilate(const RadialFn& w, double beta) {
  const RadialGrid& g = *w.grid;
  const double h = g.spacing();
  RadialFn out(w.grid);
  for (std::size_t i = 0; i < g.n(); ++i) {
    const double x = beta * g.nodes()[i];
    if (x >= g.r_max()) {
      out.values[i] = 0.0;
    } else if (x <= h) {
      out.values[i] = w.values[0];
    } else {
      const double idx = x / h - 1.0;
      const std::size_t j = static_cast<std::size_t>(idx);
      const double frac = idx - static_cast<double>(j);
      out.values[i] = (1.0 - frac) * w.values[j] + frac * w.values[j + 1];
    }
  }
  return out;
}

// Amplitude scaling alone cannot open the ray dip at strong coupling: the
// Coulomb term is quartic while the power term is subcubic.  Spatial dilation
// trades them at different rates (1/beta, 1/beta^3, 1/beta^5, 1/beta^3 for
// gradient, mass, pairing, power), so scan dilations of the pure-power ground
// state and keep the ray with the widest root gap.
inline RadialFn best_dilation_seed(const RadialFn& w0, double p, double lambda, double mu,
                                   int theta_m) {
  const double grad = grad_norm_sq(w0);
  const double mass = mass_norm_sq(w0);
  const double pair = hartree_pairing(w0, w0);

  const Params prm = reduced_params(p, lambda, mu);
  const double power = coefficients(lift(w0), prm, theta_m).c;

  struct Scored {
    double beta = 1.0;
    double score = 0.0;
  };
  std::vector<Scored> rooted;
  for (int k = -8; k <= 12; ++k) {
    const double beta = std::pow(2.0, 0.25 * k);
    Coefficients synth;
    synth.a = grad / beta + lambda * mass / (beta * beta * beta);
    synth.b = mu * pair / std::pow(beta, 5.0);
    synth.c = power / (beta * beta * beta);
    const ProjectionResult pr = try_project_nehari(synth, p);
    if (pr.minus && pr.plus) rooted.push_back({beta, pr.plus->t / pr.minus->t});
  }
  std::sort(rooted.begin(), rooted.end(),
            [](const Scored& x, const Scored& y) { return x.score > y.score; });

  for (const Scored& s : rooted) {
    RadialFn cand = dilate(w0, s.beta);
    const ProjectionResult pr = try_project_nehari(coefficients(lift(cand), prm, theta_m), p);
    if (pr.minus && pr.plus) return cand;
  }
  throw no_projection("solve_scalar: no dilation of the ground state reaches the "
                      "constraint set; coupling too large for this branch");
}

}  // namespace scalar_detail

inline ScalarSolveResult solve_scalar(double p, double lambda, double mu, ScalarBranch branch,
                                      const GridPtr& grid, DescentOptions opt = {}) {
  if (!(p > 1.0 && p < 3.0)) throw config_error("solve_scalar: p must lie in (1, 3)");
  if (!(lambda > 0.0)) throw config_error("solve_scalar: lambda must be positive");
  if (!(mu >= 0.0)) throw config_error("solve_scalar: mu must be nonnegative");
  if (branch == ScalarBranch::Plus) {
    if (!(p < 2.0))
      throw branch_unavailable("solve_scalar: the negative-action branch needs p < 2");
    if (!(mu > 0.0))
      throw branch_unavailable("solve_scalar: the negative-action branch needs mu > 0");
  }

  const Params prm = scalar_detail::reduced_params(p, lambda, mu);

  // A bare Gaussian ray can miss the constraint set once the Coulomb term is
  // strong, so couple-in gradually: solve the pure-power problem first and
  // seed from the dilation of its ground state whose ray dips deepest.
  RadialFn seed = RadialFn::sample(grid, [](double r) { return std::exp(-0.5 * r * r); });
  if (mu > 0.0) {
    ScalarSolveResult base = solve_scalar(p, lambda, 0.0, ScalarBranch::Minus, grid, opt);
    if (!base.converged)
      throw no_convergence("solve_scalar: pure-power seed solve did not converge");
    seed = scalar_detail::best_dilation_seed(base.w, p, lambda, mu, opt.theta_m);
  }

  DescentReport rep;
  if (branch == ScalarBranch::Minus) {
    PairFn lifted = scalar_detail::lift(seed);
    const ProjectionResult pr =
        try_project_nehari(coefficients(lifted, prm, opt.theta_m), prm.p);
    if (!pr.minus)
      throw no_projection("solve_scalar: seed ray misses the constraint set; "
                          "coupling too large for this branch");
    opt.project = true;
    rep = descend(std::move(lifted), prm, opt);
  } else {
    // start past the ray minimum, then relax freely toward the global one
    PairFn lifted = scalar_detail::lift(seed);
    const ProjectionResult pr =
        try_project_nehari(coefficients(lifted, prm, opt.theta_m), prm.p);
    if (!pr.plus)
      throw branch_unavailable("solve_scalar: no ray minimum at this coupling");
    opt.project = false;
    rep = descend(lifted.scaled(pr.plus->t), prm, opt);
  }

  ScalarSolveResult out;
  out.w = std::move(rep.state.u);
  out.p = p;
  out.lambda = lambda;
  out.mu = mu;
  out.branch = branch;
  out.action = rep.action;
  out.h_norm = rep.h_norm;
  out.residual_norm = rep.residual_norm;
  out.iterations = rep.iterations;
  out.converged = rep.converged;
  out.stop_reason = rep.stop_reason;
  return out;
}

}  // namespace nehari
