#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <utility>

#include "nehari/scalar_sp.hpp"

namespace nehari {

// Best constant of the radial embedding, in the operator-norm-inverse
// convention
//
//   ||u||_{L^{p+1}} <= S^{-1} ||u||_{H_lambda},   S = inf ||u||_H / ||u||_{p+1},
//
// attained by the positive ground state of the pure power problem (the mu = 0
// scalar reduction).  The quotient is scale invariant, so no normalisation of
// the computed profile is needed.  The direction matters: the coupling
// thresholds shrink as S grows (weaker embedding, weaker nonlinearity), and
// plugging the reciprocal in produces thresholds orders of magnitude past the
// actual dip of the fibering map.

struct SobolevOptions {
  double r_max = 30.0;
  std::size_t n = 2400;
  // the embedding quotient is stationary at the optimiser, so the default
  // residual tolerance already gives it to quadrature accuracy
  DescentOptions descent;
};

namespace sobolev_detail {

inline std::shared_mutex& cache_mutex() {
  static std::shared_mutex m;
  return m;
}

inline std::map<std::pair<double, double>, double>& cache() {
  static std::map<std::pair<double, double>, double> c;
  return c;
}

}  // namespace sobolev_detail

// Pin a value (user supplied or externally computed) for a parameter pair.
inline void set_sobolev_constant(double p, double lambda, double value) {
  if (!(value > 0.0)) throw config_error("set_sobolev_constant: value must be positive");
  std::unique_lock lock(sobolev_detail::cache_mutex());
  sobolev_detail::cache()[{p, lambda}] = value;
}

inline double sobolev_constant(double p, double lambda, const SobolevOptions& opt = {}) {
  if (!(p > 1.0 && p < 3.0)) throw config_error("sobolev_constant: p must lie in (1, 3)");
  if (!(lambda > 0.0)) throw config_error("sobolev_constant: lambda must be positive");
  {
    std::shared_lock lock(sobolev_detail::cache_mutex());
    auto it = sobolev_detail::cache().find({p, lambda});
    if (it != sobolev_detail::cache().end()) return it->second;
  }

  const GridPtr grid = make_grid(opt.r_max, opt.n);
  const ScalarSolveResult gs = solve_scalar(p, lambda, 0.0, ScalarBranch::Minus, grid, opt.descent);
  if (!gs.converged)
    throw no_convergence("sobolev_constant: ground-state solve did not converge");

  const Params prm = scalar_detail::reduced_params(p, lambda, 0.0);
  const Coefficients k = coefficients(scalar_detail::lift(gs.w), prm);
  const double value = std::sqrt(k.a) / std::pow(k.c, 1.0 / (p + 1.0));

  std::unique_lock lock(sobolev_detail::cache_mutex());
  sobolev_detail::cache()[{p, lambda}] = value;
  return value;
}

}  // namespace nehari
