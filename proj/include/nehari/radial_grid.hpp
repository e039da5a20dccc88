#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <vector>

#include "nehari/errors.hpp"

namespace nehari {

// Uniform radial grid on (0, r_max] for rotationally symmetric fields on R^3.
// Node i (0-based storage) sits at r = (i+1)*spacing, the last node at r_max.
//
// Two weight sets are kept:
//  * weights():   fourth-order (Simpson class, with a 3/8 tail when the
//                 interval count is odd) applied to f(r)*r^2, with the
//                 implicit node at r = 0 where the integrand vanishes.
//                 Exact for constants, all entries positive.  Used for
//                 reported integrals.
//  * massWeights: second-order trapezoid masses c_i*r_i^2.  Every quadratic
//                 form the variational machinery differentiates (energy,
//                 constraint values, residuals) is built from this single
//                 smooth weight set so that discrete gradients stay exact
//                 and free of node-to-node weight oscillation.
class RadialGrid {
 public:
  RadialGrid(double r_max, std::size_t n) : r_max_(r_max), n_(n) {
    if (!(r_max > 0.0)) throw config_error("radial grid: r_max must be positive");
    if (n < 16) throw config_error("radial grid: need at least 16 nodes");
    h_ = r_max / static_cast<double>(n);
    nodes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) nodes_[i] = h_ * static_cast<double>(i + 1);

    std::vector<double> c(n + 1, 0.0);  // point coefficients incl. virtual r=0
    if (n % 2 == 0) {
      simpson_coeffs(c, 0, n);
    } else {
      simpson_coeffs(c, 0, n - 3);
      const double w38 = 3.0 * h_ / 8.0;
      c[n - 3] += w38;
      c[n - 2] += 3.0 * w38;
      c[n - 1] += 3.0 * w38;
      c[n] += w38;
    }
    weights_.resize(n);
    for (std::size_t i = 0; i < n; ++i) weights_[i] = c[i + 1] * nodes_[i] * nodes_[i];

    mass_weights_.resize(n);
    for (std::size_t i = 0; i + 1 < n; ++i) mass_weights_[i] = h_ * nodes_[i] * nodes_[i];
    mass_weights_[n - 1] = 0.5 * h_ * r_max_ * r_max_;
  }

  double r_max() const { return r_max_; }
  std::size_t n() const { return n_; }
  double spacing() const { return h_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& mass_weights() const { return mass_weights_; }

  bool compatible(const RadialGrid& other) const {
    return n_ == other.n_ && r_max_ == other.r_max_;
  }

 private:
  // Composite Simpson point coefficients on nodes [first, last] (even count
  // of intervals), accumulated into c.
  void simpson_coeffs(std::vector<double>& c, std::size_t first, std::size_t last) const {
    const double w = h_ / 3.0;
    c[first] += w;
    c[last] += w;
    for (std::size_t k = first + 1; k < last; ++k) c[k] += ((k - first) % 2 == 1) ? 4.0 * w : 2.0 * w;
  }

  double r_max_;
  std::size_t n_;
  double h_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> mass_weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline GridPtr make_grid(double r_max, std::size_t n) {
  return std::make_shared<const RadialGrid>(r_max, n);
}

// Nodal samples of one radial field.
struct RadialFn {
  GridPtr grid;
  std::vector<double> values;

  RadialFn() = default;
  explicit RadialFn(GridPtr g) : grid(std::move(g)), values(grid->n(), 0.0) {}
  RadialFn(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid->n()) throw config_error("radial function: sample count does not match grid");
  }

  static RadialFn sample(const GridPtr& g, const std::function<double(double)>& f) {
    RadialFn out(g);
    for (std::size_t i = 0; i < g->n(); ++i) out.values[i] = f(g->nodes()[i]);
    return out;
  }
};

inline void require_same_grid(const RadialFn& a, const RadialFn& b) {
  if (!a.grid || !b.grid || !a.grid->compatible(*b.grid))
    throw grid_mismatch("radial functions live on different grids");
}

// \int_{R^3} f dx = 4*pi * sum weights_i * f_i for radial f.
inline double integrate_ball(const RadialGrid& g, const std::vector<double>& values) {
  const auto& w = g.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i];
  return 4.0 * std::numbers::pi * s;
}

inline double integrate_ball(const RadialFn& f) { return integrate_ball(*f.grid, f.values); }

// Same integral on the trapezoid mass layer; this is the quadrature that the
// energy functional and all constraint values share.
inline double integrate_mass(const RadialGrid& g, const std::vector<double>& values) {
  const auto& w = g.mass_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i];
  return 4.0 * std::numbers::pi * s;
}

// First-derivative samples: one-sided at both ends, centered inside.
inline std::vector<double> radial_derivative(const RadialGrid& g, const std::vector<double>& f) {
  const std::size_t n = g.n();
  const double h = g.spacing();
  std::vector<double> d(n);
  d[0] = (f[1] - f[0]) / h;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[n - 1] = (f[n - 1] - f[n - 2]) / h;
  return d;
}

// \int |grad f|^2 dx over R^3 for radial f, as a sum over grid intervals with
// midpoint radii.  A staggered form is essential: quadratures built on
// centered nodal derivatives are blind to the alternating mode and the energy
// descent then drifts along a spurious checkerboard.  The first interval
// [0, h] contributes nothing because smooth radial functions are flat at the
// origin (the omitted piece is O(h^5)).
inline double grad_norm_sq(const RadialFn& f) {
  const RadialGrid& g = *f.grid;
  const std::size_t n = g.n();
  const double h = g.spacing();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double mid = (static_cast<double>(i) + 1.5) * h;
    const double df = (f.values[i + 1] - f.values[i]) / h;
    s += h * mid * mid * df * df;
  }
  return 4.0 * std::numbers::pi * s;
}

// \int f^2 dx on the mass layer.
inline double mass_norm_sq(const RadialFn& f) {
  const RadialGrid& g = *f.grid;
  const auto& q = g.mass_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) s += q[i] * f.values[i] * f.values[i];
  return 4.0 * std::numbers::pi * s;
}

// \int |grad f|^2 + lambda f^2 dx over R^3 for radial f.
inline double h1_norm_sq(const RadialFn& f, double lambda) {
  return grad_norm_sq(f) + lambda * mass_norm_sq(f);
}

// Gradient of 1/2 grad_norm_sq with respect to the nodal values, divided by
// the mass weight 4 pi q_j: the conservative second-order stencil
// -(r^2 f')' / r^2 with interval coefficients.  No interval extends past the
// last node, mirroring the seminorm sum exactly; the solver pins that node to
// zero separately.
inline std::vector<double> radial_stiffness(const RadialGrid& g, const std::vector<double>& f) {
  const std::size_t n = g.n();
  const double h = g.spacing();
  const auto& q = g.mass_weights();  // actual weights: the last one is halved
  std::vector<double> out(n);
  auto mid2 = [h](std::size_t i) {
    const double m = (static_cast<double>(i) + 1.5) * h;
    return m * m;
  };
  for (std::size_t j = 0; j < n; ++j) {
    double flux = 0.0;
    if (j + 1 < n) flux -= mid2(j) * (f[j + 1] - f[j]);
    if (j > 0) flux += mid2(j - 1) * (f[j] - f[j - 1]);
    out[j] = flux / (h * q[j]);
  }
  return out;
}

}  // namespace nehari
