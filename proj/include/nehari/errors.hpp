#pragma once

#include <stdexcept>
#include <string>

namespace nehari {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user-supplied configuration (parameters, grid sizes, files).
struct config_error : error {
  explicit config_error(const std::string& what) : error(what) {}
};

// Two radial functions living on incompatible grids were combined.
struct grid_mismatch : error {
  explicit grid_mismatch(const std::string& what) : error(what) {}
};

// The fibering map has no admissible critical point along the ray.
struct no_projection : error {
  explicit no_projection(const std::string& what) : error(what) {}
};

// Iteration budget exhausted before reaching the residual tolerance.
struct no_convergence : error {
  explicit no_convergence(const std::string& what) : error(what) {}
};

// A solve branch that only exists for part of the exponent range.
struct branch_unavailable : error {
  explicit branch_unavailable(const std::string& what) : error(what) {}
};

// A state handed to a manifold-only routine is too far off the manifold.
struct not_on_manifold : error {
  explicit not_on_manifold(const std::string& what) : error(what) {}
};

// An integral vector cannot be reconstructed from its coordinates.
struct inconsistent_z : error {
  explicit inconsistent_z(const std::string& what) : error(what) {}
};

// A two-component solve lost one component to zero.
struct semitrivial_collapse : error {
  explicit semitrivial_collapse(const std::string& what) : error(what) {}
};

// The energies of a two-solution pair came out in the wrong order.
struct ordering_violation : error {
  explicit ordering_violation(const std::string& what) : error(what) {}
};

}  // namespace nehari
