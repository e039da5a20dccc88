#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "nehari/identities.hpp"
#include "nehari/scalar_sp.hpp"

using namespace nehari;
using std::numbers::pi;

namespace {

Params unit_mu_params(double p) {
  Params prm;
  prm.p = p;
  prm.lambda = 1.0;
  prm.mu11 = 1.0;
  prm.mu22 = 1.0;
  prm.mu12 = 1.0;
  return prm;
}

}  // namespace

TEST_CASE("zero state maps to the zero vector") {
  const GridPtr g = make_grid(10.0, 200);
  PairFn zero{RadialFn(g), RadialFn(g)};
  const Params prm = unit_mu_params(2.5);
  const ZVector z = z_vector(zero, prm);
  CHECK(z.z1 == 0.0);
  CHECK(z.z2 == 0.0);
  CHECK(z.z3 == 0.0);
  CHECK(z.z4 == 0.0);
  CHECK(z.z5 == 0.0);
  CHECK(z.z6 == 0.0);
  const IdentityReport rep = identity_residuals(z, prm);
  CHECK(rep.nehari_residual == 0.0);
  CHECK(rep.pohozaev_residual == 0.0);
}

TEST_CASE("one-component states have no second-species integrals") {
  const GridPtr g = make_grid(15.0, 400);
  PairFn s(RadialFn::sample(g, [](double r) { return std::exp(-r * r); }), RadialFn(g));
  const ZVector z = z_vector(s, unit_mu_params(2.0));
  CHECK(z.z1 > 0.0);
  CHECK(z.z3 > 0.0);
  CHECK(z.z4 == 0.0);
  CHECK(z.z5 == 0.0);
}

TEST_CASE("interpolation bound on the Coulomb integrals") {
  const GridPtr g = make_grid(20.0, 500);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> amp(0.2, 3.0), width(0.2, 2.0);
  const Params prm = unit_mu_params(2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double au = amp(rng), su = width(rng), av = amp(rng), sv = width(rng);
    PairFn s(RadialFn::sample(g, [&](double r) { return au * std::exp(-su * r * r); }),
             RadialFn::sample(g, [&](double r) { return av * std::exp(-sv * r * r); }));
    const ZVector z = z_vector(s, prm);
    const double lam = prm.lambda;
    const double bound = 256.0 / (27.0 * pi * pi * lam * lam * lam) * z.z2 * z.z2 * z.z2 * z.z1;
    CHECK(z.z3 * z.z3 + z.z4 * z.z4 <= bound * (1.0 + 1e-9));
  }
}

TEST_CASE("synthetic vector solves both identities and decomposes") {
  const Params prm = unit_mu_params(2.5);
  ZVector z;
  z.z1 = 1.0;
  z.z2 = 3.0;
  z.z3 = 1.0;
  z.z4 = 1.0;
  z.z5 = 3.0;
  z.z6 = 0.0;
  const IdentityReport rep = identity_residuals(z, prm);
  CHECK(rep.nehari_residual == 0.0);
  CHECK(rep.pohozaev_residual == 0.0);

  const CoeffDecomp c = decompose(z, prm);
  CHECK(c.theta == Catch::Approx(1.0).margin(1e-12));
  CHECK(c.s == Catch::Approx(1.0).margin(1e-12));
  CHECK(c.t == Catch::Approx(1.0).margin(1e-12));
  CHECK(c.w == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("decompose round-trips random consistent vectors") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pos(0.2, 2.0), small(0.0, 0.8);
  for (int trial = 0; trial < 50; ++trial) {
    Params prm = unit_mu_params(1.5 + trial % 3 * 0.5);
    prm.mu11 = pos(rng);
    prm.mu22 = pos(rng);
    prm.mu12 = pos(rng);
    CoeffDecomp in;
    in.theta = pos(rng);
    in.s = pos(rng);
    in.t = pos(rng);
    in.w = small(rng);
    const ZVector z = reconstruct(in, prm);
    const CoeffDecomp out = decompose(z, prm, 1e-9);
    CHECK(out.theta == Catch::Approx(in.theta).epsilon(1e-9));
    CHECK(out.s == Catch::Approx(in.s).epsilon(1e-9));
    CHECK(out.t == Catch::Approx(in.t).epsilon(1e-9));
    CHECK(out.w == Catch::Approx(in.w).margin(1e-9));
  }
}

TEST_CASE("inconsistent vectors are rejected") {
  const Params prm = unit_mu_params(2.5);
  CoeffDecomp in;
  in.theta = 1.0;
  in.s = 0.5;
  in.t = 0.7;
  in.w = 0.2;
  ZVector z = reconstruct(in, prm);
  z.z6 *= 1.5;  // breaks the identities without touching the pinned rows
  CHECK_THROWS_AS(decompose(z, prm), inconsistent_z);
}

TEST_CASE("identities hold on a converged solution to quadrature accuracy") {
  const GridPtr g = make_grid(30.0, 2400);
  const double p = 2.5, mu = 0.05;
  const ScalarSolveResult r = solve_scalar(p, 1.0, mu, ScalarBranch::Minus, g);
  REQUIRE(r.converged);

  const Params prm = scalar_detail::reduced_params(p, 1.0, mu);
  const PairFn state = scalar_detail::lift(r.w);
  const ZVector z = z_vector(state, prm);
  const IdentityReport rep = identity_residuals(z, prm);
  CHECK(rep.nehari_residual < 1e-8);
  CHECK(rep.pohozaev_residual < 1e-3);

  // the level coordinate recovers the action
  const CoeffDecomp c = decompose(z, prm, 1e-4);
  CHECK(c.theta == Catch::Approx(r.action).epsilon(1e-4));
  CHECK(c.w > 0.0);
  CHECK(c.t > 0.0);

  // coefficient bounds satisfied by minimal-branch solutions
  CHECK(c.s + c.t > 0.0);
  CHECK(c.s + c.t < 4.0 * (p + 1.0) * c.theta / (3.0 - p));

  const GroundStateCheck gs = check_ground_state_condition(z, prm, 1e-4);
  CHECK(gs.status == GroundStateStatus::InMinusBranch);
  CHECK(gs.curvature < 0.0);
  CHECK(gs.w_within_primary_bound);
  REQUIRE(gs.w_within_quadratic_bound.has_value());
  CHECK(*gs.w_within_quadratic_bound);
}

TEST_CASE("oversized nonlinearity weight breaks the membership bounds") {
  Params prm = unit_mu_params(2.05);
  CoeffDecomp in;
  in.theta = 1.0;
  in.s = 1.0;
  in.t = 1.0;
  in.w = 15.0;  // past 8 theta / ((p-1)(3-p)) ~ 8.02
  const ZVector z = reconstruct(in, prm);
  const GroundStateCheck gs = check_ground_state_condition(z, prm);
  CHECK_FALSE(gs.w_within_primary_bound);
  CHECK(gs.status == GroundStateStatus::Violated);
}

TEST_CASE("Coulomb integrals obey the bilinear-form Cauchy-Schwarz") {
  // z5^2 <= z3 z4 for genuine pairs, hence the coupling combination stays
  // nonnegative whenever the determinant of the coupling matrix does
  const GridPtr g = make_grid(20.0, 500);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> amp(0.2, 3.0), width(0.2, 2.0), pos(0.2, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double au = amp(rng), su = width(rng), av = amp(rng), sv = width(rng);
    PairFn s(RadialFn::sample(g, [&](double r) { return au * std::exp(-su * r * r); }),
             RadialFn::sample(g, [&](double r) { return av * std::exp(-sv * r * r); }));
    Params prm = unit_mu_params(2.3);
    prm.mu11 = pos(rng);
    prm.mu22 = pos(rng);
    prm.mu12 = std::sqrt(prm.mu11 * prm.mu22);  // det = 0, the tight case
    const ZVector z = z_vector(s, prm);
    CHECK(z.z5 * z.z5 <= z.z3 * z.z4 * (1.0 + 1e-9));
    const double combo = prm.mu11 * z.z3 + prm.mu22 * z.z4 - 2.0 * prm.mu12 * z.z5;
    CHECK(combo >= -1e-9 * (z.z3 + z.z4));
  }
}
