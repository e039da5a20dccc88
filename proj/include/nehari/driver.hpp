#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nehari/constants.hpp"
#include "nehari/identities.hpp"
#include "nehari/sobolev.hpp"

namespace nehari {

// End-to-end pipelines: existence solve, ground-state certification,
// nonexistence probing, two-solution search, and parameter sweeps.

enum class OutcomeClass { M1, M2, Neither };

inline const char* to_string(OutcomeClass c) {
  switch (c) {
    case OutcomeClass::M1: return "M1";
    case OutcomeClass::M2: return "M2";
    default: return "NEITHER";
  }
}

struct SolveOutcome {
  PairFn state;
  double energy = 0.0;
  OutcomeClass classification = OutcomeClass::Neither;
  IdentityReport identities;
  bool vectorial = false;  // both components carry mass
  bool positive = false;   // no interior sample below -1e-12
  double residual_norm = 0.0;
  int iterations = 0;
};

struct DriverOptions {
  double r_max = 30.0;
  std::size_t n = 2400;
  DescentOptions descent;
  // identity-coordinate consistency on grid data is limited by the dilation
  // identity's discretization error, far above the synthetic 1e-9
  double decompose_tol = 1e-2;
  double vectorial_tol = 1e-6;
  double manifold_tol = 1e-6;
};

namespace driver_detail {

inline SolveOutcome make_outcome(DescentReport&& rep, const Params& prm,
                                 const DriverOptions& opt) {
  SolveOutcome out;
  out.energy = rep.action;
  out.residual_norm = rep.residual_norm;
  out.iterations = rep.iterations;

  const Coefficients& k = rep.coeffs;
  const double scale = std::max({k.a, std::abs(k.b), k.c, 1e-300});
  if (std::abs(k.a + k.b - k.c) <= opt.manifold_tol * scale) {
    const FiberingReport fib = fibering_from(k, prm.p, 1.0);
    const double cscale = k.a + 3.0 * std::abs(k.b) + prm.p * k.c;
    switch (classify_curvature(fib.curvature, cscale)) {
      case NehariClass::Minus: out.classification = OutcomeClass::M1; break;
      case NehariClass::Plus: out.classification = OutcomeClass::M2; break;
      default: out.classification = OutcomeClass::Neither; break;
    }
  }

  out.identities = check_identities(rep.state, prm, opt.descent.theta_m);

  const double mass_u = mass_norm_sq(rep.state.u);
  const double mass_v = mass_norm_sq(rep.state.v);
  const double total = std::sqrt(mass_u + mass_v);
  out.vectorial = std::min(std::sqrt(mass_u), std::sqrt(mass_v)) > opt.vectorial_tol * total;

  out.positive = true;
  for (double x : rep.state.u.values)
    if (x < -1e-12) out.positive = false;
  for (double x : rep.state.v.values)
    if (x < -1e-12) out.positive = false;

  out.state = std::move(rep.state);
  return out;
}

inline double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace driver_detail

// Existence pipeline: single-field constrained solve at the smaller coupling,
// mix the ground state into both components with the optimal share, project
// onto the maximal branch, then run constrained descent.
inline SolveOutcome find_positive_solution(const Params& prm, const DriverOptions& opt = {}) {
  prm.validate();
  const GridPtr g = make_grid(opt.r_max, opt.n);

  ScalarSolveResult base =
      solve_scalar(prm.p, prm.lambda, prm.mu11, ScalarBranch::Minus, g, opt.descent);
  if (!base.converged)
    throw no_convergence("find_positive_solution: single-field stage stopped: " +
                         base.stop_reason);
  const double scalar_level = base.action;

  PairFn seed = seed_pair(base.w, prm);
  DescentOptions dopt = opt.descent;
  dopt.project = true;
  DescentReport rep = descend(std::move(seed), prm, dopt);
  if (!rep.converged)
    throw no_convergence("find_positive_solution: constrained descent stopped: " +
                         rep.stop_reason);

  SolveOutcome out = driver_detail::make_outcome(std::move(rep), prm, opt);
  if (!out.vectorial) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "find_positive_solution: one component collapsed; energy %.6g vs "
                  "single-field level %.6g",
                  out.energy, scalar_level);
    throw semitrivial_collapse(buf);
  }
  return out;
}

enum class Certification { Certified, NotApplicable, Failed };

inline const char* to_string(Certification c) {
  switch (c) {
    case Certification::Certified: return "CERTIFIED";
    case Certification::NotApplicable: return "NOT_APPLICABLE";
    default: return "FAILED";
  }
}

// Ground-state certificate: parameter gates first (exponent range, coupling
// determinant, coupling sizes against the window threshold, action level),
// then the curvature sign condition in identity coordinates.  A gate failing
// is NotApplicable; the sign condition failing after all gates pass flags the
// run.
inline Certification certify_ground_state(const SolveOutcome& outcome, const Params& prm,
                                          double sobolev, const DriverOptions& opt = {}) {
  if (!(prm.p >= 2.0 && prm.p < 3.0)) return Certification::NotApplicable;
  if (prm.mu11 * prm.mu22 - prm.mu12 * prm.mu12 < 0.0) return Certification::NotApplicable;
  const double window = lambda0_bar(prm.p, prm.lambda, sobolev);
  if (!(prm.mu11 < window && prm.mu22 < window)) return Certification::NotApplicable;
  if (!(outcome.energy < d0_threshold(prm.p, sobolev))) return Certification::NotApplicable;

  try {
    const ZVector z = z_vector(outcome.state, prm, opt.descent.theta_m);
    const GroundStateCheck gs = check_ground_state_condition(z, prm, opt.decompose_tol);
    return gs.status == GroundStateStatus::InMinusBranch ? Certification::Certified
                                                         : Certification::Failed;
  } catch (const inconsistent_z&) {
    return Certification::Failed;
  }
}

inline Certification certify_ground_state(const SolveOutcome& outcome, const Params& prm,
                                          const DriverOptions& opt = {}) {
  return certify_ground_state(outcome, prm, sobolev_constant(prm.p, prm.lambda), opt);
}

enum class ProbeVerdict { AllDecayed, Survivor };

inline const char* to_string(ProbeVerdict v) {
  return v == ProbeVerdict::AllDecayed ? "ALL_DECAYED" : "SURVIVOR";
}

struct ProbeReport {
  ProbeVerdict verdict = ProbeVerdict::AllDecayed;
  bool super_threshold = false;  // coupling ratio exceeded the closed-form bar
  int seeds = 0;
  int decayed = 0;
  std::optional<PairFn> survivor;
  std::optional<IdentityReport> survivor_identities;
  double survivor_energy = 0.0;
};

// Free gradient flow from randomized positive seeds.  In the nonexistence
// regime every trajectory must sink below the decay floor; a survivor either
// falsifies the parameter region or exposes a solver artifact, so it is
// returned with its identity report for inspection.
inline ProbeReport nonexistence_probe(const Params& prm, int n_seeds,
                                      std::uint64_t rng_seed = 2025,
                                      const DriverOptions& opt = {}) {
  prm.validate();
  const GridPtr g = make_grid(opt.r_max, opt.n);

  ProbeReport out;
  out.seeds = n_seeds;
  if (prm.p <= 2.0) {
    const double ratio =
        (prm.mu11 * prm.mu22 - prm.mu12 * prm.mu12) / (prm.mu11 + prm.mu22);
    out.super_threshold = ratio > nonexist_threshold(prm.p, prm.lambda);
  }

  std::uint64_t s = rng_seed ? rng_seed : 0x9e3779b97f4a7c15ull;
  auto next = [&s]() {  // splitmix64: tiny, deterministic across platforms
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return driver_detail::uniform01(z);
  };

  DescentOptions dopt = opt.descent;
  dopt.project = false;
  dopt.decay_floor = 1e-6;

  for (int seed_idx = 0; seed_idx < n_seeds; ++seed_idx) {
    const double wu = 0.5 + 3.5 * next(), au = 0.1 + 9.9 * next();
    const double wv = 0.5 + 3.5 * next(), av = 0.1 + 9.9 * next();
    PairFn seed{
        RadialFn::sample(g, [&](double r) { return au * std::exp(-r * r / (2.0 * wu * wu)); }),
        RadialFn::sample(g, [&](double r) { return av * std::exp(-r * r / (2.0 * wv * wv)); })};
    DescentReport rep = descend(std::move(seed), prm, dopt);
    if (rep.decayed) {
      ++out.decayed;
      continue;
    }
    out.verdict = ProbeVerdict::Survivor;
    out.survivor_energy = rep.action;
    out.survivor_identities = check_identities(rep.state, prm, dopt.theta_m);
    out.survivor = std::move(rep.state);
    break;
  }
  return out;
}

// Two-solution pipeline for the subquadratic exponent range: the constrained
// solve gives the positive-energy solution; the global minimizer comes from
// mixing the negative-action single-field branch and descending along the
// ray-minimum projection, which pins the constraint through the endgame.
inline std::pair<SolveOutcome, SolveOutcome> find_two_solutions(const Params& prm,
                                                                const DriverOptions& opt = {}) {
  prm.validate();
  if (!(prm.p < 2.0))
    throw config_error("find_two_solutions: needs a subquadratic exponent");

  SolveOutcome first = find_positive_solution(prm, opt);

  const GridPtr g = make_grid(opt.r_max, opt.n);
  ScalarSolveResult base =
      solve_scalar(prm.p, prm.lambda, prm.mu11, ScalarBranch::Plus, g, opt.descent);
  if (!base.converged)
    throw no_convergence("find_two_solutions: negative-branch stage stopped: " +
                         base.stop_reason);

  PairFn seed = seed_pair(base.w, prm);
  DescentOptions dopt = opt.descent;
  dopt.branch = NehariClass::Plus;
  DescentReport rep = descend(std::move(seed), prm, dopt);
  if (!rep.converged)
    throw no_convergence("find_two_solutions: lower-branch descent stopped: " +
                         rep.stop_reason);

  SolveOutcome second = driver_detail::make_outcome(std::move(rep), prm, opt);
  if (!second.vectorial)
    throw semitrivial_collapse("find_two_solutions: second solution lost a component");
  if (!(second.energy < 0.0 && 0.0 < first.energy)) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "find_two_solutions: energies %.6g / %.6g break the required ordering",
                  second.energy, first.energy);
    throw ordering_violation(buf);
  }
  return {std::move(first), std::move(second)};
}

// Cartesian parameter sweep; one CSV row per cell, never aborts on a cell
// error.  Output is deterministic: fixed column order, fixed cell order,
// %.17g formatting, per-cell RNG reseeded from the spec.
struct MuTriple {
  double mu11 = 0.0;
  double mu22 = 0.0;
  double mu12 = 0.0;
};

struct SweepSpec {
  std::vector<double> p_values;
  std::vector<double> lambda_values;
  std::vector<MuTriple> mu_values;
  int nonexist_seeds = 5;
  std::uint64_t rng_seed = 2025;
};

namespace driver_detail {

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_safe(std::string text) {
  for (char& ch : text)
    if (ch == ',' || ch == '\n' || ch == '"') ch = ';';
  return text;
}

}  // namespace driver_detail

inline std::string sweep(const SweepSpec& spec, const DriverOptions& opt = {}) {
  using driver_detail::fmt;
  std::string csv =
      "p,lambda,mu11,mu22,mu12,lambda0,lambda0_bar,a_p,d0_level,s_min,g_min,d_lambda,"
      "nonexist_threshold,sobolev,energy,nehari_residual,pohozaev_residual,classification,"
      "certification,nonexist,error\n";

  for (double p : spec.p_values)
    for (double lambda : spec.lambda_values)
      for (const MuTriple& mu : spec.mu_values) {
        Params prm;
        prm.p = p;
        prm.lambda = lambda;
        prm.mu11 = mu.mu11;
        prm.mu22 = mu.mu22;
        prm.mu12 = mu.mu12;

        std::string cells[16];  // lambda0 .. nonexist (filled below)
        std::string error_text;
        try {
          prm.validate();
          const double S = sobolev_constant(p, lambda);
          const ConstantsBundle b = constants_bundle(prm, S);
          cells[0] = fmt(b.lambda0);
          cells[1] = fmt(b.lambda0_bar);
          cells[2] = fmt(b.a_p);
          cells[3] = fmt(b.d0_level);
          cells[4] = fmt(b.s_min);
          cells[5] = fmt(b.g_min);
          cells[6] = fmt(b.d_lambda);
          cells[7] = fmt(b.nonexist_threshold);
          cells[8] = fmt(b.sobolev);

          const SolveOutcome outcome = find_positive_solution(prm, opt);
          cells[9] = fmt(outcome.energy);
          cells[10] = fmt(outcome.identities.nehari_residual);
          cells[11] = fmt(outcome.identities.pohozaev_residual);
          cells[12] = to_string(outcome.classification);
          cells[13] = to_string(certify_ground_state(outcome, prm, S, opt));
          if (p <= 2.0) {
            const ProbeReport probe =
                nonexistence_probe(prm, spec.nonexist_seeds, spec.rng_seed, opt);
            cells[14] = to_string(probe.verdict);
          }
        } catch (const std::exception& e) {
          error_text = driver_detail::csv_safe(e.what());
        }

        csv += fmt(p) + "," + fmt(lambda) + "," + fmt(mu.mu11) + "," + fmt(mu.mu22) + "," +
               fmt(mu.mu12);
        for (int i = 0; i < 15; ++i) csv += "," + cells[i];
        csv += "," + error_text + "\n";
      }
  return csv;
}

}  // namespace nehari
