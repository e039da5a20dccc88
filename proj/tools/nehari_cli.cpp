#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nehari/io.hpp"

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// NaN and infinity have no JSON literals; keep them readable instead of the
// serializer's silent null.
json number_or_tag(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

struct Flags {
  std::string config_path;
  double p = 0.0, lambda = 0.0, mu11 = 0.0, mu22 = 0.0, mu12 = 0.0;
  double r_max = 0.0, tol = 0.0, sobolev = 0.0;
  std::uint64_t n = 0, seed = 0;
  int theta = 0, threads = 1, seeds = 10;
  std::string out, branch = "minus", mu_scalar_raw;
  double mu_scalar = 0.0;
};

void attach_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config file; flags override its fields");
  sub->add_option("--p", f.p, "exponent of the angular nonlinearity, in (1, 3)");
  sub->add_option("--lambda", f.lambda, "mass coefficient, positive");
  sub->add_option("--mu11", f.mu11, "self coupling of the first component");
  sub->add_option("--mu22", f.mu22, "self coupling of the second component");
  sub->add_option("--mu12", f.mu12, "cross coupling");
  sub->add_option("--rmax", f.r_max, "radial truncation radius");
  sub->add_option("--n", f.n, "number of radial grid nodes");
  sub->add_option("--theta-m", f.theta, "angular quadrature nodes");
  sub->add_option("--tol", f.tol, "relative residual stopping tolerance");
  sub->add_option("--seed", f.seed, "RNG seed for randomized stages");
  sub->add_option("--sobolev", f.sobolev, "override the embedding constant");
  sub->add_option("--out", f.out, "directory for state files and the run manifest");
}

nehari::RunConfig resolve(const CLI::App* sub, const Flags& f) {
  nehari::RunConfig cfg;
  if (!f.config_path.empty()) cfg = nehari::load_config(f.config_path);
  if (sub->count("--p")) cfg.params.p = f.p;
  if (sub->count("--lambda")) cfg.params.lambda = f.lambda;
  if (sub->count("--mu11")) cfg.params.mu11 = f.mu11;
  if (sub->count("--mu22")) cfg.params.mu22 = f.mu22;
  if (sub->count("--mu12")) cfg.params.mu12 = f.mu12;
  if (sub->count("--rmax")) cfg.r_max = f.r_max;
  if (sub->count("--n")) cfg.n = f.n;
  if (sub->count("--theta-m")) cfg.theta_nodes = f.theta;
  if (sub->count("--tol")) cfg.tolerances.descent = f.tol;
  if (sub->count("--seed")) cfg.rng_seed = f.seed;
  if (sub->count("--sobolev")) cfg.sobolev_override = f.sobolev;
  if (sub->count("--out")) cfg.output_dir = f.out;
  cfg.validate();
  return cfg;
}

void emit(const json& j) { std::printf("%s\n", j.dump(2).c_str()); }

json outcome_to_json(const nehari::SolveOutcome& out, const nehari::Params& prm) {
  json j;
  j["energy"] = out.energy;
  j["classification"] = nehari::to_string(out.classification);
  j["nehari_residual"] = out.identities.nehari_residual;
  j["pohozaev_residual"] = out.identities.pohozaev_residual;
  j["vectorial"] = out.vectorial;
  j["positive"] = out.positive;
  j["residual_norm"] = out.residual_norm;
  j["iterations"] = out.iterations;
  j["h_norm"] = std::sqrt(nehari::pair_h_norm_sq(out.state, prm.lambda));
  return j;
}

int run_solve(const CLI::App* sub, const Flags& f) {
  const auto t0 = Clock::now();
  const nehari::RunConfig cfg = resolve(sub, f);
  const nehari::SolveOutcome out = nehari::find_positive_solution(cfg.params, cfg.driver_options());
  json j = outcome_to_json(out, cfg.params);
  j["command"] = "solve";
  if (!cfg.output_dir.empty()) {
    nehari::save_state((std::filesystem::path(cfg.output_dir) / "state").string(), out.state,
                       cfg.params);
    nehari::write_manifest(cfg.output_dir, "solve", cfg, seconds_since(t0));
    j["output_dir"] = cfg.output_dir;
  }
  emit(j);
  return 0;
}

int run_certify(const CLI::App* sub, const Flags& f) {
  const auto t0 = Clock::now();
  const nehari::RunConfig cfg = resolve(sub, f);
  const nehari::Params& prm = cfg.params;
  const double sob = cfg.sobolev();
  const nehari::DriverOptions opt = cfg.driver_options();
  const nehari::SolveOutcome out = nehari::find_positive_solution(prm, opt);
  const nehari::Certification verdict = nehari::certify_ground_state(out, prm, sob, opt);

  json j = outcome_to_json(out, prm);
  j["command"] = "certify";
  j["certification"] = nehari::to_string(verdict);
  j["sobolev"] = sob;
  const double window = nehari::lambda0_bar(prm.p, prm.lambda, sob);
  j["gates"] = {{"exponent_in_range", prm.p >= 2.0 && prm.p < 3.0},
                {"det_nonneg", prm.det_mu() >= 0.0},
                {"couplings_below_window", prm.mu11 < window && prm.mu22 < window},
                {"action_below_level", out.energy < nehari::d0_threshold(prm.p, sob)}};
  j["window"] = number_or_tag(window);
  j["action_level"] = nehari::d0_threshold(prm.p, sob);
  try {
    const nehari::ZVector z = nehari::z_vector(out.state, prm, opt.descent.theta_m);
    const nehari::GroundStateCheck gs =
        nehari::check_ground_state_condition(z, prm, opt.decompose_tol);
    j["decomposition"] = {{"theta", gs.coeffs.theta},
                          {"s", gs.coeffs.s},
                          {"t", gs.coeffs.t},
                          {"w", gs.coeffs.w}};
    j["curvature"] = gs.curvature;
    j["w_within_primary_bound"] = gs.w_within_primary_bound;
    j["w_within_quadratic_bound"] =
        gs.w_within_quadratic_bound ? json(*gs.w_within_quadratic_bound) : json(nullptr);
  } catch (const nehari::inconsistent_z&) {
    j["decomposition"] = nullptr;
  }
  if (!cfg.output_dir.empty()) {
    nehari::save_state((std::filesystem::path(cfg.output_dir) / "state").string(), out.state,
                       prm);
    nehari::write_manifest(cfg.output_dir, "certify", cfg, seconds_since(t0));
    j["output_dir"] = cfg.output_dir;
  }
  emit(j);
  return 0;
}

int run_nonexist(const CLI::App* sub, const Flags& f) {
  const auto t0 = Clock::now();
  const nehari::RunConfig cfg = resolve(sub, f);
  const nehari::ProbeReport rep =
      nehari::nonexistence_probe(cfg.params, f.seeds, cfg.rng_seed, cfg.driver_options());
  json j;
  j["command"] = "nonexist";
  j["verdict"] = nehari::to_string(rep.verdict);
  j["super_threshold"] = rep.super_threshold;
  j["seeds"] = rep.seeds;
  j["decayed"] = rep.decayed;
  if (cfg.params.p <= 2.0) {
    j["threshold"] = nehari::nonexist_threshold(cfg.params.p, cfg.params.lambda);
    j["coupling_ratio"] = cfg.params.det_mu() / (cfg.params.mu11 + cfg.params.mu22);
  } else {
    j["threshold"] = nullptr;
    j["coupling_ratio"] = nullptr;
  }
  if (rep.survivor) {
    j["survivor"] = {{"energy", rep.survivor_energy},
                     {"nehari_residual", rep.survivor_identities->nehari_residual},
                     {"pohozaev_residual", rep.survivor_identities->pohozaev_residual}};
    if (!cfg.output_dir.empty())
      nehari::save_state((std::filesystem::path(cfg.output_dir) / "survivor").string(),
                         *rep.survivor, cfg.params);
  } else {
    j["survivor"] = nullptr;
  }
  if (!cfg.output_dir.empty()) {
    nehari::write_manifest(cfg.output_dir, "nonexist", cfg, seconds_since(t0));
    j["output_dir"] = cfg.output_dir;
  }
  emit(j);
  return 0;
}

int run_two_solutions(const CLI::App* sub, const Flags& f) {
  const auto t0 = Clock::now();
  const nehari::RunConfig cfg = resolve(sub, f);
  const auto [first, second] = nehari::find_two_solutions(cfg.params, cfg.driver_options());
  json j;
  j["command"] = "two-solutions";
  j["first"] = outcome_to_json(first, cfg.params);
  j["second"] = outcome_to_json(second, cfg.params);
  if (!cfg.output_dir.empty()) {
    const std::filesystem::path base(cfg.output_dir);
    nehari::save_state((base / "first").string(), first.state, cfg.params);
    nehari::save_state((base / "second").string(), second.state, cfg.params);
    nehari::write_manifest(cfg.output_dir, "two-solutions", cfg, seconds_since(t0));
    j["output_dir"] = cfg.output_dir;
  }
  emit(j);
  return 0;
}

int run_scalar(const CLI::App* sub, const Flags& f) {
  const auto t0 = Clock::now();
  const nehari::RunConfig cfg = resolve(sub, f);
  const double mu = sub->count("--mu") ? f.mu_scalar : cfg.params.mu11;
  nehari::ScalarBranch branch;
  if (f.branch == "minus") {
    branch = nehari::ScalarBranch::Minus;
  } else if (f.branch == "plus") {
    branch = nehari::ScalarBranch::Plus;
  } else {
    throw nehari::config_error("scalar: --branch must be minus or plus");
  }
  const nehari::GridPtr g = nehari::make_grid(cfg.r_max, cfg.n);
  const nehari::ScalarSolveResult res = nehari::solve_scalar(
      cfg.params.p, cfg.params.lambda, mu, branch, g, cfg.driver_options().descent);
  if (!res.converged)
    throw nehari::no_convergence("scalar: " + res.stop_reason);
  json j;
  j["command"] = "scalar";
  j["branch"] = nehari::to_string(res.branch);
  j["mu"] = mu;
  j["action"] = res.action;
  j["h_norm"] = res.h_norm;
  j["residual_norm"] = res.residual_norm;
  j["iterations"] = res.iterations;
  const double cap = nehari::norm_cap(cfg.params.p, cfg.params.lambda, mu);
  j["norm_cap"] = cap;
  j["h_norm_below_cap"] = res.h_norm < cap;
  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    nehari::write_radial_csv((std::filesystem::path(cfg.output_dir) / "w.csv").string(), res.w);
    nehari::write_manifest(cfg.output_dir, "scalar", cfg, seconds_since(t0));
    j["output_dir"] = cfg.output_dir;
  }
  emit(j);
  return 0;
}

int run_constants(const CLI::App* sub, const Flags& f) {
  const nehari::RunConfig cfg = resolve(sub, f);
  const double sob = cfg.sobolev();
  const nehari::ConstantsBundle b = nehari::constants_bundle(cfg.params, sob);
  json j;
  j["command"] = "constants";
  j["p"] = cfg.params.p;
  j["lambda"] = cfg.params.lambda;
  j["sobolev"] = b.sobolev;
  j["lambda0"] = b.lambda0;
  j["lambda0_bar"] = number_or_tag(b.lambda0_bar);
  j["a_p"] = b.a_p;
  j["d0_level"] = b.d0_level;
  j["s_min"] = b.s_min;
  j["g_min"] = b.g_min;
  j["d_lambda"] = number_or_tag(b.d_lambda);
  j["nonexist_threshold"] = number_or_tag(b.nonexist_threshold);
  j["norm_cap"] = nehari::norm_cap(cfg.params.p, cfg.params.lambda, cfg.params.mu22);
  emit(j);
  return 0;
}

int run_verify(const CLI::App* sub, const Flags& f, const std::string& state_path) {
  const nehari::RunConfig cfg = resolve(sub, f);
  const nehari::LoadedState loaded = nehari::load_state(state_path);
  const nehari::Params& prm = loaded.params;
  prm.validate();
  const nehari::ZVector z = nehari::z_vector(loaded.state, prm, cfg.theta_nodes);
  const nehari::IdentityReport rep = nehari::identity_residuals(z, prm);
  json j;
  j["command"] = "verify";
  j["state"] = state_path;
  j["params"] = {{"p", prm.p},
                 {"lambda", prm.lambda},
                 {"mu11", prm.mu11},
                 {"mu22", prm.mu22},
                 {"mu12", prm.mu12}};
  j["z"] = {{"z1", z.z1}, {"z2", z.z2}, {"z3", z.z3}, {"z4", z.z4}, {"z5", z.z5}, {"z6", z.z6}};
  j["nehari_residual"] = rep.nehari_residual;
  j["pohozaev_residual"] = rep.pohozaev_residual;
  try {
    const nehari::GroundStateCheck gs =
        nehari::check_ground_state_condition(z, prm, cfg.tolerances.decompose);
    j["decomposition"] = {{"theta", gs.coeffs.theta},
                          {"s", gs.coeffs.s},
                          {"t", gs.coeffs.t},
                          {"w", gs.coeffs.w}};
    j["curvature"] = gs.curvature;
    j["branch_status"] = nehari::to_string(gs.status);
  } catch (const nehari::inconsistent_z&) {
    j["decomposition"] = nullptr;
  }
  emit(j);
  return 0;
}

nehari::SweepSpec parse_sweep_spec(const json& j) {
  nehari::SweepSpec spec;
  if (!j.is_object()) throw nehari::config_error("sweep spec: top level must be a JSON object");
  try {
    if (j.contains("p_values"))
      for (const auto& x : j.at("p_values")) spec.p_values.push_back(x.get<double>());
    if (j.contains("lambda_values"))
      for (const auto& x : j.at("lambda_values")) spec.lambda_values.push_back(x.get<double>());
    if (j.contains("mu_values"))
      for (const auto& x : j.at("mu_values")) {
        if (!x.is_array() || x.size() != 3)
          throw nehari::config_error("sweep spec: each mu entry must be [mu11, mu22, mu12]");
        spec.mu_values.push_back(
            {x[0].get<double>(), x[1].get<double>(), x[2].get<double>()});
      }
    if (j.contains("nonexist_seeds")) spec.nonexist_seeds = j.at("nonexist_seeds").get<int>();
    if (j.contains("rng_seed")) spec.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw nehari::config_error(std::string("sweep spec: ") + e.what());
  }
  return spec;
}

int run_sweep(const CLI::App* sub, const Flags& f, const std::string& grid_file) {
  const auto t0 = Clock::now();
  nehari::RunConfig cfg;
  if (!f.config_path.empty()) cfg = nehari::load_config(f.config_path);
  if (sub->count("--rmax")) cfg.r_max = f.r_max;
  if (sub->count("--n")) cfg.n = f.n;
  if (sub->count("--theta-m")) cfg.theta_nodes = f.theta;
  if (sub->count("--tol")) cfg.tolerances.descent = f.tol;
  if (sub->count("--out")) cfg.output_dir = f.out;
  if (f.threads < 1) throw nehari::config_error("sweep: --threads must be at least 1");

  json spec_json;
  try {
    spec_json = json::parse(nehari::read_text_file(grid_file));
  } catch (const json::exception& e) {
    throw nehari::config_error(std::string("sweep spec: invalid JSON: ") + e.what());
  }
  nehari::SweepSpec spec = parse_sweep_spec(spec_json);
  if (sub->count("--seed")) spec.rng_seed = f.seed;

  const std::string csv = nehari::sweep(spec, cfg.driver_options());
  std::fputs(csv.c_str(), stdout);
  if (!cfg.output_dir.empty()) {
    const std::filesystem::path base(cfg.output_dir);
    std::filesystem::create_directories(base);
    nehari::write_text_file((base / "sweep.csv").string(), csv);
    nehari::write_text_file((base / "sweep_spec.json").string(), spec_json.dump(2) + "\n");
    nehari::write_manifest(cfg.output_dir, "sweep", cfg, seconds_since(t0));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial two-component solver on the natural constraint set"};
  app.set_version_flag("--version", nehari::version_string);
  app.require_subcommand(1);

  Flags f_solve, f_certify, f_nonexist, f_two, f_scalar, f_constants, f_verify, f_sweep;
  std::string state_path, grid_file;

  CLI::App* solve = app.add_subcommand("solve", "positive vector solution on the maximal branch");
  attach_common(solve, f_solve);

  CLI::App* certify =
      app.add_subcommand("certify", "solve, then check the ground-state certificate");
  attach_common(certify, f_certify);

  CLI::App* nonexist =
      app.add_subcommand("nonexist", "randomized decay probe of the nonexistence region");
  attach_common(nonexist, f_nonexist);
  nonexist->add_option("--seeds", f_nonexist.seeds, "number of randomized seeds");

  CLI::App* two =
      app.add_subcommand("two-solutions", "ordered solution pair below the quadratic exponent");
  attach_common(two, f_two);

  CLI::App* scalar = app.add_subcommand("scalar", "single-field solve on a chosen branch");
  attach_common(scalar, f_scalar);
  scalar->add_option("--mu", f_scalar.mu_scalar, "single-field coupling (default: mu11)");
  scalar->add_option("--branch", f_scalar.branch, "minus|plus");

  CLI::App* constants = app.add_subcommand("constants", "closed-form constants for one point");
  attach_common(constants, f_constants);

  CLI::App* verify = app.add_subcommand("verify", "identity residuals of a saved state");
  attach_common(verify, f_verify);
  verify->add_option("state", state_path, "state directory or its sidecar file")->required();

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "CSV report over a parameter grid");
  attach_common(sweep_cmd, f_sweep);
  sweep_cmd->add_option("grid", grid_file, "JSON file with p/lambda/mu value lists")->required();
  sweep_cmd->add_option("--threads", f_sweep.threads,
                        "worker cap (cells currently run serially; output order is fixed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  try {
    if (app.got_subcommand(solve)) return run_solve(solve, f_solve);
    if (app.got_subcommand(certify)) return run_certify(certify, f_certify);
    if (app.got_subcommand(nonexist)) return run_nonexist(nonexist, f_nonexist);
    if (app.got_subcommand(two)) return run_two_solutions(two, f_two);
    if (app.got_subcommand(scalar)) return run_scalar(scalar, f_scalar);
    if (app.got_subcommand(constants)) return run_constants(constants, f_constants);
    if (app.got_subcommand(verify)) return run_verify(verify, f_verify, state_path);
    if (app.got_subcommand(sweep_cmd)) return run_sweep(sweep_cmd, f_sweep, grid_file);
  } catch (const nehari::config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const nehari::error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
