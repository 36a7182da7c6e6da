#pragma once

// Command-line front end. Subcommands:
//   gibbs       Gibbs state at beta
//   stationary  ground and excited states
//   thermal     Fermi (Thomas-Fermi) and Bose ensembles, plus the Gibbs state
//   verify      Moyal stationarity check of a saved state
//   oracle      dense-diagonalization reference spectrum and mixtures
//
// Every run writes manifest.json (the fully resolved configuration, usable as
// --config for an identical re-run) and summary.json into the output directory.
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wigner_forge/bloch.hpp"
#include "wigner_forge/ensembles.hpp"
#include "wigner_forge/error.hpp"
#include "wigner_forge/grid.hpp"
#include "wigner_forge/hamlang.hpp"
#include "wigner_forge/moyal.hpp"
#include "wigner_forge/observables.hpp"
#include "wigner_forge/oracle.hpp"
#include "wigner_forge/state_io.hpp"
#include "wigner_forge/stationary.hpp"

namespace wigner_forge {

struct RunConfig {
  std::string subcommand;

  std::size_t n_x = 512;
  std::size_t n_p = 512;
  double x_min = -10.0;
  double x_max = 10.0;
  double p_min = -10.0;
  double p_max = 10.0;
  double hbar = 1.0;
  std::string V = std::string(mexican_hat_potential);
  std::string K = std::string(standard_kinetic);
  std::string out = "out";
  bool heatmap = false;

  // gibbs, thermal
  double beta = 1.0;
  double dbeta = 1e-3;
  std::string splitting = "strang";
  bool extrapolate = true;

  // thermal
  double thermal_dbeta = 0.05;
  double mu = 0.0;
  std::string statistics = "both";
  double term_tol = 1e-12;
  std::size_t max_terms = 200;

  // stationary, oracle
  std::size_t states = 2;
  SolverConfig solver;

  // verify
  std::string state;
  double t = 1.0;
  double dt = 0.01;
  int order = 4;

  // oracle
  std::size_t oracle_states = 64;
  std::string mixture = "none";
  std::string compare;
};

namespace detail {

inline Splitting parse_splitting(const std::string& s) {
  if (s == "first") return Splitting::first_order;
  if (s == "strang") return Splitting::strang;
  throw ConfigError("splitting must be 'first' or 'strang' (got '" + s + "')");
}

inline std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

inline void add_grid_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--n-x", c.n_x, "Number of x lattice points")->capture_default_str();
  sub->add_option("--n-p", c.n_p, "Number of p lattice points")->capture_default_str();
  sub->add_option("--x-min", c.x_min, "Lower x bound (a.u.)")->capture_default_str();
  sub->add_option("--x-max", c.x_max, "Upper x bound, excluded (a.u.)")->capture_default_str();
  sub->add_option("--p-min", c.p_min, "Lower p bound (a.u.)")->capture_default_str();
  sub->add_option("--p-max", c.p_max, "Upper p bound, excluded (a.u.)")->capture_default_str();
  sub->add_option("--hbar", c.hbar, "Reduced Planck constant (a.u.)")->capture_default_str();
}

inline void add_hamiltonian_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--V", c.V, "Potential V(x)")->capture_default_str();
  sub->add_option("--K", c.K, "Kinetic energy K(p)")->capture_default_str();
}

inline void add_output_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--heatmap", c.heatmap, "Also write heatmap CSVs (true/false)")
      ->capture_default_str();
  sub->add_option("--config", "JSON config or manifest; command-line flags win");
}

inline void add_bloch_options(CLI::App* sub, RunConfig& c, double& dbeta) {
  sub->add_option("--dbeta", dbeta, "Bloch step (a.u.)")->capture_default_str();
  sub->add_option("--splitting", c.splitting, "first | strang")->capture_default_str();
  sub->add_option("--extrapolate", c.extrapolate,
                  "Richardson-combine runs at dbeta and dbeta/2 (true/false)")
      ->capture_default_str();
}

inline void build_app(CLI::App& app, RunConfig& c) {
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  CLI::App* gibbs = app.add_subcommand("gibbs", "Gibbs canonical state at beta");
  add_grid_options(gibbs, c);
  add_hamiltonian_options(gibbs, c);
  gibbs->add_option("--beta", c.beta, "Inverse temperature (a.u.)")->capture_default_str();
  add_bloch_options(gibbs, c, c.dbeta);
  add_output_options(gibbs, c);

  CLI::App* stat = app.add_subcommand("stationary", "Ground and excited pure states");
  add_grid_options(stat, c);
  add_hamiltonian_options(stat, c);
  stat->add_option("--states", c.states, "Number of states (1 = ground only)")
      ->capture_default_str();
  stat->add_option("--dbeta-init", c.solver.dbeta_init, "Initial ground-state step")
      ->capture_default_str();
  stat->add_option("--excited-dbeta-init", c.solver.excited_dbeta_init,
                   "Initial excited-state step")
      ->capture_default_str();
  stat->add_option("--dbeta-min", c.solver.dbeta_min, "Smallest step")->capture_default_str();
  stat->add_option("--energy-tol", c.solver.energy_tol, "Energy decrease that exhausts a step")
      ->capture_default_str();
  stat->add_option("--max-iters", c.solver.max_iters, "Iteration limit per state")
      ->capture_default_str();
  stat->add_option("--purity-slack", c.solver.purity_slack, "Allowed purity excess")
      ->capture_default_str();
  stat->add_option("--splitting", c.splitting, "first | strang")->capture_default_str();
  add_output_options(stat, c);

  CLI::App* thermal = app.add_subcommand("thermal", "Fermi and Bose ensembles");
  add_grid_options(thermal, c);
  add_hamiltonian_options(thermal, c);
  thermal->add_option("--beta", c.beta, "Inverse temperature (a.u.)")->capture_default_str();
  thermal->add_option("--mu", c.mu, "Chemical potential (a.u.)")->capture_default_str();
  thermal->add_option("--statistics", c.statistics, "fermi | bose | both")->capture_default_str();
  thermal->add_option("--term-tol", c.term_tol, "Series truncation tolerance")
      ->capture_default_str();
  thermal->add_option("--max-terms", c.max_terms, "Series term limit")->capture_default_str();
  add_bloch_options(thermal, c, c.thermal_dbeta);
  add_output_options(thermal, c);

  CLI::App* verify = app.add_subcommand("verify", "Moyal stationarity check of a saved state");
  verify->add_option("--state", c.state, "State file (.wst), required");
  verify->add_option("--V", c.V, "Potential V(x) (default: from the state file)");
  verify->add_option("--K", c.K, "Kinetic energy K(p) (default: from the state file)");
  verify->add_option("--t", c.t, "Propagation time (a.u.)")->capture_default_str();
  verify->add_option("--dt", c.dt, "Time step (a.u.)")->capture_default_str();
  verify->add_option("--order", c.order, "Splitting order: 1, 2, 4 or 6")->capture_default_str();
  add_output_options(verify, c);

  CLI::App* oracle = app.add_subcommand("oracle", "Dense-diagonalization reference");
  add_grid_options(oracle, c);
  add_hamiltonian_options(oracle, c);
  oracle->add_option("--states", c.oracle_states, "Number of eigenpairs")->capture_default_str();
  oracle->add_option("--mixture", c.mixture, "none | state0 | gibbs | fermi | bose")
      ->capture_default_str();
  oracle->add_option("--beta", c.beta, "Inverse temperature for mixtures")->capture_default_str();
  oracle->add_option("--mu", c.mu, "Chemical potential for fermi/bose")->capture_default_str();
  oracle->add_option("--compare", c.compare, "State file to compare with the mixture");
  add_output_options(oracle, c);
}

inline nlohmann::ordered_json grid_config(const RunConfig& c) {
  return {{"n-x", c.n_x},     {"n-p", c.n_p},     {"x-min", c.x_min}, {"x-max", c.x_max},
          {"p-min", c.p_min}, {"p-max", c.p_max}, {"hbar", c.hbar}};
}

/// Resolved configuration keyed by long flag names.
inline nlohmann::ordered_json resolved_config(const RunConfig& c) {
  nlohmann::ordered_json j;
  auto merge = [&j](const nlohmann::ordered_json& part) {
    for (auto it = part.begin(); it != part.end(); ++it) j[it.key()] = it.value();
  };
  const std::string& s = c.subcommand;
  if (s != "verify") {
    merge(grid_config(c));
  }
  j["V"] = c.V;
  j["K"] = c.K;
  if (s == "gibbs" || s == "thermal") {
    j["beta"] = c.beta;
    j["dbeta"] = s == "thermal" ? c.thermal_dbeta : c.dbeta;
    j["splitting"] = c.splitting;
    j["extrapolate"] = c.extrapolate;
  }
  if (s == "thermal") {
    j["mu"] = c.mu;
    j["statistics"] = c.statistics;
    j["term-tol"] = c.term_tol;
    j["max-terms"] = c.max_terms;
  }
  if (s == "stationary") {
    j["states"] = c.states;
    j["dbeta-init"] = c.solver.dbeta_init;
    j["excited-dbeta-init"] = c.solver.excited_dbeta_init;
    j["dbeta-min"] = c.solver.dbeta_min;
    j["energy-tol"] = c.solver.energy_tol;
    j["max-iters"] = c.solver.max_iters;
    j["purity-slack"] = c.solver.purity_slack;
    j["splitting"] = c.splitting;
  }
  if (s == "verify") {
    j["state"] = c.state;
    j["t"] = c.t;
    j["dt"] = c.dt;
    j["order"] = c.order;
  }
  if (s == "oracle") {
    j["states"] = c.oracle_states;
    j["mixture"] = c.mixture;
    j["beta"] = c.beta;
    j["mu"] = c.mu;
    if (!c.compare.empty()) j["compare"] = c.compare;
  }
  j["out"] = c.out;
  j["heatmap"] = c.heatmap;
  return j;
}

inline std::string json_to_arg(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return format_double(v.get<double>());
  throw ConfigError("config values must be strings, numbers or booleans");
}

/// Extra arguments for config keys whose flags were not given explicitly.
inline std::vector<std::string> config_arguments(const CLI::App& sub,
                                                 const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  if (j.contains("config") && j["config"].is_object()) {
    if (j.contains("subcommand") && j["subcommand"].is_string() &&
        j["subcommand"].get<std::string>() != sub.get_name())
      throw ConfigError("config " + path.string() + " is a manifest for '" +
                        j["subcommand"].get<std::string>() + "', not '" + sub.get_name() + "'");
    j = j["config"];
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  std::vector<std::string> args;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string flag = "--" + it.key();
    const CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option(flag);
    } catch (const CLI::OptionNotFound&) {
      throw ConfigError("unknown config key '" + it.key() + "' for " + sub.get_name());
    }
    if (it.key() == "config") throw ConfigError("config files cannot nest --config");
    if (opt->count() > 0) continue;
    args.push_back(flag);
    args.push_back(json_to_arg(it.value()));
  }
  return args;
}

inline PhaseGrid grid_of(const RunConfig& c) {
  return make_grid(c.n_x, c.n_p, c.x_min, c.x_max, c.p_min, c.p_max, c.hbar);
}

inline nlohmann::ordered_json report_json(const WignerState& s, const HamiltonianSpec& h) {
  const ObservablesReport r = observe(s, h);
  return {{"beta", s.beta},         {"log_norm", s.log_norm},   {"trace", r.trace},
          {"z_estimate", r.z_estimate}, {"energy", r.energy},   {"purity", r.purity},
          {"mean_x", r.mean_x},     {"mean_p", r.mean_p},       {"sigma_x", r.sigma_x},
          {"sigma_p", r.sigma_p},   {"uncertainty_product", r.sigma_x * r.sigma_p},
          {"w_min", r.w_min},       {"w_max", r.w_max}};
}

class Outputs {
 public:
  Outputs(const RunConfig& c) : dir_(c.out), heatmap_(c.heatmap) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  std::filesystem::path path(const std::string& name) const { return dir_ / name; }

  /// <stem>.wst, <stem>_marginal_x.csv, <stem>_marginal_p.csv and optionally <stem>_heatmap.csv.
  void state(const std::string& stem, const WignerState& s, const HamiltonianSpec& h) const {
    save_state(s, path(stem + ".wst"), &h);
    write_marginals_csv(s, marginals(s), path(stem + "_marginal_x.csv"),
                        path(stem + "_marginal_p.csv"));
    if (heatmap_) write_heatmap_csv(s, path(stem + "_heatmap.csv"));
  }

  void json(const std::string& name, const nlohmann::ordered_json& j) const {
    std::ofstream out(path(name), std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path(name).string());
    out << j.dump(2) << '\n';
  }

 private:
  std::filesystem::path dir_;
  bool heatmap_;
};

inline GibbsOptions gibbs_options(const RunConfig& c) {
  GibbsOptions o;
  o.splitting = parse_splitting(c.splitting);
  o.extrapolate = c.extrapolate;
  return o;
}

inline nlohmann::ordered_json run_gibbs(const RunConfig& c, const Outputs& out, std::ostream& log) {
  const PhaseGrid grid = grid_of(c);
  const HamiltonianSpec h = make_hamiltonian(c.V, c.K);
  const GibbsResult g = gibbs(h, grid, c.beta, c.dbeta, gibbs_options(c));
  out.state("gibbs", g.state, h);
  nlohmann::ordered_json s = report_json(g.state, h);
  const double peak = max_abs(g.state.w);
  s["positive"] = min_value(g.state) >= -1e-12 * peak;
  log << "gibbs beta " << format_double(c.beta) << " Z " << format_double(std::exp(g.state.log_norm))
      << " energy " << format_double(s["energy"].get<double>()) << '\n';
  return {{"gibbs", s}};
}

inline nlohmann::ordered_json run_stationary(RunConfig c, const Outputs& out, std::ostream& log) {
  const PhaseGrid grid = grid_of(c);
  const HamiltonianSpec h = make_hamiltonian(c.V, c.K);
  if (c.states == 0) throw ConfigError("states must be at least 1");
  c.solver.splitting = parse_splitting(c.splitting);
  const std::vector<StationaryResult> res = stationary_states(h, grid, c.solver, c.states);
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < res.size(); ++n) {
    const std::string stem = n == 0 ? "ground" : "excited_" + std::to_string(n);
    out.state(stem, res[n].state, h);
    nlohmann::ordered_json s = report_json(res[n].state, h);
    s["name"] = stem;
    s["solver_energy"] = res[n].energy;
    s["iterations"] = res[n].iterations;
    s["accepted"] = res[n].accepted;
    s["rejected"] = res[n].rejected;
    s["valid"] = res[n].validity.passed;
    s["max_lower_overlap"] = res[n].max_lower_overlap;
    s["w_origin"] = res[n].state.w(grid.n_x() / 2, grid.n_p() / 2);
    list.push_back(s);
    log << stem << " energy " << format_double(res[n].energy) << " purity "
        << format_double(res[n].validity.purity) << '\n';
  }
  return {{"states", list}};
}

inline nlohmann::ordered_json run_thermal(const RunConfig& c, const Outputs& out,
                                          std::ostream& log) {
  const PhaseGrid grid = grid_of(c);
  const HamiltonianSpec h = make_hamiltonian(c.V, c.K);
  std::vector<ThermalSpec> specs;
  auto spec = [&](Statistics st) {
    ThermalSpec t = ThermalSpec::of(st, c.beta, c.mu);
    t.term_tol = c.term_tol;
    t.max_terms = c.max_terms;
    return t;
  };
  if (c.statistics == "fermi" || c.statistics == "both") specs.push_back(spec(Statistics::fermi));
  if (c.statistics == "bose" || c.statistics == "both") specs.push_back(spec(Statistics::bose));
  if (specs.empty()) throw ConfigError("statistics must be fermi, bose or both");

  const Lift lift = make_lift(h, grid);
  const SampledHamiltonian sampled = sample_hamiltonian(h, grid);
  const GibbsOptions opt = gibbs_options(c);
  const std::vector<ThermalResult> res = thermal_states(lift, sampled, grid, specs, c.thermal_dbeta, opt);
  const GibbsResult g = gibbs(lift, grid, c.beta, c.thermal_dbeta, opt);

  nlohmann::ordered_json summary;
  out.state("gibbs", g.state, h);
  summary["gibbs"] = report_json(g.state, h);
  log << "gibbs w_max " << format_double(max_value(g.state)) << '\n';
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::string name = specs[i].s == 1 ? "fermi" : "bose";
    out.state(name, res[i].state, h);
    nlohmann::ordered_json s = report_json(res[i].state, h);
    s["occupation"] = res[i].occupation;
    s["terms"] = res[i].terms;
    s["converged"] = res[i].converged;
    summary[name] = s;
    log << name << " w_max " << format_double(max_value(res[i].state)) << " occupation "
        << format_double(res[i].occupation) << " terms " << res[i].terms << '\n';
  }
  return summary;
}

inline nlohmann::ordered_json run_verify(RunConfig& c, const CLI::App& sub, const Outputs& out,
                                         std::ostream& log) {
  if (c.state.empty()) throw ConfigError("verify needs --state");
  const StateFile f = load_state_file(c.state);
  if (sub.get_option("--V")->count() == 0) c.V = f.v_source.value_or(c.V);
  if (sub.get_option("--K")->count() == 0) c.K = f.k_source.value_or(c.K);
  const HamiltonianSpec h = make_hamiltonian(c.V, c.K);
  const WignerState& before = f.state;
  const WignerState after = moyal_propagate(before, h, c.t, c.dt, MoyalOptions{c.order});
  const double residual = relative_change(before, after);

  save_state(after, out.path("verified.wst"), &h);
  write_marginals_csv(before, marginals(before), out.path("before_marginal_x.csv"),
                      out.path("before_marginal_p.csv"));
  write_marginals_csv(after, marginals(after), out.path("after_marginal_x.csv"),
                      out.path("after_marginal_p.csv"));
  if (c.heatmap) {
    write_heatmap_csv(before, out.path("before_heatmap.csv"));
    write_heatmap_csv(after, out.path("after_heatmap.csv"));
  }
  const nlohmann::ordered_json rb = report_json(before, h), ra = report_json(after, h);
  log << "residual " << format_double(residual) << '\n';
  return {{"residual", residual},
          {"trace_change", ra["trace"].get<double>() - rb["trace"].get<double>()},
          {"purity_change", ra["purity"].get<double>() - rb["purity"].get<double>()},
          {"energy_change", ra["energy"].get<double>() - rb["energy"].get<double>()},
          {"before", rb},
          {"after", ra}};
}

inline nlohmann::ordered_json run_oracle(const RunConfig& c, const Outputs& out,
                                         std::ostream& log) {
  const PhaseGrid grid = grid_of(c);
  const HamiltonianSpec h = make_hamiltonian(c.V, c.K);
  const OracleSpectrum spec = diagonalize(h, grid, c.oracle_states);
  {
    std::ofstream csv(out.path("eigenvalues.csv"), std::ios::trunc);
    if (!csv) throw ConfigError("cannot write " + out.path("eigenvalues.csv").string());
    csv << "n,energy\n";
    for (std::size_t n = 0; n < spec.energies.size(); ++n)
      csv << n << ',' << csv_number(spec.energies[n]) << '\n';
  }
  for (std::size_t n = 0; n < std::min<std::size_t>(spec.energies.size(), 5); ++n)
    log << "E" << n << ' ' << format_double(spec.energies[n]) << '\n';
  nlohmann::ordered_json summary;
  summary["energies"] = spec.energies;

  std::vector<double> weights;
  if (c.mixture == "state0")
    weights = {1.0};
  else if (c.mixture == "gibbs")
    weights = boltzmann_weights(spec.energies, c.beta);
  else if (c.mixture == "fermi")
    weights = occupancy_weights(spec.energies, c.beta, c.mu, 1);
  else if (c.mixture == "bose") {
    if (!(c.mu < spec.energies.front()))
      throw ConfigError("bose mixture needs mu below the ground energy");
    weights = occupancy_weights(spec.energies, c.beta, c.mu, -1);
  } else if (c.mixture != "none")
    throw ConfigError("mixture must be none, state0, gibbs, fermi or bose");

  if (!weights.empty()) {
    WignerState mix = wigner_of_mixture(spec, weights);
    mix.beta = c.mixture == "state0" ? 0.0 : c.beta;
    normalize(mix);
    out.state("oracle_mixture", mix, h);
    summary["mixture"] = report_json(mix, h);
    if (!c.compare.empty()) {
      const WignerState other = load_state(c.compare, grid);
      const double linf = max_abs_diff(other.w, mix.w);
      summary["compare_linf"] = linf;
      log << "compare linf " << format_double(linf) << '\n';
    }
  } else if (!c.compare.empty()) {
    throw ConfigError("--compare needs a --mixture");
  }
  return summary;
}

}  // namespace detail

/// Parses argv and runs one subcommand. Errors are reported on `err` as a
/// single line prefixed "error[config]:" or "error[numerical]:".
inline int run(int argc, const char* const* argv, std::ostream& log = std::cout,
               std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);

  RunConfig cfg;
  auto make_app = [&cfg] {
    auto app = std::make_unique<CLI::App>("Wigner phase-space thermal and stationary states",
                                          "wigner-forge");
    cfg = RunConfig{};
    detail::build_app(*app, cfg);
    return app;
  };
  auto parse = [](CLI::App& app, const std::vector<std::string>& a) {
    std::vector<std::string> rev(a.rbegin(), a.rend());
    app.parse(rev);
  };
  std::unique_ptr<CLI::App> app;
  try {
    app = make_app();
    parse(*app, args);
    CLI::App* sub = app->get_subcommands().front();
    const CLI::Option* config_opt = sub->get_option("--config");
    if (config_opt->count() > 0) {
      std::vector<std::string> full = args;
      const std::vector<std::string> extra =
          detail::config_arguments(*sub, config_opt->as<std::string>());
      full.insert(full.end(), extra.begin(), extra.end());
      app = make_app();
      parse(*app, full);
      sub = app->get_subcommands().front();
    }

    cfg.subcommand = sub->get_name();
    const detail::Outputs out(cfg);
    nlohmann::ordered_json summary;
    if (cfg.subcommand == "gibbs")
      summary = detail::run_gibbs(cfg, out, log);
    else if (cfg.subcommand == "stationary")
      summary = detail::run_stationary(cfg, out, log);
    else if (cfg.subcommand == "thermal")
      summary = detail::run_thermal(cfg, out, log);
    else if (cfg.subcommand == "verify")
      summary = detail::run_verify(cfg, *sub, out, log);
    else
      summary = detail::run_oracle(cfg, out, log);
    out.json("summary.json", summary);
    out.json("manifest.json", {{"tool", "wigner-forge"},
                               {"subcommand", cfg.subcommand},
                               {"config", detail::resolved_config(cfg)}});
    return 0;
  } catch (const CLI::CallForHelp&) {
    const auto subs = app->get_subcommands();
    log << (subs.empty() ? app->help() : subs.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    log << app->help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error[config]: " << detail::one_line(e.what()) << '\n';
    return 1;
  } catch (const ConfigError& e) {
    err << "error[config]: " << detail::one_line(e.what()) << '\n';
    return 1;
  } catch (const FormatError& e) {
    err << "error[config]: " << detail::one_line(e.what()) << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "error[numerical]: " << detail::one_line(e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error[internal]: " << detail::one_line(e.what()) << '\n';
    return 2;
  }
}

}  // namespace wigner_forge
