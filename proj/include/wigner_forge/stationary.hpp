#pragma once

// Pure stationary states by adaptive imaginary-time relaxation. A trial
// Bloch step is accepted only if it lowers the energy and the result still
// looks like a physical state (purity at most one, Heisenberg bound obeyed);
// otherwise the previous state is restored and dbeta is halved. Excited
// states are obtained by projecting the lower states out after every step.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "wigner_forge/bloch.hpp"
#include "wigner_forge/error.hpp"
#include "wigner_forge/grid.hpp"
#include "wigner_forge/hamlang.hpp"
#include "wigner_forge/lift.hpp"
#include "wigner_forge/observables.hpp"

namespace wigner_forge {

struct SolverConfig {
  double dbeta_init = 1.0;
  /// Initial step for excited states. Large steps amplify the (removed)
  /// lower components strongly enough to swamp the projection.
  double excited_dbeta_init = 0.25;
  double dbeta_min = 1e-8;
  /// Once an accepted step lowers the energy by less than this, the current
  /// dbeta is exhausted and is halved.
  double energy_tol = 1e-12;
  std::size_t max_iters = 100000;
  double purity_slack = 1e-6;
  Splitting splitting = Splitting::strang;
  double exponent_floor = default_exponent_floor;

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
    };
    positive(dbeta_init, "dbeta_init");
    positive(excited_dbeta_init, "excited_dbeta_init");
    positive(dbeta_min, "dbeta_min");
    positive(energy_tol, "energy_tol");
    positive(purity_slack, "purity_slack");
    if (max_iters == 0) throw ConfigError("max_iters must be positive");
    if (!(dbeta_min < dbeta_init)) throw ConfigError("dbeta_min must be below dbeta_init");
    if (!(dbeta_min < excited_dbeta_init))
      throw ConfigError("dbeta_min must be below excited_dbeta_init");
  }
};

struct ValidityReport {
  double purity = 0.0;
  double sigma_x = 0.0;
  double sigma_p = 0.0;
  double uncertainty_product = 0.0;
  bool passed = false;
};

inline ValidityReport check_validity(const WignerState& state, const SolverConfig& cfg) {
  ValidityReport r;
  r.purity = purity(state);
  try {
    const Moments m = moments(state);
    r.sigma_x = m.sigma_x;
    r.sigma_p = m.sigma_p;
  } catch (const NumericalError&) {
    r.sigma_x = r.sigma_p = std::numeric_limits<double>::quiet_NaN();
  }
  r.uncertainty_product = r.sigma_x * r.sigma_p;
  const double bound = 0.5 * state.grid.hbar() * (1.0 - 1e-9);
  r.passed = std::isfinite(r.purity) && r.purity <= 1.0 + cfg.purity_slack &&
             r.uncertainty_product >= bound;
  return r;
}

/// Throws ConfigError unless the states are pairwise orthogonal within 1e-6.
inline void require_orthogonal(const std::vector<WignerState>& lower) {
  for (std::size_t i = 0; i < lower.size(); ++i)
    for (std::size_t j = i + 1; j < lower.size(); ++j) {
      const double c = overlap(lower[i], lower[j]);
      if (std::abs(c) > 1e-6)
        throw ConfigError("lower states " + std::to_string(i) + " and " + std::to_string(j) +
                          " are not orthogonal (overlap " + detail::format_double(c) + ")");
    }
}

/// Subtracts c_i W_i with c_i = 2 pi hbar sum(w w_i) dx dp for every lower
/// state, then renormalizes by the trace.
inline void project_out(WignerState& state, const std::vector<WignerState>& lower) {
  if (lower.empty()) return;
  for (const WignerState& low : lower) {
    const double c = overlap(state, low);
    double* w = state.w.data();
    const double* l = low.w.data();
    for (std::size_t i = 0; i < state.w.size(); ++i) w[i] -= c * l[i];
  }
  const double t = trace_integral(state);
  if (!(t > 1e-12)) throw NumericalError("state fully contained in projected subspace");
  normalize(state);
}

inline WignerState projected_out(WignerState state, const std::vector<WignerState>& lower) {
  require_orthogonal(lower);
  project_out(state, lower);
  return state;
}

struct StationaryResult {
  WignerState state;
  double energy = 0.0;
  /// Energies of the starting state and of every accepted step.
  std::vector<double> energy_trace;
  std::size_t iterations = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double final_dbeta = 0.0;
  ValidityReport validity;
  /// max_i |2 pi hbar integral W W_i| over the lower states.
  double max_lower_overlap = 0.0;
};

namespace detail {

inline StationaryResult relax(const Lift& lift, const SampledHamiltonian& sampled,
                              const PhaseGrid& grid, const SolverConfig& cfg,
                              const std::vector<WignerState>& lower) {
  cfg.validate();
  require_orthogonal(lower);
  for (const WignerState& low : lower)
    if (!(low.grid == grid)) throw ConfigError("lower state lives on a different grid");

  WignerState state = identity_state(grid);
  project_out(state, lower);
  StationaryResult out{state, energy(state, sampled), {}, 0, 0, 0, 0.0, {}, 0.0};
  out.energy_trace.push_back(out.energy);

  double dbeta = lower.empty() ? cfg.dbeta_init : cfg.excited_dbeta_init;
  BlochPropagator prop(grid);
  BlochKernels kernels = build_bloch_kernels(lift, dbeta, cfg.splitting, cfg.exponent_floor);
  auto halve = [&] {
    dbeta *= 0.5;
    if (dbeta >= cfg.dbeta_min)
      kernels = build_bloch_kernels(lift, dbeta, cfg.splitting, cfg.exponent_floor);
  };

  WignerState trial = state;
  while (dbeta >= cfg.dbeta_min) {
    if (out.iterations == cfg.max_iters)
      throw ConvergenceError("stationary solver reached max_iters = " +
                                 std::to_string(cfg.max_iters) + " at dbeta = " +
                                 format_double(dbeta) + ", energy = " + format_double(out.energy),
                             out.energy_trace);
    ++out.iterations;
    trial.w = state.w;
    trial.beta = state.beta;
    trial.log_norm = state.log_norm;
    bool ok = true;
    try {
      prop.step(trial, kernels);
      project_out(trial, lower);
    } catch (const NumericalError&) {
      ok = false;
    }
    double e_new = 0.0;
    if (ok) {
      e_new = energy(trial, sampled);
      ok = e_new < out.energy && check_validity(trial, cfg).passed;
    }
    if (!ok) {
      ++out.rejected;
      halve();
      continue;
    }
    ++out.accepted;
    const double drop = out.energy - e_new;
    std::swap(state, trial);
    out.energy = e_new;
    out.energy_trace.push_back(e_new);
    if (drop < cfg.energy_tol) halve();
  }

  out.final_dbeta = dbeta;
  out.validity = check_validity(state, cfg);
  for (const WignerState& low : lower)
    out.max_lower_overlap = std::max(out.max_lower_overlap, std::abs(overlap(state, low)));
  out.state = std::move(state);
  return out;
}

}  // namespace detail

inline StationaryResult ground_state(const HamiltonianSpec& h, const PhaseGrid& grid,
                                     const SolverConfig& cfg = {}) {
  return detail::relax(make_lift(h, grid), sample_hamiltonian(h, grid), grid, cfg, {});
}

/// Lowest state orthogonal to every state in `lower`, which must hold all
/// states below the target.
inline StationaryResult excited_state(const HamiltonianSpec& h, const PhaseGrid& grid,
                                      const SolverConfig& cfg,
                                      const std::vector<WignerState>& lower) {
  if (lower.empty()) throw ConfigError("excited_state needs at least one lower state");
  return detail::relax(make_lift(h, grid), sample_hamiltonian(h, grid), grid, cfg, lower);
}

/// Ground state followed by `count - 1` excited states, each orthogonal to
/// all states before it.
inline std::vector<StationaryResult> stationary_states(const HamiltonianSpec& h,
                                                       const PhaseGrid& grid,
                                                       const SolverConfig& cfg,
                                                       std::size_t count) {
  const Lift lift = make_lift(h, grid);
  const SampledHamiltonian sampled = sample_hamiltonian(h, grid);
  std::vector<StationaryResult> out;
  std::vector<WignerState> lower;
  for (std::size_t n = 0; n < count; ++n) {
    out.push_back(detail::relax(lift, sampled, grid, cfg, lower));
    lower.push_back(out.back().state);
  }
  return out;
}

}  // namespace wigner_forge
