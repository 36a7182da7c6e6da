#pragma once

// Imaginary-time (Bloch) propagation of Wigner functions by spectral
// splitting. One first-order step is
//
//   W <- F^{lambda->x} e^{-(db/2)(K+ + K-)} F^{x->lambda}
//        F_{theta->p} e^{-(db/2)(V+ + V-)} F_{p->theta} W
//
// with V+- = V(x +- hbar theta/2) and K+- = K(p +- hbar lambda/2). The
// symmetric variant applies half a V step on either side of a full K step.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wigner_forge/array2d.hpp"
#include "wigner_forge/error.hpp"
#include "wigner_forge/grid.hpp"
#include "wigner_forge/hamlang.hpp"
#include "wigner_forge/lift.hpp"

namespace wigner_forge {

enum class Splitting {
  first_order,  // V then K
  strang,       // V/2, K, V/2
};

inline constexpr double default_exponent_floor = -700.0;

/// Exponential multipliers for one Bloch step. The K kernel is stored
/// transposed, indexed [p][lambda], to match the transform layout.
struct BlochKernels {
  double dbeta = 0.0;
  Splitting splitting = Splitting::first_order;
  Array2D<double> v_kernel;    // [x][theta], full step
  Array2D<double> k_kernel_t;  // [p][lambda], full step
  Array2D<double> v_half;      // [x][theta], half step (strang only)

  /// k_kernel at (lambda index m, p index k).
  double k_kernel(std::size_t m, std::size_t k) const { return k_kernel_t(k, m); }
};

namespace detail {

inline Array2D<double> exp_kernel(const Array2D<double>& sums, double scale, double floor) {
  Array2D<double> out(sums.rows(), sums.cols());
  const double* s = sums.data();
  double* o = out.data();
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const double arg = -scale * s[i];
    o[i] = arg < floor ? 0.0 : std::exp(arg);
  }
  return out;
}

}  // namespace detail

inline BlochKernels build_bloch_kernels(const Lift& lift, double dbeta,
                                        Splitting splitting = Splitting::first_order,
                                        double exponent_floor = default_exponent_floor) {
  if (!(dbeta > 0.0) || !std::isfinite(dbeta)) throw ConfigError("dbeta must be positive");
  BlochKernels k;
  k.dbeta = dbeta;
  k.splitting = splitting;
  k.k_kernel_t = detail::exp_kernel(lift.k_sum_t, 0.5 * dbeta, exponent_floor);
  if (splitting == Splitting::strang)
    k.v_half = detail::exp_kernel(lift.v_sum, 0.25 * dbeta, exponent_floor);
  else
    k.v_kernel = detail::exp_kernel(lift.v_sum, 0.5 * dbeta, exponent_floor);
  return k;
}

inline BlochKernels build_bloch_kernels(const HamiltonianSpec& h, const PhaseGrid& grid,
                                        double dbeta,
                                        Splitting splitting = Splitting::first_order,
                                        double exponent_floor = default_exponent_floor) {
  if (!(dbeta > 0.0) || !std::isfinite(dbeta)) throw ConfigError("dbeta must be positive");
  return build_bloch_kernels(make_lift(h, grid), dbeta, splitting, exponent_floor);
}

/// Largest imaginary residue tolerated before it is discarded.
inline constexpr double bloch_realness_tol = 1e-12;

/// Reusable workspace that applies Bloch steps on one grid.
class BlochPropagator {
 public:
  explicit BlochPropagator(const PhaseGrid& grid) : grid_(grid), engine_(grid) {}

  const PhaseGrid& grid() const noexcept { return grid_; }

  /// Advances `state` by kernels.dbeta and renormalizes it.
  void step(WignerState& state, const BlochKernels& kernels) {
    if (!(state.grid == grid_)) throw ConfigError("bloch_step: state and propagator grids differ");
    engine_.load(state.w);
    if (kernels.splitting == Splitting::strang) {
      engine_.apply_xtheta(kernels.v_half);
      engine_.apply_lambdap_transposed(kernels.k_kernel_t);
      engine_.apply_xtheta(kernels.v_half);
    } else {
      engine_.apply_xtheta(kernels.v_kernel);
      engine_.apply_lambdap_transposed(kernels.k_kernel_t);
    }
    const double residue = engine_.store_real(state.w);
    if (!std::isfinite(residue))
      throw NumericalError("state annihilated: grid too small or dbeta too large (non-finite values)");
    if (residue > bloch_realness_tol)
      throw NumericalError("imaginary residue " + detail::format_double(residue) +
                           " exceeds tolerance after Bloch step");
    normalize(state);
    state.beta += kernels.dbeta;
  }

  void advance(WignerState& state, const BlochKernels& kernels, std::size_t steps) {
    for (std::size_t i = 0; i < steps; ++i) step(state, kernels);
  }

 private:
  PhaseGrid grid_;
  SpectralEngine engine_;
};

/// One step with a throwaway workspace.
inline void bloch_step(WignerState& state, const BlochKernels& kernels) {
  BlochPropagator(state.grid).step(state, kernels);
}

struct GibbsOptions {
  Splitting splitting = Splitting::first_order;
  /// Combine runs at dbeta and dbeta/2 to cancel the leading Trotter error.
  bool extrapolate = false;
  double exponent_floor = default_exponent_floor;
};

struct GibbsResult {
  WignerState state;
  /// Normalized states at the requested snapshot betas, in request order.
  std::vector<WignerState> snapshots;
};

namespace detail {

/// Splits beta into whole steps of dbeta plus an optional partial remainder.
inline std::pair<std::size_t, double> step_plan(double beta, double dbeta) {
  const double ratio = beta / dbeta;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest))
    return {static_cast<std::size_t>(nearest), 0.0};
  const double whole = std::floor(ratio);
  return {static_cast<std::size_t>(whole), beta - whole * dbeta};
}

inline std::size_t snapshot_step(double beta, double dbeta) {
  const double ratio = beta / dbeta;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) > 1e-9 * std::max(1.0, nearest))
    throw ConfigError("snapshot beta " + format_double(beta) + " is not a multiple of dbeta " +
                      format_double(dbeta));
  return static_cast<std::size_t>(nearest);
}

inline GibbsResult gibbs_trajectory(const Lift& lift, const PhaseGrid& grid, double beta,
                                    double dbeta, const GibbsOptions& opt,
                                    const std::vector<double>& snapshots) {
  std::vector<std::size_t> snap_steps;
  for (double b : snapshots) {
    if (!(b >= 0.0) || b > beta * (1.0 + 1e-12))
      throw ConfigError("snapshot beta " + format_double(b) + " outside [0, beta]");
    snap_steps.push_back(snapshot_step(b, dbeta));
  }
  const auto [whole, remainder] = step_plan(beta, dbeta);

  WignerState state = identity_state(grid);
  GibbsResult out{state, std::vector<WignerState>(snapshots.size(), state)};
  auto capture = [&](std::size_t done) {
    for (std::size_t i = 0; i < snap_steps.size(); ++i)
      if (snap_steps[i] == done) out.snapshots[i] = state;
  };
  capture(0);
  if (whole > 0 || remainder > 0.0) {
    BlochPropagator prop(grid);
    if (whole > 0) {
      const BlochKernels kernels = build_bloch_kernels(lift, dbeta, opt.splitting, opt.exponent_floor);
      for (std::size_t n = 1; n <= whole; ++n) {
        prop.step(state, kernels);
        capture(n);
      }
    }
    if (remainder > 0.0) {
      prop.step(state, build_bloch_kernels(lift, remainder, opt.splitting, opt.exponent_floor));
      state.beta = beta;
    }
  }
  out.state = std::move(state);
  return out;
}

/// (2^order W_fine - r W_coarse) / (2^order - r) with r = Z_coarse / Z_fine.
inline WignerState richardson(const WignerState& coarse, const WignerState& fine, int order) {
  const double f = std::ldexp(1.0, order);
  const double r = std::exp(coarse.log_norm - fine.log_norm);
  WignerState out = fine;
  const double a = f / (f - r), b = r / (f - r);
  const double* pc = coarse.w.data();
  const double* pf = fine.w.data();
  double* po = out.w.data();
  for (std::size_t i = 0; i < out.w.size(); ++i) po[i] = a * pf[i] - b * pc[i];
  out.log_norm = fine.log_norm + std::log((f - r) / (f - 1.0));
  // Numerically the combination is trace one already; fold any residue in.
  normalize(out);
  return out;
}

}  // namespace detail

/// Gibbs state e^{-beta H} from W(0) = 1/(2 pi hbar), normalized with
/// exp(log_norm) estimating Z. Snapshot betas must be multiples of dbeta.
inline GibbsResult gibbs(const Lift& lift, const PhaseGrid& grid, double beta, double dbeta,
                         const GibbsOptions& opt = {}, const std::vector<double>& snapshots = {}) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be non-negative");
  if (!(dbeta > 0.0) || !std::isfinite(dbeta)) throw ConfigError("dbeta must be positive");
  GibbsResult coarse = detail::gibbs_trajectory(lift, grid, beta, dbeta, opt, snapshots);
  if (!opt.extrapolate || beta == 0.0) return coarse;

  const GibbsResult fine = detail::gibbs_trajectory(lift, grid, beta, 0.5 * dbeta, opt, snapshots);
  const int order = opt.splitting == Splitting::strang ? 2 : 1;
  GibbsResult out{detail::richardson(coarse.state, fine.state, order), {}};
  for (std::size_t i = 0; i < snapshots.size(); ++i)
    out.snapshots.push_back(snapshots[i] == 0.0
                                ? fine.snapshots[i]
                                : detail::richardson(coarse.snapshots[i], fine.snapshots[i], order));
  return out;
}

inline GibbsResult gibbs(const HamiltonianSpec& h, const PhaseGrid& grid, double beta,
                         double dbeta, const GibbsOptions& opt = {},
                         const std::vector<double>& snapshots = {}) {
  return gibbs(make_lift(h, grid), grid, beta, dbeta, opt, snapshots);
}

}  // namespace wigner_forge
