#pragma once

// Real-time Moyal propagation on the same spectral skeleton as the Bloch
// solver, with phase kernels built from the lifted differences
//   V(x - hbar theta/2) - V(x + hbar theta/2),  K(p + hbar lambda/2) - K(p - hbar lambda/2).
// Higher orders are symmetric triple-jump compositions of the Strang step.

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <vector>

#include "wigner_forge/array2d.hpp"
#include "wigner_forge/error.hpp"
#include "wigner_forge/grid.hpp"
#include "wigner_forge/hamlang.hpp"
#include "wigner_forge/lift.hpp"

namespace wigner_forge {

/// Unit-modulus multipliers for one first-order step of length dt.
/// The K kernel is stored transposed, [p][lambda].
struct MoyalKernels {
  double dt = 0.0;
  Array2D<complex> v_kernel;    // [x][theta]
  Array2D<complex> k_kernel_t;  // [p][lambda]

  complex k_kernel(std::size_t m, std::size_t k) const { return k_kernel_t(k, m); }
};

namespace detail {

inline Array2D<complex> phase_kernel(const Array2D<double>& diffs, double scale) {
  Array2D<complex> out(diffs.rows(), diffs.cols());
  const double* d = diffs.data();
  complex* o = out.data();
  for (std::size_t i = 0; i < diffs.size(); ++i) o[i] = std::polar(1.0, -scale * d[i]);
  return out;
}

}  // namespace detail

inline MoyalKernels build_moyal_kernels(const Lift& lift, const PhaseGrid& grid, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  const double scale = dt / grid.hbar();
  return {dt, detail::phase_kernel(lift.v_diff, scale), detail::phase_kernel(lift.k_diff_t, scale)};
}

inline MoyalKernels build_moyal_kernels(const HamiltonianSpec& h, const PhaseGrid& grid,
                                        double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  return build_moyal_kernels(make_lift(h, grid), grid, dt);
}

struct MoyalOptions {
  /// Splitting order: 1 (V then K), 2 (Strang), 4 or 6 (triple-jump).
  int order = 4;
};

inline constexpr double moyal_realness_tol = 1e-9;

namespace detail {

/// Fractions of dt applied to V and K in one composed step, in order.
struct Substep {
  bool is_v;
  double fraction;
};

inline void append_strang(std::vector<Substep>& seq, double w) {
  seq.push_back({true, 0.5 * w});
  seq.push_back({false, w});
  seq.push_back({true, 0.5 * w});
}

inline void append_symmetric(std::vector<Substep>& seq, int order, double w) {
  if (order == 2) {
    append_strang(seq, w);
    return;
  }
  const double c = std::pow(2.0, 1.0 / (order - 1));
  const double w1 = 1.0 / (2.0 - c);
  const double w0 = -c / (2.0 - c);
  append_symmetric(seq, order - 2, w * w1);
  append_symmetric(seq, order - 2, w * w0);
  append_symmetric(seq, order - 2, w * w1);
}

inline std::vector<Substep> composition(int order) {
  std::vector<Substep> raw;
  if (order == 1) {
    raw = {{true, 1.0}, {false, 1.0}};
  } else if (order == 2 || order == 4 || order == 6) {
    append_symmetric(raw, order, 1.0);
  } else {
    throw ConfigError("moyal order must be 1, 2, 4 or 6 (got " + std::to_string(order) + ")");
  }
  // Merge adjacent V substeps.
  std::vector<Substep> seq;
  for (const Substep& s : raw) {
    if (!seq.empty() && seq.back().is_v && s.is_v)
      seq.back().fraction += s.fraction;
    else
      seq.push_back(s);
  }
  return seq;
}

}  // namespace detail

/// Reusable real-time propagator for one Hamiltonian, grid, dt and order.
class MoyalPropagator {
 public:
  MoyalPropagator(const Lift& lift, const PhaseGrid& grid, double dt, MoyalOptions opt = {})
      : grid_(grid), dt_(dt), engine_(grid), sequence_(detail::composition(opt.order)) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    const double scale = dt / grid.hbar();
    for (const auto& s : sequence_) {
      auto& cache = s.is_v ? v_kernels_ : k_kernels_;
      if (cache.count(s.fraction)) continue;
      cache.emplace(s.fraction,
                    detail::phase_kernel(s.is_v ? lift.v_diff : lift.k_diff_t, scale * s.fraction));
    }
  }

  double dt() const noexcept { return dt_; }

  void step(WignerState& state) {
    if (!(state.grid == grid_)) throw ConfigError("moyal: state and propagator grids differ");
    engine_.load(state.w);
    for (const auto& s : sequence_) {
      if (s.is_v)
        engine_.apply_xtheta(v_kernels_.at(s.fraction));
      else
        engine_.apply_lambdap_transposed(k_kernels_.at(s.fraction));
    }
    const double residue = engine_.store_real(state.w);
    if (!(residue < moyal_realness_tol))
      throw NumericalError("aliasing detected: enlarge grid or reduce dt (imaginary residue " +
                           detail::format_double(residue) + ")");
  }

  void advance(WignerState& state, std::size_t steps) {
    for (std::size_t i = 0; i < steps; ++i) step(state);
  }

 private:
  PhaseGrid grid_;
  double dt_;
  SpectralEngine engine_;
  std::vector<detail::Substep> sequence_;
  std::map<double, Array2D<complex>> v_kernels_;
  std::map<double, Array2D<complex>> k_kernels_;
};

/// Propagates for round(t_total / dt) steps. t_total = 0 returns an exact copy.
inline WignerState moyal_propagate(const WignerState& state, const Lift& lift, double t_total,
                                   double dt, MoyalOptions opt = {}) {
  if (!(t_total >= 0.0) || !std::isfinite(t_total)) throw ConfigError("t must be non-negative");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  WignerState out = state;
  const auto steps = static_cast<std::size_t>(std::llround(t_total / dt));
  if (steps == 0) return out;
  MoyalPropagator prop(lift, state.grid, dt, opt);
  prop.advance(out, steps);
  return out;
}

inline WignerState moyal_propagate(const WignerState& state, const HamiltonianSpec& h,
                                   double t_total, double dt, MoyalOptions opt = {}) {
  if (!(t_total >= 0.0) || !std::isfinite(t_total)) throw ConfigError("t must be non-negative");
  if (std::llround(t_total / dt) == 0) return state;
  return moyal_propagate(state, make_lift(h, state.grid), t_total, dt, opt);
}

/// max|W(t) - W(0)| / max|W(0)|.
inline double relative_change(const WignerState& before, const WignerState& after) {
  const double scale = max_abs(before.w);
  return scale > 0.0 ? max_abs_diff(after.w, before.w) / scale : max_abs(after.w);
}

inline double stationarity_residual(const WignerState& state, const HamiltonianSpec& h,
                                    double t_total, double dt, MoyalOptions opt = {}) {
  return relative_change(state, moyal_propagate(state, h, t_total, dt, opt));
}

}  // namespace wigner_forge
