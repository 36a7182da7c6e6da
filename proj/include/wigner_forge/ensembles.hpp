#pragma once

// Fermi (s = +1) and Bose (s = -1) ensembles 1/(e^{beta(H - mu)} + s) from
// the alternating series
//
//   sum_{m >= 1} c_m e^{m beta mu} e^{-m beta H},  c_m = 1 (m odd), -s (m even),
//
// whose Gibbs terms are snapshots of a single Bloch trajectory at m beta.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wigner_forge/bloch.hpp"
#include "wigner_forge/error.hpp"
#include "wigner_forge/grid.hpp"
#include "wigner_forge/hamlang.hpp"
#include "wigner_forge/lift.hpp"
#include "wigner_forge/observables.hpp"

namespace wigner_forge {

enum class Statistics { fermi = 1, bose = -1 };

inline const char* statistics_name(Statistics s) {
  return s == Statistics::fermi ? "fermi" : "bose";
}

struct ThermalSpec {
  int s = 1;  // +1 Fermi (called Thomas-Fermi here), -1 Bose
  double beta = 1.0;
  double mu = 0.0;
  double term_tol = 1e-12;
  std::size_t max_terms = 200;

  static ThermalSpec of(Statistics stat, double beta, double mu) {
    ThermalSpec t;
    t.s = static_cast<int>(stat);
    t.beta = beta;
    t.mu = mu;
    return t;
  }

  void validate() const {
    if (s != 1 && s != -1) throw ConfigError("s must be +1 (fermi) or -1 (bose)");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be positive");
    if (!std::isfinite(mu)) throw ConfigError("mu must be finite");
    if (!(term_tol > 0.0)) throw ConfigError("term_tol must be positive");
    if (max_terms == 0) throw ConfigError("max_terms must be positive");
  }
};

struct ThermalResult {
  /// Normalized distribution; exp(log_norm) is the total occupation.
  WignerState state;
  /// Unnormalized trace sum_m c_m e^{m beta mu} Z(m beta).
  double occupation = 0.0;
  std::size_t terms = 0;
  /// True if the last term fell below term_tol (false: max_terms reached).
  bool converged = false;
  /// e^{m beta mu} Z(m beta) relative to the m = 1 term.
  std::vector<double> relative_weights;
};

/// Upper bound on the ground energy from a short symmetric relaxation.
inline double estimate_ground_energy(const Lift& lift, const SampledHamiltonian& sampled,
                                     const PhaseGrid& grid, double dbeta = 0.25,
                                     std::size_t steps = 60) {
  BlochPropagator prop(grid);
  const BlochKernels k = build_bloch_kernels(lift, dbeta, Splitting::strang);
  WignerState s = identity_state(grid);
  prop.advance(s, k, steps);
  return energy(s, sampled);
}

namespace detail {

/// Successive Gibbs snapshots at beta, 2 beta, ... from one trajectory.
class SnapshotStream {
 public:
  SnapshotStream(const Lift& lift, const PhaseGrid& grid, double beta, double dbeta,
                 const GibbsOptions& opt)
      : prop_(grid),
        kernels_(build_bloch_kernels(lift, dbeta, opt.splitting, opt.exponent_floor)),
        state_(identity_state(grid)),
        per_(snapshot_step(beta, dbeta)) {
    if (per_ == 0) throw ConfigError("beta must be at least dbeta");
  }

  const WignerState& next() {
    prop_.advance(state_, kernels_, per_);
    return state_;
  }

 private:
  BlochPropagator prop_;
  BlochKernels kernels_;
  WignerState state_;
  std::size_t per_;
};

class GibbsSeries {
 public:
  GibbsSeries(const Lift& lift, const PhaseGrid& grid, double beta, double dbeta,
              const GibbsOptions& opt)
      : coarse_(lift, grid, beta, dbeta, opt),
        order_(opt.splitting == Splitting::strang ? 2 : 1) {
    if (opt.extrapolate) fine_.emplace(lift, grid, beta, 0.5 * dbeta, opt);
  }

  WignerState next() {
    const WignerState& c = coarse_.next();
    if (!fine_) return c;
    return richardson(c, fine_->next(), order_);
  }

 private:
  SnapshotStream coarse_;
  std::optional<SnapshotStream> fine_;
  int order_;
};

struct Accumulator {
  ThermalSpec spec;
  Array2D<double> sum;
  double log_w1 = 0.0;
  ThermalResult result;
  int rising = 0;
  bool done = false;
};

}  // namespace detail

/// Evaluates several ensembles sharing beta from one Bloch trajectory.
/// The first element of `specs` fixes beta; beta must be a multiple of dbeta.
inline std::vector<ThermalResult> thermal_states(const Lift& lift, const SampledHamiltonian& sampled,
                                                 const PhaseGrid& grid,
                                                 const std::vector<ThermalSpec>& specs,
                                                 double dbeta, const GibbsOptions& opt = {}) {
  if (specs.empty()) return {};
  if (!(dbeta > 0.0) || !std::isfinite(dbeta)) throw ConfigError("dbeta must be positive");
  for (const ThermalSpec& t : specs) {
    t.validate();
    if (t.beta != specs.front().beta) throw ConfigError("thermal_states: specs must share beta");
  }
  const double beta = specs.front().beta;

  std::optional<double> e0;
  for (const ThermalSpec& t : specs) {
    if (t.s != -1) continue;
    if (!e0) e0 = estimate_ground_energy(lift, sampled, grid);
    if (!(t.mu < *e0))
      throw ConfigError("bose statistics need mu below the ground energy (mu = " +
                        detail::format_double(t.mu) + ", E0 estimate = " +
                        detail::format_double(*e0) + ")");
  }

  std::vector<detail::Accumulator> acc;
  for (const ThermalSpec& t : specs)
    acc.push_back({t, Array2D<double>(grid.n_x(), grid.n_p(), 0.0), 0.0,
                   ThermalResult{WignerState(grid), 0.0, 0, false, {}}, 0, false});

  detail::GibbsSeries series(lift, grid, beta, dbeta, opt);
  std::size_t remaining = acc.size();
  for (std::size_t m = 1; remaining > 0; ++m) {
    const WignerState snap = series.next();
    for (auto& a : acc) {
      if (a.done) continue;
      const double log_w = static_cast<double>(m) * beta * a.spec.mu + snap.log_norm;
      if (m == 1) a.log_w1 = log_w;
      const double rel = std::exp(log_w - a.log_w1);
      const double sign = (m % 2 == 1) ? 1.0 : -static_cast<double>(a.spec.s);
      const double c = sign * rel;
      double* dst = a.sum.data();
      const double* src = snap.w.data();
      for (std::size_t i = 0; i < a.sum.size(); ++i) dst[i] += c * src[i];

      auto& weights = a.result.relative_weights;
      if (!weights.empty() && rel >= weights.back())
        ++a.rising;
      else
        a.rising = 0;
      weights.push_back(rel);
      a.result.terms = m;
      if (a.rising >= 3)
        throw NumericalError("series divergent: check mu < E0 for Bose statistics");
      if (m > 1 && rel < a.spec.term_tol) {
        a.result.converged = true;
        a.done = true;
      } else if (m == a.spec.max_terms) {
        a.done = true;
      }
      if (a.done) --remaining;
    }
  }

  std::vector<ThermalResult> out;
  for (auto& a : acc) {
    WignerState st(grid, std::move(a.sum));
    st.beta = beta;
    st.log_norm = a.log_w1;
    normalize(st);
    a.result.occupation = std::exp(st.log_norm);
    a.result.state = std::move(st);
    out.push_back(std::move(a.result));
  }
  return out;
}

inline ThermalResult thermal_state(const HamiltonianSpec& h, const PhaseGrid& grid,
                                   const ThermalSpec& spec, double dbeta,
                                   const GibbsOptions& opt = {}) {
  return thermal_states(make_lift(h, grid), sample_hamiltonian(h, grid), grid, {spec}, dbeta, opt)
      .front();
}

}  // namespace wigner_forge
