#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>

#include "wigner_forge/wigner_forge.hpp"

namespace wf = wigner_forge;

namespace testing_helpers {

/// State sampled from f(x, p), not normalized.
inline wf::WignerState sampled_state(const wf::PhaseGrid& g,
                                     const std::function<double(double, double)>& f) {
  wf::WignerState s(g);
  for (std::size_t j = 0; j < g.n_x(); ++j)
    for (std::size_t k = 0; k < g.n_p(); ++k) s.w(j, k) = f(g.x(j), g.p(k));
  return s;
}

/// Coherent-state Wigner function (1/(pi hbar)) exp(-((x-x0)^2 + (p-p0)^2)/hbar).
inline wf::WignerState gaussian(const wf::PhaseGrid& g, double x0 = 0.0, double p0 = 0.0) {
  const double hbar = g.hbar();
  return sampled_state(g, [=](double x, double p) {
    return std::exp(-((x - x0) * (x - x0) + (p - p0) * (p - p0)) / hbar) / (std::numbers::pi * hbar);
  });
}

/// Closed-form unit-frequency oscillator Gibbs state, normalized.
inline wf::WignerState ho_gibbs(const wf::PhaseGrid& g, double beta) {
  const double t = std::tanh(0.5 * beta * g.hbar());
  const double hbar = g.hbar();
  return sampled_state(g, [=](double x, double p) {
    return t / (std::numbers::pi * hbar) * std::exp(-(2.0 / hbar) * t * 0.5 * (x * x + p * p));
  });
}

inline wf::WignerState random_state(const wf::PhaseGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  wf::WignerState s(g);
  for (double& v : s.w) v = u(rng);
  return s;
}

inline wf::HamiltonianSpec oscillator() { return wf::make_hamiltonian("x^2/2", "p^2/2"); }
inline wf::HamiltonianSpec mexican_hat() {
  return wf::make_hamiltonian(wf::mexican_hat_potential, wf::standard_kinetic);
}

/// 128 x 128 on [-8, 8)^2: fine enough for oscillator checks, quick to run.
inline wf::PhaseGrid small_grid() { return wf::make_grid(128, 128, -8.0, 8.0, -8.0, 8.0); }

}  // namespace testing_helpers
