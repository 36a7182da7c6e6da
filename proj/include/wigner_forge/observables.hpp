#pragma once

// Lattice Riemann-sum diagnostics of Wigner states.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "wigner_forge/grid.hpp"
#include "wigner_forge/hamlang.hpp"
#include "wigner_forge/lift.hpp"

namespace wigner_forge {

/// Sum w (V(x) + K(p)) dx dp.
inline double energy(const WignerState& s, const SampledHamiltonian& h) {
  const PhaseGrid& g = s.grid;
  double sum = 0.0;
  for (std::size_t j = 0; j < g.n_x(); ++j) {
    const auto row = s.w.row(j);
    double acc = 0.0;
    for (std::size_t k = 0; k < g.n_p(); ++k) acc += row[k] * (h.v[j] + h.k[k]);
    sum += acc;
  }
  return sum * g.dx() * g.dp();
}

inline double energy(const WignerState& s, const HamiltonianSpec& h) {
  return energy(s, sample_hamiltonian(h, s.grid));
}

/// 2 pi hbar sum w^2 dx dp.
inline double purity(const WignerState& s) {
  double sum = 0.0;
  for (double v : s.w) sum += v * v;
  return 2.0 * std::numbers::pi * s.grid.hbar() * sum * s.grid.dx() * s.grid.dp();
}

/// 2 pi hbar sum w_a w_b dx dp.
inline double overlap(const WignerState& a, const WignerState& b) {
  if (!(a.grid == b.grid)) throw ConfigError("overlap: states live on different grids");
  double sum = 0.0;
  const double* pa = a.w.data();
  const double* pb = b.w.data();
  for (std::size_t i = 0; i < a.w.size(); ++i) sum += pa[i] * pb[i];
  return 2.0 * std::numbers::pi * a.grid.hbar() * sum * a.grid.dx() * a.grid.dp();
}

struct Marginals {
  std::vector<double> x;  // integral W dp
  std::vector<double> p;  // integral W dx
};

inline Marginals marginals(const WignerState& s) {
  const PhaseGrid& g = s.grid;
  Marginals m{std::vector<double>(g.n_x(), 0.0), std::vector<double>(g.n_p(), 0.0)};
  for (std::size_t j = 0; j < g.n_x(); ++j) {
    const auto row = s.w.row(j);
    double acc = 0.0;
    for (std::size_t k = 0; k < g.n_p(); ++k) {
      acc += row[k];
      m.p[k] += row[k];
    }
    m.x[j] = acc * g.dp();
  }
  for (double& v : m.p) v *= g.dx();
  return m;
}

struct Moments {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double sigma_x = 0.0;
  double sigma_p = 0.0;
};

namespace detail {

inline std::pair<double, double> mean_and_sigma(const std::vector<double>& density, double origin,
                                                double step, const char* axis) {
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double q = origin + static_cast<double>(i) * step;
    m0 += density[i];
    m1 += density[i] * q;
  }
  m0 *= step;
  m1 *= step;
  const double mean = m1 / m0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double d = origin + static_cast<double>(i) * step - mean;
    m2 += density[i] * d * d;
  }
  const double var = m2 * step / m0;
  if (var < -1e-12)
    throw NumericalError(std::string("negative ") + axis + " variance " + format_double(var) +
                         ": not a valid state");
  return {mean, std::sqrt(std::max(var, 0.0))};
}

}  // namespace detail

/// Centroid and standard deviations from the marginals (normalized by the trace).
inline Moments moments(const WignerState& s, const Marginals& m) {
  const PhaseGrid& g = s.grid;
  auto [mx, sx] = detail::mean_and_sigma(m.x, g.x_min(), g.dx(), "x");
  auto [mp, sp] = detail::mean_and_sigma(m.p, g.p_min(), g.dp(), "p");
  return {mx, mp, sx, sp};
}

inline Moments moments(const WignerState& s) { return moments(s, marginals(s)); }

inline double min_value(const WignerState& s) { return *std::min_element(s.w.begin(), s.w.end()); }
inline double max_value(const WignerState& s) { return *std::max_element(s.w.begin(), s.w.end()); }

struct ObservablesReport {
  double trace = 0.0;
  double energy = 0.0;
  double purity = 0.0;
  double z_estimate = 0.0;  // exp(log_norm) * trace
  double mean_x = 0.0;
  double mean_p = 0.0;
  double sigma_x = 0.0;
  double sigma_p = 0.0;
  double w_min = 0.0;
  double w_max = 0.0;
  Marginals marginal;
};

inline ObservablesReport observe(const WignerState& s, const HamiltonianSpec& h) {
  ObservablesReport r;
  r.trace = trace_integral(s);
  r.energy = energy(s, h);
  r.purity = purity(s);
  r.z_estimate = std::exp(s.log_norm) * r.trace;
  r.marginal = marginals(s);
  const Moments mo = moments(s, r.marginal);
  r.mean_x = mo.mean_x;
  r.mean_p = mo.mean_p;
  r.sigma_x = mo.sigma_x;
  r.sigma_p = mo.sigma_p;
  r.w_min = min_value(s);
  r.w_max = max_value(s);
  return r;
}

}  // namespace wigner_forge
