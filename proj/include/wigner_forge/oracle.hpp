#pragma once

// Independent reference: dense diagonalization of H on a coordinate grid of
// spacing dx/2, and the direct Wigner transform
//
//   W(x, p) = (1/(pi hbar)) integral rho(x - y, x + y) e^{2 i p y / hbar} dy
//
// of eigenstate mixtures. The doubled resolution puts every half-step point
// x +- y on a node, so no interpolation is needed.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "wigner_forge/error.hpp"
#include "wigner_forge/grid.hpp"
#include "wigner_forge/hamlang.hpp"

namespace wigner_forge {

struct OracleSpectrum {
  PhaseGrid grid;
  /// Ascending eigenvalues, lowest n_states.
  std::vector<double> energies;
  /// Column n holds psi_n at the 2 n_x points x_min + l dx/2, normalized so
  /// that sum |psi|^2 dx/2 = 1. Phases fixed so the largest entry is real positive.
  Eigen::MatrixXcd psi;
  /// True if K is even, so the Hamiltonian matrix is real symmetric.
  bool real = true;

  double spacing() const { return 0.5 * grid.dx(); }
  std::size_t points() const { return 2 * grid.n_x(); }
  double x(std::size_t l) const { return grid.x_min() + static_cast<double>(l) * spacing(); }
};

inline constexpr std::size_t oracle_max_n_x = 1024;

inline OracleSpectrum diagonalize(const HamiltonianSpec& h, const PhaseGrid& grid,
                                  std::size_t n_states) {
  if (grid.n_x() > oracle_max_n_x)
    throw ConfigError("oracle: n_x must be at most " + std::to_string(oracle_max_n_x));
  const std::size_t n = 2 * grid.n_x();
  if (n_states == 0 || n_states > n)
    throw ConfigError("oracle: n_states must be in [1, " + std::to_string(n) + "]");
  const double dxd = 0.5 * grid.dx();
  const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * dxd);

  std::vector<double> kin(n);
  bool even = true;
  for (std::size_t m = 0; m < n; ++m)
    kin[m] = evaluate(h.k, dk * static_cast<double>(PhaseGrid::signed_index(m, n)));
  for (std::size_t m = 1; m < n; ++m)
    if (m != n / 2 && kin[m] != kin[n - m]) even = false;

  // Circulant kinetic matrix T(a, b) = c((a - b) mod n).
  std::vector<complex> c(n);
  for (std::size_t d = 0; d < n; ++d) {
    complex acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double phase = 2.0 * std::numbers::pi *
                           static_cast<double>(PhaseGrid::signed_index(m, n)) *
                           static_cast<double>(d) / static_cast<double>(n);
      acc += kin[m] * std::polar(1.0, phase);
    }
    c[d] = acc / static_cast<double>(n);
  }
  std::vector<double> pot(n);
  for (std::size_t l = 0; l < n; ++l)
    pot[l] = evaluate(h.v, grid.x_min() + static_cast<double>(l) * dxd);

  OracleSpectrum spec{grid, std::vector<double>(n_states), Eigen::MatrixXcd(n, n_states), even};
  auto fix_phase = [&](Eigen::MatrixXcd& vecs) {
    for (std::size_t s = 0; s < n_states; ++s) {
      Eigen::Index imax = 0;
      vecs.col(s).cwiseAbs().maxCoeff(&imax);
      const complex z = vecs(imax, s);
      vecs.col(s) *= std::conj(z) / std::abs(z) / std::sqrt(dxd);
    }
  };

  const auto Nn = static_cast<Eigen::Index>(n);
  if (even) {
    Eigen::MatrixXd H(Nn, Nn);
    for (Eigen::Index a = 0; a < Nn; ++a)
      for (Eigen::Index b = 0; b < Nn; ++b)
        H(a, b) = c[static_cast<std::size_t>((a - b + Nn) % Nn)].real();
    for (Eigen::Index a = 0; a < Nn; ++a) H(a, a) += pot[static_cast<std::size_t>(a)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("oracle: eigensolver failed");
    Eigen::MatrixXcd vecs = es.eigenvectors().leftCols(static_cast<Eigen::Index>(n_states)).cast<complex>();
    fix_phase(vecs);
    spec.psi = std::move(vecs);
    for (std::size_t s = 0; s < n_states; ++s) spec.energies[s] = es.eigenvalues()(static_cast<Eigen::Index>(s));
  } else {
    Eigen::MatrixXcd H(Nn, Nn);
    for (Eigen::Index a = 0; a < Nn; ++a)
      for (Eigen::Index b = 0; b < Nn; ++b) H(a, b) = c[static_cast<std::size_t>((a - b + Nn) % Nn)];
    for (Eigen::Index a = 0; a < Nn; ++a) H(a, a) += pot[static_cast<std::size_t>(a)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("oracle: eigensolver failed");
    Eigen::MatrixXcd vecs = es.eigenvectors().leftCols(static_cast<Eigen::Index>(n_states));
    fix_phase(vecs);
    spec.psi = std::move(vecs);
    for (std::size_t s = 0; s < n_states; ++s) spec.energies[s] = es.eigenvalues()(static_cast<Eigen::Index>(s));
  }
  return spec;
}

/// Wigner function of sum_n w_n |psi_n><psi_n| on the spectrum's grid. The
/// result is not renormalized: trace_integral equals sum_n w_n.
inline WignerState wigner_of_mixture(const OracleSpectrum& spec, std::span<const double> weights) {
  if (weights.size() > spec.energies.size())
    throw ConfigError("oracle: more weights (" + std::to_string(weights.size()) +
                      ") than computed states (" + std::to_string(spec.energies.size()) + ")");
  const PhaseGrid& g = spec.grid;
  const auto nx = static_cast<Eigen::Index>(g.n_x());
  const auto np = static_cast<Eigen::Index>(g.n_p());
  const auto n = static_cast<Eigen::Index>(spec.points());
  const Eigen::Index half = nx;  // y index l runs over [-half, half)
  const double dxd = spec.spacing();
  const double hbar = g.hbar();

  Eigen::MatrixXd fr = Eigen::MatrixXd::Zero(nx, n);
  Eigen::MatrixXd fi = Eigen::MatrixXd::Zero(nx, n);
  for (std::size_t s = 0; s < weights.size(); ++s) {
    const double w = weights[s];
    if (w == 0.0) continue;
    const auto col = spec.psi.col(static_cast<Eigen::Index>(s));
    for (Eigen::Index j = 0; j < nx; ++j)
      for (Eigen::Index t = 0; t < n; ++t) {
        const Eigen::Index l = t - half;
        const Eigen::Index a = 2 * j - l, b = 2 * j + l;
        if (a < 0 || a >= n || b < 0 || b >= n) continue;
        const complex f = w * col(a) * std::conj(col(b));
        fr(j, t) += f.real();
        fi(j, t) += f.imag();
      }
  }

  Eigen::MatrixXd cs(n, np), sn(n, np);
  for (Eigen::Index t = 0; t < n; ++t) {
    const double y = static_cast<double>(t - half) * dxd;
    for (Eigen::Index k = 0; k < np; ++k) {
      const double phase = 2.0 * g.p(static_cast<std::size_t>(k)) * y / hbar;
      cs(t, k) = std::cos(phase);
      sn(t, k) = std::sin(phase);
    }
  }
  Eigen::MatrixXd wmat = fr * cs;
  if (!spec.real) wmat.noalias() -= fi * sn;
  wmat *= dxd / (std::numbers::pi * hbar);

  WignerState state(g);
  for (Eigen::Index j = 0; j < nx; ++j)
    for (Eigen::Index k = 0; k < np; ++k)
      state.w(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) = wmat(j, k);
  return state;
}

inline WignerState wigner_of_mixture(const OracleSpectrum& spec,
                                     const std::vector<double>& weights) {
  return wigner_of_mixture(spec, std::span<const double>(weights));
}

/// Pure eigenstate n.
inline WignerState wigner_of_state(const OracleSpectrum& spec, std::size_t n) {
  std::vector<double> w(n + 1, 0.0);
  w[n] = 1.0;
  return wigner_of_mixture(spec, w);
}

/// e^{-beta E_n}.
inline std::vector<double> boltzmann_weights(std::span<const double> energies, double beta) {
  std::vector<double> w(energies.size());
  for (std::size_t n = 0; n < energies.size(); ++n) w[n] = std::exp(-beta * energies[n]);
  return w;
}

/// 1/(e^{beta (E_n - mu)} + s).
inline std::vector<double> occupancy_weights(std::span<const double> energies, double beta,
                                             double mu, int s) {
  std::vector<double> w(energies.size());
  for (std::size_t n = 0; n < energies.size(); ++n)
    w[n] = 1.0 / (std::exp(beta * (energies[n] - mu)) + static_cast<double>(s));
  return w;
}

/// sum_n e^{-beta E_n}.
inline double partition_function(std::span<const double> energies, double beta) {
  double z = 0.0;
  for (double e : energies) z += std::exp(-beta * e);
  return z;
}

}  // namespace wigner_forge
