// Harmonic-oscillator Gibbs state on a small grid, compared with the
// closed-form result and checked for Moyal stationarity.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "wigner_forge/wigner_forge.hpp"

namespace wf = wigner_forge;

int main() {
  const wf::PhaseGrid grid = wf::make_grid(128, 128, -8.0, 8.0, -8.0, 8.0);
  const wf::HamiltonianSpec h = wf::make_hamiltonian("x^2/2", "p^2/2");
  const double beta = 2.0;

  wf::GibbsOptions opt;
  opt.splitting = wf::Splitting::strang;
  opt.extrapolate = true;
  const wf::WignerState w = wf::gibbs(h, grid, beta, 0.01, opt).state;

  // W = tanh(beta/2)/pi exp(-2 tanh(beta/2) H)
  const double t = std::tanh(0.5 * beta);
  double err = 0.0;
  for (std::size_t j = 0; j < grid.n_x(); ++j)
    for (std::size_t k = 0; k < grid.n_p(); ++k) {
      const double H = 0.5 * (grid.x(j) * grid.x(j) + grid.p(k) * grid.p(k));
      err = std::max(err, std::abs(w.w(j, k) - t / std::numbers::pi * std::exp(-2.0 * t * H)));
    }

  std::printf("Z        %.9f (exact %.9f)\n", std::exp(w.log_norm), 0.5 / std::sinh(0.5 * beta));
  std::printf("energy   %.9f (exact %.9f)\n", wf::energy(w, h), 0.5 / std::tanh(0.5 * beta));
  std::printf("purity   %.9f (exact %.9f)\n", wf::purity(w), t);
  std::printf("max err  %.3e\n", err);
  std::printf("residual %.3e\n", wf::stationarity_residual(w, h, 1.0, 0.01));
}
