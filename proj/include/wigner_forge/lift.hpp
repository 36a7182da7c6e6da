#pragma once

// The phase-space lift of a separable Hamiltonian: V and K sampled at the
// shifted arguments x -+ hbar theta/2 and p +- hbar lambda/2. Both the Bloch
// (sum) and Moyal (difference) kernels are built from these samples.

#include <cstddef>
#include <string>
#include <vector>

#include "wigner_forge/array2d.hpp"
#include "wigner_forge/grid.hpp"
#include "wigner_forge/hamlang.hpp"

namespace wigner_forge {

struct Lift {
  /// V(x_j - hbar theta_m/2) + V(x_j + hbar theta_m/2), [x][theta].
  Array2D<double> v_sum;
  /// V(x_j - hbar theta_m/2) - V(x_j + hbar theta_m/2), [x][theta].
  Array2D<double> v_diff;
  /// K(p_k + hbar lambda_m/2) + K(p_k - hbar lambda_m/2), transposed [p][lambda].
  Array2D<double> k_sum_t;
  /// K(p_k + hbar lambda_m/2) - K(p_k - hbar lambda_m/2), transposed [p][lambda].
  Array2D<double> k_diff_t;
};

namespace detail {

inline double sample_or_throw(const Expr& e, double arg, const char* fname, const char* var,
                              double base, const char* conj, double freq) {
  try {
    return evaluate(e, arg);
  } catch (const EvalError& err) {
    throw EvalError(std::string(fname) + " singular at " + var + " = " + format_double(arg) +
                        " (lattice " + var + " = " + format_double(base) + ", " + conj + " = " +
                        format_double(freq) + "): " + err.what(),
                    arg);
  }
}

}  // namespace detail

inline Lift make_lift(const HamiltonianSpec& h, const PhaseGrid& grid) {
  const std::size_t nx = grid.n_x(), np = grid.n_p();
  const double hbar = grid.hbar();
  Lift lift{Array2D<double>(nx, np), Array2D<double>(nx, np), Array2D<double>(np, nx),
            Array2D<double>(np, nx)};
  for (std::size_t j = 0; j < nx; ++j) {
    const double x = grid.x(j);
    for (std::size_t m = 0; m < np; ++m) {
      const double theta = grid.theta(m);
      const double s = 0.5 * hbar * theta;
      const double vm = detail::sample_or_throw(h.v, x - s, "V", "x", x, "theta", theta);
      const double vp = detail::sample_or_throw(h.v, x + s, "V", "x", x, "theta", theta);
      lift.v_sum(j, m) = vm + vp;
      lift.v_diff(j, m) = vm - vp;
    }
  }
  for (std::size_t k = 0; k < np; ++k) {
    const double p = grid.p(k);
    for (std::size_t m = 0; m < nx; ++m) {
      const double lambda = grid.lambda(m);
      const double s = 0.5 * hbar * lambda;
      const double kp = detail::sample_or_throw(h.k, p + s, "K", "p", p, "lambda", lambda);
      const double km = detail::sample_or_throw(h.k, p - s, "K", "p", p, "lambda", lambda);
      lift.k_sum_t(k, m) = kp + km;
      lift.k_diff_t(k, m) = kp - km;
    }
  }
  return lift;
}

/// V(x_j) and K(p_k) on the lattice.
struct SampledHamiltonian {
  std::vector<double> v;
  std::vector<double> k;
};

inline SampledHamiltonian sample_hamiltonian(const HamiltonianSpec& h, const PhaseGrid& grid) {
  SampledHamiltonian s{std::vector<double>(grid.n_x()), std::vector<double>(grid.n_p())};
  for (std::size_t j = 0; j < grid.n_x(); ++j)
    s.v[j] = detail::sample_or_throw(h.v, grid.x(j), "V", "x", grid.x(j), "theta", 0.0);
  for (std::size_t k = 0; k < grid.n_p(); ++k)
    s.k[k] = detail::sample_or_throw(h.k, grid.p(k), "K", "p", grid.p(k), "lambda", 0.0);
  return s;
}

}  // namespace wigner_forge
