#pragma once

// Phase-space lattice, Wigner state container and the two conjugate-variable
// spectral transforms (p <-> theta along rows, x <-> lambda along columns).

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>

#include "wigner_forge/array2d.hpp"
#include "wigner_forge/error.hpp"
#include "wigner_forge/fftw.hpp"

namespace wigner_forge {

using complex = std::complex<double>;

/// Uniform periodic (x, p) lattice with its conjugate (lambda, theta)
/// frequency lattices. Endpoints x_max and p_max are excluded.
///
/// Frequency arrays use FFT ordering: index m maps to the signed index
/// m~ = m for m < n/2 and m - n otherwise, so m~ runs over {-n/2, ..., n/2-1}.
class PhaseGrid {
 public:
  std::size_t n_x() const noexcept { return n_x_; }
  std::size_t n_p() const noexcept { return n_p_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double p_min() const noexcept { return p_min_; }
  double p_max() const noexcept { return p_max_; }
  double hbar() const noexcept { return hbar_; }
  double dx() const noexcept { return dx_; }
  double dp() const noexcept { return dp_; }
  double area() const noexcept { return (x_max_ - x_min_) * (p_max_ - p_min_); }
  std::size_t size() const noexcept { return n_x_ * n_p_; }

  double x(std::size_t j) const noexcept { return x_min_ + static_cast<double>(j) * dx_; }
  double p(std::size_t k) const noexcept { return p_min_ + static_cast<double>(k) * dp_; }

  static long signed_index(std::size_t m, std::size_t n) noexcept {
    return m < n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
  }
  /// Index of the frequency -f given the index of f (Nyquist maps to itself).
  static std::size_t reflect_index(std::size_t m, std::size_t n) noexcept { return (n - m) % n; }

  double dlambda() const noexcept { return 2.0 * std::numbers::pi / (static_cast<double>(n_x_) * dx_); }
  double dtheta() const noexcept { return 2.0 * std::numbers::pi / (static_cast<double>(n_p_) * dp_); }
  double lambda(std::size_t m) const noexcept {
    return dlambda() * static_cast<double>(signed_index(m, n_x_));
  }
  double theta(std::size_t m) const noexcept {
    return dtheta() * static_cast<double>(signed_index(m, n_p_));
  }
  /// Largest positive lattice frequency, 2 pi (n/2 - 1) / (n d).
  double lambda_max() const noexcept { return dlambda() * static_cast<double>(n_x_ / 2 - 1); }
  double theta_max() const noexcept { return dtheta() * static_cast<double>(n_p_ / 2 - 1); }
  /// Largest |hbar theta / 2| on the lattice (attained at the Nyquist bin):
  /// the reach of the shifted arguments x +- hbar theta / 2.
  double max_shift_x() const noexcept { return 0.5 * hbar_ * std::numbers::pi / dp_; }
  /// Largest |hbar lambda / 2| on the lattice.
  double max_shift_p() const noexcept { return 0.5 * hbar_ * std::numbers::pi / dx_; }

  friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;

  friend PhaseGrid make_grid(std::size_t, std::size_t, double, double, double, double, double);

 private:
  PhaseGrid() = default;

  std::size_t n_x_ = 0;
  std::size_t n_p_ = 0;
  double x_min_ = 0, x_max_ = 0, p_min_ = 0, p_max_ = 0;
  double hbar_ = 1.0;
  double dx_ = 0, dp_ = 0;
};

/// Builds a lattice; throws ConfigError naming the offending field.
inline PhaseGrid make_grid(std::size_t n_x, std::size_t n_p, double x_min, double x_max,
                           double p_min, double p_max, double hbar = 1.0) {
  auto check_size = [](std::size_t n, const char* name) {
    if (n < 8 || n % 2 != 0)
      throw ConfigError(std::string(name) + " must be even and at least 8 (got " +
                        std::to_string(n) + ")");
  };
  check_size(n_x, "n_x");
  check_size(n_p, "n_p");
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
    throw ConfigError("x bounds must be finite with x_min < x_max");
  if (!std::isfinite(p_min) || !std::isfinite(p_max) || !(p_min < p_max))
    throw ConfigError("p bounds must be finite with p_min < p_max");
  if (!std::isfinite(hbar) || !(hbar > 0.0)) throw ConfigError("hbar must be positive");

  PhaseGrid g;
  g.n_x_ = n_x;
  g.n_p_ = n_p;
  g.x_min_ = x_min;
  g.x_max_ = x_max;
  g.p_min_ = p_min;
  g.p_max_ = p_max;
  g.hbar_ = hbar;
  g.dx_ = (x_max - x_min) / static_cast<double>(n_x);
  g.dp_ = (p_max - p_min) / static_cast<double>(n_p);
  return g;
}

/// The 512 x 512 lattice on [-10, 10)^2 with hbar = 1 used by every shipped example.
inline PhaseGrid default_grid() { return make_grid(512, 512, -10.0, 10.0, -10.0, 10.0, 1.0); }

/// Real Wigner distribution on a lattice, stored [x-index][p-index].
///
/// `beta` is the inverse temperature reached so far and `log_norm` the sum
/// of the logarithms of every normalization factor divided out, so that
/// exp(log_norm) * trace_integral(*this) is the unnormalized trace.
struct WignerState {
  PhaseGrid grid;
  Array2D<double> w;
  double beta = 0.0;
  double log_norm = 0.0;

  explicit WignerState(const PhaseGrid& g) : grid(g), w(g.n_x(), g.n_p(), 0.0) {}
  WignerState(const PhaseGrid& g, Array2D<double> values) : grid(g), w(std::move(values)) {
    if (w.rows() != g.n_x() || w.cols() != g.n_p())
      throw ConfigError("state array shape " + std::to_string(w.rows()) + "x" +
                        std::to_string(w.cols()) + " does not match grid " +
                        std::to_string(g.n_x()) + "x" + std::to_string(g.n_p()));
  }
};

/// Sum w dx dp.
inline double trace_integral(const WignerState& s) {
  double sum = 0.0;
  for (double v : s.w) sum += v;
  return sum * s.grid.dx() * s.grid.dp();
}

inline bool all_finite(const Array2D<double>& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

/// W = 1/(2 pi hbar), the image of the identity operator, stored normalized
/// with log_norm = log(area / (2 pi hbar)).
inline WignerState identity_state(const PhaseGrid& g) {
  WignerState s(g);
  const double value = 1.0 / g.area();
  for (double& v : s.w) v = value;
  s.log_norm = std::log(g.area() / (2.0 * std::numbers::pi * g.hbar()));
  return s;
}

/// Divides out the trace, folding it into log_norm. Throws if the trace is
/// not positive and finite.
inline void normalize(WignerState& s) {
  const double t = trace_integral(s);
  if (!std::isfinite(t) || !(t > 0.0))
    throw NumericalError("state annihilated: grid too small or dbeta too large (trace = " +
                         std::to_string(t) + ")");
  const double inv = 1.0 / t;
  for (double& v : s.w) v *= inv;
  s.log_norm += std::log(t);
}

enum class Representation { x_theta, lambda_p };

/// Complex field in one of the two mixed representations. For x_theta the
/// array is [x-index][theta-index]; for lambda_p it is [lambda-index][p-index].
/// Frequency indices use FFT ordering (see PhaseGrid).
struct MixedRep {
  PhaseGrid grid;
  Representation representation;
  Array2D<complex> g;
};

namespace detail {

template <class T>
void transpose_blocked(const T* src, T* dst, std::size_t rows, std::size_t cols) {
  constexpr std::size_t block = 32;
  for (std::size_t i0 = 0; i0 < rows; i0 += block) {
    const std::size_t i1 = std::min(rows, i0 + block);
    for (std::size_t j0 = 0; j0 < cols; j0 += block) {
      const std::size_t j1 = std::min(cols, j0 + block);
      for (std::size_t i = i0; i < i1; ++i)
        for (std::size_t j = j0; j < j1; ++j) dst[j * rows + i] = src[i * cols + j];
    }
  }
}

}  // namespace detail

/// FFT workspace for one lattice. Holds the [x][p] field plus a transposed
/// [p][x] scratch buffer; the x-axis transforms run on the transposed copy.
///
/// All transforms here are raw (unnormalized, no lattice-origin phases):
/// diagonal multipliers commute with those phases, so propagators need only
/// the 1/n factor, which the apply_* methods fold in.
class SpectralEngine {
 public:
  explicit SpectralEngine(const PhaseGrid& grid)
      : n_x_(grid.n_x()),
        n_p_(grid.n_p()),
        field_(grid.size()),
        transposed_(grid.size()),
        rows_forward_(fftw::plan_rows(field_, int(n_p_), int(n_x_), FFTW_FORWARD)),
        rows_inverse_(fftw::plan_rows(field_, int(n_p_), int(n_x_), FFTW_BACKWARD)),
        columns_forward_(
            fftw::plan_columns_transposed(field_, transposed_, int(n_x_), int(n_p_), FFTW_FORWARD)),
        transposed_inverse_(fftw::plan_rows(transposed_, int(n_x_), int(n_p_), FFTW_BACKWARD)),
        transposed_forward_(fftw::plan_rows(transposed_, int(n_x_), int(n_p_), FFTW_FORWARD)) {}

  SpectralEngine(const SpectralEngine&) = delete;
  SpectralEngine& operator=(const SpectralEngine&) = delete;

  std::size_t n_x() const noexcept { return n_x_; }
  std::size_t n_p() const noexcept { return n_p_; }

  /// [x][p] (or [x][theta] between forward_p and inverse_p).
  fftw::Buffer& field() noexcept { return field_; }
  /// [p][x] (or [p][lambda]) scratch.
  fftw::Buffer& transposed() noexcept { return transposed_; }

  void load(const Array2D<double>& w) {
    const double* src = w.data();
    complex* dst = field_.data();
    for (std::size_t i = 0; i < field_.size(); ++i) dst[i] = complex(src[i], 0.0);
  }

  /// Copies the real part into w; returns max|Im| / max|Re|.
  double store_real(Array2D<double>& w) const {
    const complex* src = field_.data();
    double* dst = w.data();
    double max_re = 0.0, max_im = 0.0;
    for (std::size_t i = 0; i < field_.size(); ++i) {
      dst[i] = src[i].real();
      max_re = std::max(max_re, std::abs(src[i].real()));
      max_im = std::max(max_im, std::abs(src[i].imag()));
    }
    return max_re > 0.0 ? max_im / max_re : max_im;
  }

  void forward_p() noexcept { rows_forward_.execute(); }
  void inverse_p() noexcept { rows_inverse_.execute(); }
  /// field [x][p] -> transposed [p][lambda]
  void forward_x_into_transposed() noexcept { columns_forward_.execute(); }
  /// transposed [p][lambda] -> field [x][p]
  void inverse_x_from_transposed() noexcept {
    transposed_inverse_.execute();
    detail::transpose_blocked(transposed_.data(), field_.data(), n_p_, n_x_);
  }
  /// field [x][p] -> transposed [p][x], no transform.
  void transpose_into_transposed() noexcept {
    detail::transpose_blocked(field_.data(), transposed_.data(), n_x_, n_p_);
  }
  void forward_transposed_rows() noexcept { transposed_forward_.execute(); }

  /// field <- F_{theta->p} [ kernel(x, theta) F_{p->theta} field ]
  template <class K>
  void apply_xtheta(const Array2D<K>& kernel) {
    forward_p();
    const double scale = 1.0 / static_cast<double>(n_p_);
    complex* f = field_.data();
    const K* k = kernel.data();
    for (std::size_t i = 0; i < field_.size(); ++i) f[i] *= k[i] * scale;
    inverse_p();
  }

  /// field <- F^{lambda->x} [ kernel F^{x->lambda} field ], with the kernel
  /// supplied transposed as [p][lambda].
  template <class K>
  void apply_lambdap_transposed(const Array2D<K>& kernel_t) {
    forward_x_into_transposed();
    const double scale = 1.0 / static_cast<double>(n_x_);
    complex* f = transposed_.data();
    const K* k = kernel_t.data();
    for (std::size_t i = 0; i < transposed_.size(); ++i) f[i] *= k[i] * scale;
    inverse_x_from_transposed();
  }

 private:
  std::size_t n_x_, n_p_;
  fftw::Buffer field_;
  fftw::Buffer transposed_;
  fftw::Plan rows_forward_;
  fftw::Plan rows_inverse_;
  fftw::Plan columns_forward_;
  fftw::Plan transposed_inverse_;
  fftw::Plan transposed_forward_;
};

template <class T>
Array2D<T> transposed(const Array2D<T>& a) {
  Array2D<T> t(a.cols(), a.rows());
  detail::transpose_blocked(a.data(), t.data(), a.rows(), a.cols());
  return t;
}

namespace detail {

inline void require_finite(const WignerState& s, const char* what) {
  if (!all_finite(s.w)) throw NumericalError(std::string(what) + ": state contains non-finite values");
}

inline void require_finite(const MixedRep& r, const char* what) {
  for (const complex& v : r.g)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalError(std::string(what) + ": representation contains non-finite values");
}

}  // namespace detail

/// g(x, theta) = integral W(x, p) exp(-i p theta) dp, evaluated on the lattice.
inline MixedRep to_xtheta(const WignerState& state) {
  detail::require_finite(state, "to_xtheta");
  const PhaseGrid& grid = state.grid;
  SpectralEngine engine(grid);
  engine.load(state.w);
  engine.forward_p();
  MixedRep rep{grid, Representation::x_theta, Array2D<complex>(grid.n_x(), grid.n_p())};
  for (std::size_t m = 0; m < grid.n_p(); ++m) {
    const complex phase = std::polar(grid.dp(), -grid.p_min() * grid.theta(m));
    for (std::size_t j = 0; j < grid.n_x(); ++j)
      rep.g(j, m) = engine.field()[j * grid.n_p() + m] * phase;
  }
  return rep;
}

/// Inverse of to_xtheta; returns the real part.
inline Array2D<double> from_xtheta(const MixedRep& rep) {
  if (rep.representation != Representation::x_theta)
    throw ConfigError("from_xtheta: representation is not (x, theta)");
  detail::require_finite(rep, "from_xtheta");
  const PhaseGrid& grid = rep.grid;
  SpectralEngine engine(grid);
  const double scale = 1.0 / (static_cast<double>(grid.n_p()) * grid.dp());
  for (std::size_t m = 0; m < grid.n_p(); ++m) {
    const complex phase = std::polar(scale, grid.p_min() * grid.theta(m));
    for (std::size_t j = 0; j < grid.n_x(); ++j)
      engine.field()[j * grid.n_p() + m] = rep.g(j, m) * phase;
  }
  engine.inverse_p();
  Array2D<double> w(grid.n_x(), grid.n_p());
  engine.store_real(w);
  return w;
}

/// h(lambda, p) = integral W(x, p) exp(-i x lambda) dx, evaluated on the lattice.
inline MixedRep to_lambdap(const WignerState& state) {
  detail::require_finite(state, "to_lambdap");
  const PhaseGrid& grid = state.grid;
  SpectralEngine engine(grid);
  engine.load(state.w);
  engine.forward_x_into_transposed();
  MixedRep rep{grid, Representation::lambda_p, Array2D<complex>(grid.n_x(), grid.n_p())};
  for (std::size_t m = 0; m < grid.n_x(); ++m) {
    const complex phase = std::polar(grid.dx(), -grid.x_min() * grid.lambda(m));
    for (std::size_t k = 0; k < grid.n_p(); ++k)
      rep.g(m, k) = engine.transposed()[k * grid.n_x() + m] * phase;
  }
  return rep;
}

/// Inverse of to_lambdap; returns the real part.
inline Array2D<double> from_lambdap(const MixedRep& rep) {
  if (rep.representation != Representation::lambda_p)
    throw ConfigError("from_lambdap: representation is not (lambda, p)");
  detail::require_finite(rep, "from_lambdap");
  const PhaseGrid& grid = rep.grid;
  SpectralEngine engine(grid);
  const double scale = 1.0 / (static_cast<double>(grid.n_x()) * grid.dx());
  for (std::size_t m = 0; m < grid.n_x(); ++m) {
    const complex phase = std::polar(scale, grid.x_min() * grid.lambda(m));
    for (std::size_t k = 0; k < grid.n_p(); ++k)
      engine.transposed()[k * grid.n_x() + m] = rep.g(m, k) * phase;
  }
  engine.inverse_x_from_transposed();
  Array2D<double> w(grid.n_x(), grid.n_p());
  engine.store_real(w);
  return w;
}

}  // namespace wigner_forge
