#pragma once

// Thin RAII layer over FFTW3. Planning always uses FFTW_ESTIMATE on
// fftw_malloc'ed storage so the chosen algorithm, and therefore every
// rounding error, is identical from one process to the next.

#include <fftw3.h>

#include <charconv>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <mutex>
#include <span>
#include <string_view>
#include <utility>

#include "wigner_forge/error.hpp"

namespace wigner_forge::fftw {

using complex = std::complex<double>;

namespace detail {

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Thread count comes from WIGNER_FORGE_THREADS (default 1). Read once.
inline int configured_threads() {
  static const int n = [] {
    const char* env = std::getenv("WIGNER_FORGE_THREADS");
    if (env == nullptr) return 1;
    std::string_view s(env);
    int v = 1;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 1) return 1;
    return v;
  }();
  return n;
}

inline void ensure_threads_initialized() {
  static const bool done = [] {
    fftw_init_threads();
    return true;
  }();
  (void)done;
  fftw_plan_with_nthreads(configured_threads());
}

}  // namespace detail

/// Number of threads FFTW plans are created with.
inline int threads() { return detail::configured_threads(); }

/// SIMD-aligned complex buffer owned through fftw_malloc.
class Buffer {
 public:
  Buffer() = default;
  explicit Buffer(std::size_t n) : size_(n) {
    if (n == 0) return;
    data_.reset(reinterpret_cast<complex*>(fftw_alloc_complex(n)));
    if (!data_) throw NumericalError("fftw_alloc_complex failed");
    std::memset(static_cast<void*>(data_.get()), 0, n * sizeof(complex));
  }

  complex* data() noexcept { return data_.get(); }
  const complex* data() const noexcept { return data_.get(); }
  std::size_t size() const noexcept { return size_; }
  std::span<complex> span() noexcept { return {data_.get(), size_}; }
  std::span<const complex> span() const noexcept { return {data_.get(), size_}; }
  complex& operator[](std::size_t i) noexcept { return data_[i]; }
  const complex& operator[](std::size_t i) const noexcept { return data_[i]; }

  fftw_complex* raw() noexcept { return reinterpret_cast<fftw_complex*>(data_.get()); }

 private:
  struct Free {
    void operator()(complex* p) const noexcept { fftw_free(p); }
  };
  std::unique_ptr<complex[], Free> data_;
  std::size_t size_ = 0;
};

/// Owning handle for an fftw_plan.
class Plan {
 public:
  Plan() = default;
  explicit Plan(fftw_plan p) : plan_(p) {
    if (plan_ == nullptr) throw NumericalError("FFTW failed to create a plan");
  }
  Plan(Plan&& o) noexcept : plan_(std::exchange(o.plan_, nullptr)) {}
  Plan& operator=(Plan&& o) noexcept {
    if (this != &o) {
      reset();
      plan_ = std::exchange(o.plan_, nullptr);
    }
    return *this;
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() { reset(); }

  void execute() const noexcept { fftw_execute(plan_); }

 private:
  void reset() noexcept {
    if (plan_ != nullptr) {
      std::lock_guard lock(detail::planner_mutex());
      fftw_destroy_plan(plan_);
      plan_ = nullptr;
    }
  }
  fftw_plan plan_ = nullptr;
};

/// `count` contiguous transforms of length `length`, consecutive transforms
/// `length` elements apart, in place.
inline Plan plan_rows(Buffer& buf, int length, int count, int sign) {
  std::lock_guard lock(detail::planner_mutex());
  detail::ensure_threads_initialized();
  int n[1] = {length};
  return Plan(fftw_plan_many_dft(1, n, count, buf.raw(), nullptr, 1, length, buf.raw(), nullptr, 1,
                                 length, sign, FFTW_ESTIMATE));
}

/// Transforms along the row index of a rows x cols array in `in`, writing the
/// result transposed (cols x rows, transform index contiguous) into `out`.
inline Plan plan_columns_transposed(Buffer& in, Buffer& out, int rows, int cols, int sign) {
  std::lock_guard lock(detail::planner_mutex());
  detail::ensure_threads_initialized();
  fftw_iodim dim{rows, cols, 1};
  fftw_iodim many{cols, 1, rows};
  return Plan(fftw_plan_guru_dft(1, &dim, 1, &many, in.raw(), out.raw(), sign, FFTW_ESTIMATE));
}

}  // namespace wigner_forge::fftw
