#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"

using namespace testing_helpers;

TEST(MoyalKernels, ZeroPotentialAndZeroShift) {
  const wf::PhaseGrid g = wf::make_grid(32, 32, -4, 4, -4, 4);
  const wf::MoyalKernels free = wf::build_moyal_kernels(wf::make_hamiltonian("0", "p^2/2"), g, 0.1);
  for (const auto& v : free.v_kernel) EXPECT_EQ(v, wf::complex(1.0, 0.0));
  const wf::MoyalKernels k = wf::build_moyal_kernels(mexican_hat(), g, 0.1);
  for (std::size_t j = 0; j < g.n_x(); ++j) EXPECT_EQ(k.v_kernel(j, 0), wf::complex(1.0, 0.0));
}

TEST(MoyalKernels, UnitModulusAndConjugateSymmetry) {
  const wf::PhaseGrid g = wf::make_grid(64, 64, -6, 6, -6, 6);
  const wf::MoyalKernels k = wf::build_moyal_kernels(mexican_hat(), g, 0.05);
  for (std::size_t j = 0; j < g.n_x(); ++j)
    for (std::size_t m = 0; m < g.n_p(); ++m) {
      EXPECT_NEAR(std::abs(k.v_kernel(j, m)), 1.0, 1e-15);
      if (m == g.n_p() / 2) continue;
      const std::size_t r = wf::PhaseGrid::reflect_index(m, g.n_p());
      EXPECT_NEAR(std::abs(k.v_kernel(j, r) - std::conj(k.v_kernel(j, m))), 0.0, 1e-15);
    }
}

TEST(MoyalKernels, LinearPotentialIsPureShift) {
  const wf::PhaseGrid g = wf::make_grid(32, 32, -4, 4, -4, 4);
  const double dt = 0.1;
  const wf::MoyalKernels k = wf::build_moyal_kernels(wf::make_hamiltonian("2*x", "p^2/2"), g, dt);
  for (std::size_t m = 0; m < g.n_p(); ++m) {
    if (m == g.n_p() / 2) continue;
    // V(x - s) - V(x + s) = -4 s with s = hbar theta / 2.
    const double diff = -2.0 * g.hbar() * g.theta(m);
    const wf::complex expect = std::polar(1.0, -dt / g.hbar() * diff);
    for (std::size_t j = 0; j < g.n_x(); ++j) EXPECT_NEAR(std::abs(k.v_kernel(j, m) - expect), 0.0, 1e-13);
  }
}

TEST(Composition, WeightsSumToOne) {
  for (int order : {1, 2, 4, 6}) {
    const auto seq = wf::detail::composition(order);
    double v = 0.0, k = 0.0;
    for (const auto& s : seq) (s.is_v ? v : k) += s.fraction;
    EXPECT_NEAR(v, 1.0, 1e-14) << order;
    EXPECT_NEAR(k, 1.0, 1e-14) << order;
  }
  EXPECT_THROW(wf::detail::composition(3), wf::ConfigError);
  EXPECT_THROW(wf::detail::composition(0), wf::ConfigError);
}

TEST(MoyalPropagate, ZeroTimeIsExactCopy) {
  const wf::PhaseGrid g = small_grid();
  const wf::WignerState s = gaussian(g, 1.0, 0.5);
  const wf::WignerState out = wf::moyal_propagate(s, mexican_hat(), 0.0, 0.01);
  EXPECT_EQ(out.w, s.w);
}

TEST(MoyalPropagate, OscillatorQuarterPeriodRotation) {
  const wf::PhaseGrid g = small_grid();
  const double x0 = 2.0;
  const wf::WignerState s = gaussian(g, x0, 0.0);
  const double t = 0.5 * std::numbers::pi;
  const wf::WignerState out = wf::moyal_propagate(s, oscillator(), t, t / 200.0);
  const wf::Moments mo = wf::moments(out);
  EXPECT_NEAR(mo.mean_x, 0.0, 1e-6);
  EXPECT_NEAR(mo.mean_p, -x0, 1e-6);
  EXPECT_LE(wf::max_abs_diff(out.w, gaussian(g, 0.0, -x0).w), 1e-6);
}

TEST(MoyalPropagate, LinearPotentialShiftsMomentum) {
  // V = x, K = 0: unit force in -p, so W(x, p, t) = W(x, p + t, 0).
  const wf::PhaseGrid g = small_grid();
  const wf::WignerState out =
      wf::moyal_propagate(gaussian(g, 0.5, 1.0), wf::make_hamiltonian("x", "0"), 1.0, 0.1, {1});
  EXPECT_LE(wf::max_abs_diff(out.w, gaussian(g, 0.5, 0.0).w), 1e-12);
}

TEST(MoyalPropagate, FreeConstantIsStationary) {
  const wf::PhaseGrid g = wf::make_grid(32, 32, -4, 4, -4, 4);
  EXPECT_LE(wf::stationarity_residual(wf::identity_state(g), wf::make_hamiltonian("0", "p^2/2"), 1.0, 0.1),
            1e-14);
}

TEST(MoyalPropagate, AnalyticGibbsIsStationary) {
  const wf::PhaseGrid g = small_grid();
  for (int order : {4, 6})
    EXPECT_LE(wf::stationarity_residual(ho_gibbs(g, 1.0), oscillator(), 1.0, 0.01, {order}), 1e-8)
        << order;
}

TEST(MoyalPropagate, ConservesTracePurityEnergy) {
  const wf::PhaseGrid g = wf::make_grid(128, 128, -10, 10, -10, 10);
  const wf::HamiltonianSpec h = mexican_hat();
  const wf::WignerState s = gaussian(g, 1.5, 0.0);
  const wf::WignerState out = wf::moyal_propagate(s, h, 1.0, 0.01);
  EXPECT_NEAR(wf::trace_integral(out), wf::trace_integral(s), 1e-8);
  EXPECT_NEAR(wf::purity(out), wf::purity(s), 1e-8);
  EXPECT_NEAR(wf::energy(out, h), wf::energy(s, h), 1e-8);
}

TEST(MoyalPropagate, NonStationaryStateMoves) {
  const wf::PhaseGrid g = wf::make_grid(128, 128, -10, 10, -10, 10);
  const wf::WignerState s = gaussian(g, 1.5, 0.0);
  EXPECT_GT(wf::stationarity_residual(s, mexican_hat(), 1.0, 0.01), 1e-2);
}

TEST(MoyalPropagate, HigherOrderIsMoreAccurate) {
  const wf::PhaseGrid g = small_grid();
  const wf::WignerState s = gaussian(g, 2.0, 0.0);
  const double t = 0.5 * std::numbers::pi;
  const wf::WignerState exact = gaussian(g, 0.0, -2.0);
  const wf::HamiltonianSpec h = oscillator();
  double last = 1.0;
  for (int order : {1, 2, 4}) {
    const double err = wf::max_abs_diff(wf::moyal_propagate(s, h, t, t / 50.0, {order}).w, exact.w);
    EXPECT_LT(err, last) << order;
    last = err;
  }
}

TEST(MoyalPropagate, RejectsBadArguments) {
  const wf::PhaseGrid g = wf::make_grid(8, 8, -4, 4, -4, 4);
  const wf::WignerState s = wf::identity_state(g);
  EXPECT_THROW(wf::moyal_propagate(s, oscillator(), -1.0, 0.1), wf::ConfigError);
  EXPECT_THROW(wf::moyal_propagate(s, oscillator(), 1.0, 0.0), wf::ConfigError);
  EXPECT_THROW(wf::moyal_propagate(s, oscillator(), 1.0, 0.1, {5}), wf::ConfigError);
}

TEST(MoyalPropagate, AliasingIsDetected) {
  // A kernel step far beyond the lattice resolution spreads energy into
  // aliased modes.
  const wf::PhaseGrid g = wf::make_grid(32, 32, -4, 4, -4, 4);
  const wf::WignerState s = random_state(g, 3);
  try {
    wf::moyal_propagate(s, wf::make_hamiltonian("x^3", "p^2/2"), 1.0, 1.0);
    FAIL();
  } catch (const wf::NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("aliasing detected"), std::string::npos) << e.what();
  }
}
