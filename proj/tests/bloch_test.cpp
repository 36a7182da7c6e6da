#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"

using namespace testing_helpers;

TEST(BlochKernels, ZeroPotentialIsOne) {
  const wf::PhaseGrid g = wf::make_grid(32, 32, -4, 4, -4, 4);
  const wf::BlochKernels k = wf::build_bloch_kernels(wf::make_hamiltonian("0", "p^2/2"), g, 0.1);
  for (double v : k.v_kernel) EXPECT_EQ(v, 1.0);
}

TEST(BlochKernels, ZeroLambdaRow) {
  const wf::PhaseGrid g = wf::make_grid(32, 32, -4, 4, -4, 4);
  const double db = 0.3;
  const wf::BlochKernels k = wf::build_bloch_kernels(oscillator(), g, db);
  for (std::size_t p = 0; p < g.n_p(); ++p)
    EXPECT_NEAR(k.k_kernel(0, p), std::exp(-db * g.p(p) * g.p(p) / 2.0), 1e-15);
}

TEST(BlochKernels, MexicanHatAtMaximumShift) {
  const wf::PhaseGrid g = wf::default_grid();
  const wf::HamiltonianSpec h = mexican_hat();
  const double db = 1e-3;
  const wf::BlochKernels k = wf::build_bloch_kernels(h, g, db);
  const std::size_t j0 = g.n_x() / 2;  // x = 0
  ASSERT_EQ(g.x(j0), 0.0);
  const std::size_t m = g.n_p() / 2 - 1;  // theta_max
  const double s = 0.5 * g.hbar() * g.theta_max();
  const double expect = std::exp(-db * (h.V(-s) + h.V(s)) / 2.0);
  EXPECT_NEAR(k.v_kernel(j0, m), expect, 1e-14 * expect);
}

TEST(BlochKernels, PositiveAndEven) {
  const wf::PhaseGrid g = wf::make_grid(64, 64, -6, 6, -6, 6);
  const wf::BlochKernels k = wf::build_bloch_kernels(mexican_hat(), g, 0.05);
  for (std::size_t j = 0; j < g.n_x(); ++j)
    for (std::size_t m = 0; m < g.n_p(); ++m) {
      EXPECT_GE(k.v_kernel(j, m), 0.0);
      EXPECT_EQ(k.v_kernel(j, m), k.v_kernel(j, wf::PhaseGrid::reflect_index(m, g.n_p())));
    }
  for (std::size_t p = 0; p < g.n_p(); ++p)
    for (std::size_t m = 0; m < g.n_x(); ++m)
      EXPECT_EQ(k.k_kernel(m, p), k.k_kernel(wf::PhaseGrid::reflect_index(m, g.n_x()), p));
}

TEST(BlochKernels, ExponentFloorClampsToZero) {
  const wf::PhaseGrid g = wf::make_grid(32, 32, -10, 10, -10, 10);
  const wf::BlochKernels k =
      wf::build_bloch_kernels(wf::make_hamiltonian("x^8", "p^2/2"), g, 1.0);
  EXPECT_EQ(k.v_kernel(0, 0), 0.0);
  for (double v : k.v_kernel) EXPECT_TRUE(std::isfinite(v));
}

TEST(BlochKernels, SingularPotentialNamesPoint) {
  const wf::PhaseGrid g = wf::make_grid(8, 8, -4, 4, -4, 4);
  try {
    wf::build_bloch_kernels(wf::make_hamiltonian("1/x", "p^2/2"), g, 0.1);
    FAIL();
  } catch (const wf::EvalError& e) {
    EXPECT_NE(std::string(e.what()).find("x = 0"), std::string::npos) << e.what();
  }
  EXPECT_THROW(wf::build_bloch_kernels(oscillator(), g, 0.0), wf::ConfigError);
}

TEST(BlochStep, FreeParticleIsExact) {
  const wf::PhaseGrid g = wf::make_grid(32, 64, -4, 4, -6, 6);
  const double db = 0.7;
  wf::WignerState s = wf::identity_state(g);
  wf::bloch_step(s, wf::build_bloch_kernels(wf::make_hamiltonian("0", "p^2/2"), g, db));
  wf::WignerState expect = sampled_state(g, [&](double, double p) { return std::exp(-db * p * p / 2); });
  wf::normalize(expect);
  EXPECT_LE(wf::max_abs_diff(s.w, expect.w), 1e-14);
  EXPECT_DOUBLE_EQ(s.beta, db);
}

TEST(BlochStep, AnnihilationIsReported) {
  const wf::PhaseGrid g = wf::make_grid(16, 16, -10, 10, -10, 10);
  wf::WignerState s = wf::identity_state(g);
  try {
    wf::bloch_step(s, wf::build_bloch_kernels(wf::make_hamiltonian("1000 + x^8", "p^2/2"), g, 10.0));
    FAIL();
  } catch (const wf::NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("state annihilated"), std::string::npos) << e.what();
  }
}

TEST(BlochStep, PreservesPositivity) {
  const wf::PhaseGrid g = wf::make_grid(64, 64, -8, 8, -8, 8);
  wf::WignerState s = wf::identity_state(g);
  wf::BlochPropagator prop(g);
  const wf::BlochKernels k = wf::build_bloch_kernels(mexican_hat(), g, 0.01);
  for (int i = 0; i < 20; ++i) {
    prop.step(s, k);
    EXPECT_GE(wf::min_value(s), -1e-8 * wf::max_value(s));
  }
}

TEST(Gibbs, ZeroBetaIsIdentity) {
  const wf::PhaseGrid g = small_grid();
  const wf::GibbsResult r = wf::gibbs(oscillator(), g, 0.0, 0.01);
  EXPECT_EQ(r.state.w, wf::identity_state(g).w);
  EXPECT_NEAR(std::exp(r.state.log_norm), g.area() / (2.0 * std::numbers::pi), 1e-9);
}

TEST(Gibbs, OscillatorFirstOrderAtBetaOne) {
  const wf::PhaseGrid g = small_grid();
  const wf::GibbsResult r = wf::gibbs(oscillator(), g, 1.0, 1e-3);
  EXPECT_LE(wf::max_abs_diff(r.state.w, ho_gibbs(g, 1.0).w), 1e-4);
  EXPECT_DOUBLE_EQ(r.state.beta, 1.0);
}

TEST(Gibbs, PartitionFunctionBetaTwo) {
  const wf::PhaseGrid g = small_grid();
  const wf::GibbsResult r = wf::gibbs(oscillator(), g, 2.0, 1e-3);
  const double z = 0.5 / std::sinh(1.0);
  EXPECT_NEAR(std::exp(r.state.log_norm) * wf::trace_integral(r.state), z, 1e-3 * z);
}

TEST(Gibbs, StrangWithExtrapolationIsAccurate) {
  const wf::PhaseGrid g = small_grid();
  wf::GibbsOptions opt;
  opt.splitting = wf::Splitting::strang;
  opt.extrapolate = true;
  const wf::GibbsResult r = wf::gibbs(oscillator(), g, 2.0, 0.02, opt);
  EXPECT_LE(wf::max_abs_diff(r.state.w, ho_gibbs(g, 2.0).w), 1e-8);
  EXPECT_NEAR(std::exp(r.state.log_norm), 0.5 / std::sinh(1.0), 1e-8);
}

TEST(Gibbs, PartialFinalStep) {
  const wf::PhaseGrid g = small_grid();
  const wf::GibbsResult r = wf::gibbs(oscillator(), g, 0.105, 0.01);
  EXPECT_DOUBLE_EQ(r.state.beta, 0.105);
  const wf::GibbsResult whole = wf::gibbs(oscillator(), g, 0.105, 0.005);
  EXPECT_LE(wf::max_abs_diff(r.state.w, whole.state.w), 1e-5);
}

TEST(Gibbs, TrotterErrorIsFirstOrder) {
  const wf::PhaseGrid g = small_grid();
  const wf::WignerState exact = ho_gibbs(g, 2.0);
  const double e4 = wf::max_abs_diff(wf::gibbs(oscillator(), g, 2.0, 4e-3).state.w, exact.w);
  const double e2 = wf::max_abs_diff(wf::gibbs(oscillator(), g, 2.0, 2e-3).state.w, exact.w);
  EXPECT_NEAR(e4 / e2, 2.0, 0.4);
}

TEST(Gibbs, MexicanHatIsPositiveOnRing) {
  const wf::PhaseGrid g = wf::make_grid(128, 128, -10, 10, -10, 10);
  const wf::GibbsResult r = wf::gibbs(mexican_hat(), g, 1.0, 0.01);
  EXPECT_GE(wf::min_value(r.state), -1e-12 * wf::max_value(r.state));
  // The maximum sits at p = 0 near a potential minimum x = +-sqrt(0.05/0.06).
  std::size_t jmax = 0, kmax = 0;
  for (std::size_t j = 0; j < g.n_x(); ++j)
    for (std::size_t k = 0; k < g.n_p(); ++k)
      if (r.state.w(j, k) > r.state.w(jmax, kmax)) jmax = j, kmax = k;
  EXPECT_NEAR(g.p(kmax), 0.0, g.dp());
  EXPECT_LT(std::abs(g.x(jmax)), 1.5);
}

TEST(Gibbs, EnergyDecreasesWhileCooling) {
  const wf::PhaseGrid g = wf::make_grid(64, 64, -10, 10, -10, 10);
  const wf::HamiltonianSpec h = mexican_hat();
  const wf::SampledHamiltonian sh = wf::sample_hamiltonian(h, g);
  wf::BlochPropagator prop(g);
  const wf::BlochKernels k = wf::build_bloch_kernels(h, g, 0.01);
  wf::WignerState s = wf::identity_state(g);
  double last = wf::energy(s, sh);
  for (int i = 0; i < 200; ++i) {
    prop.step(s, k);
    const double e = wf::energy(s, sh);
    EXPECT_LE(e, last);
    last = e;
  }
}

TEST(Gibbs, BetaAdditivityIsBitExact) {
  const wf::PhaseGrid g = wf::make_grid(64, 64, -8, 8, -8, 8);
  const wf::HamiltonianSpec h = mexican_hat();
  const wf::BlochKernels k = wf::build_bloch_kernels(h, g, 0.01);
  wf::BlochPropagator prop(g);
  wf::WignerState split = wf::identity_state(g);
  prop.advance(split, k, 30);
  prop.advance(split, k, 20);
  const wf::GibbsResult straight = wf::gibbs(h, g, 0.5, 0.01);
  EXPECT_EQ(split.w, straight.state.w);
  EXPECT_EQ(split.log_norm, straight.state.log_norm);
}

TEST(Gibbs, SnapshotsMatchIndependentRuns) {
  const wf::PhaseGrid g = wf::make_grid(64, 64, -8, 8, -8, 8);
  const wf::HamiltonianSpec h = mexican_hat();
  const wf::GibbsResult r = wf::gibbs(h, g, 0.3, 0.01, {}, {0.1, 0.2, 0.0});
  ASSERT_EQ(r.snapshots.size(), 3u);
  EXPECT_EQ(r.snapshots[0].w, wf::gibbs(h, g, 0.1, 0.01).state.w);
  EXPECT_EQ(r.snapshots[1].w, wf::gibbs(h, g, 0.2, 0.01).state.w);
  EXPECT_EQ(r.snapshots[2].w, wf::identity_state(g).w);
  EXPECT_THROW(wf::gibbs(h, g, 0.3, 0.01, {}, {0.105}), wf::ConfigError);
  EXPECT_THROW(wf::gibbs(h, g, 0.3, 0.01, {}, {0.5}), wf::ConfigError);
}

TEST(Gibbs, RejectsBadArguments) {
  const wf::PhaseGrid g = wf::make_grid(8, 8, -4, 4, -4, 4);
  EXPECT_THROW(wf::gibbs(oscillator(), g, -1.0, 0.1), wf::ConfigError);
  EXPECT_THROW(wf::gibbs(oscillator(), g, 1.0, 0.0), wf::ConfigError);
}
