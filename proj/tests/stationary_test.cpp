#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"

using namespace testing_helpers;

namespace {

// First oscillator excited state: (1/(pi hbar)) (2 r - 1) exp(-r) with r = (x^2 + p^2)/hbar.
wf::WignerState ho_first_excited(const wf::PhaseGrid& g) {
  const double hbar = g.hbar();
  return sampled_state(g, [=](double x, double p) {
    const double r = (x * x + p * p) / hbar;
    return (2.0 * r - 1.0) * std::exp(-r) / (std::numbers::pi * hbar);
  });
}

}  // namespace

TEST(Validity, GaussianMixtureAndGibbs) {
  const wf::PhaseGrid g = small_grid();
  const wf::SolverConfig cfg;
  const wf::ValidityReport pure = wf::check_validity(gaussian(g), cfg);
  EXPECT_TRUE(pure.passed);
  EXPECT_NEAR(pure.purity, 1.0, 1e-10);
  EXPECT_NEAR(pure.uncertainty_product, 0.5, 1e-10);

  wf::WignerState mix(g);
  const wf::WignerState a = gaussian(g), b = ho_first_excited(g);
  for (std::size_t i = 0; i < mix.w.size(); ++i) mix.w.data()[i] = 0.5 * (a.w.data()[i] + b.w.data()[i]);
  EXPECT_NEAR(wf::check_validity(mix, cfg).purity, 0.5, 1e-10);

  EXPECT_NEAR(wf::check_validity(ho_gibbs(g, 2.0), cfg).purity, std::tanh(1.0), 1e-10);
}

TEST(Validity, SuperPureStateFails) {
  const wf::PhaseGrid g = small_grid();
  // A Gaussian squeezed below the uncertainty bound.
  wf::WignerState s = sampled_state(g, [](double x, double p) { return std::exp(-4.0 * (x * x + p * p)); });
  wf::normalize(s);
  const wf::ValidityReport r = wf::check_validity(s, wf::SolverConfig{});
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.purity, 1.0);
}

TEST(Projection, OrthogonalAndContainedStates) {
  const wf::PhaseGrid g = small_grid();
  const wf::WignerState w0 = gaussian(g), w1 = ho_first_excited(g);
  EXPECT_NEAR(wf::overlap(w0, w1), 0.0, 1e-10);

  EXPECT_THROW(wf::projected_out(w0, {w0}), wf::NumericalError);

  const wf::WignerState kept = wf::projected_out(w1, {w0});
  EXPECT_LE(wf::max_abs_diff(kept.w, w1.w), 1e-10);

  wf::WignerState mix(g);
  for (std::size_t i = 0; i < mix.w.size(); ++i)
    mix.w.data()[i] = 0.7 * w0.w.data()[i] + 0.3 * w1.w.data()[i];
  EXPECT_LE(wf::max_abs_diff(wf::projected_out(mix, {w0}).w, w1.w), 1e-8);
}

TEST(Projection, RequiresOrthogonalLowerStates) {
  const wf::PhaseGrid g = small_grid();
  EXPECT_THROW(wf::require_orthogonal({gaussian(g), gaussian(g, 0.5, 0.0)}), wf::ConfigError);
  EXPECT_NO_THROW(wf::require_orthogonal({gaussian(g), ho_first_excited(g)}));
  EXPECT_THROW(wf::excited_state(oscillator(), g, {}, {gaussian(g), gaussian(g, 0.5, 0.0)}),
               wf::ConfigError);
  EXPECT_THROW(wf::excited_state(oscillator(), g, {}, {}), wf::ConfigError);
}

TEST(Solver, OscillatorGroundAndFirstExcited) {
  const wf::PhaseGrid g = small_grid();
  const auto res = wf::stationary_states(oscillator(), g, {}, 2);
  ASSERT_EQ(res.size(), 2u);
  EXPECT_NEAR(res[0].energy, 0.5, 1e-6);
  EXPECT_NEAR(wf::purity(res[0].state), 1.0, 1e-6);
  EXPECT_LE(wf::max_abs_diff(res[0].state.w, gaussian(g).w), 1e-5);
  EXPECT_NEAR(res[1].energy, 1.5, 1e-5);
  EXPECT_NEAR(wf::purity(res[1].state), 1.0, 1e-5);
  EXPECT_LE(res[1].max_lower_overlap, 1e-8);
  EXPECT_NEAR(res[1].state.w(g.n_x() / 2, g.n_p() / 2), -1.0 / std::numbers::pi, 1e-5);
  EXPECT_TRUE(res[0].validity.passed);
  EXPECT_TRUE(res[1].validity.passed);
}

TEST(Solver, EnergyTraceStrictlyDecreases) {
  const wf::PhaseGrid g = wf::make_grid(64, 64, -10, 10, -10, 10);
  const wf::StationaryResult r = wf::ground_state(mexican_hat(), g);
  ASSERT_GE(r.energy_trace.size(), 2u);
  for (std::size_t i = 1; i < r.energy_trace.size(); ++i)
    EXPECT_LT(r.energy_trace[i], r.energy_trace[i - 1]);
  EXPECT_EQ(r.energy, r.energy_trace.back());
  EXPECT_EQ(r.accepted + 1, r.energy_trace.size());
  EXPECT_EQ(r.accepted + r.rejected, r.iterations);
  EXPECT_LT(r.final_dbeta, wf::SolverConfig{}.dbeta_min);
}

TEST(Solver, ReportsConvergenceFailure) {
  const wf::PhaseGrid g = wf::make_grid(64, 64, -10, 10, -10, 10);
  wf::SolverConfig cfg;
  cfg.max_iters = 3;
  try {
    wf::ground_state(mexican_hat(), g, cfg);
    FAIL();
  } catch (const wf::ConvergenceError& e) {
    EXPECT_FALSE(e.energy_trace().empty());
    EXPECT_NE(std::string(e.what()).find("max_iters"), std::string::npos);
  }
}

TEST(Solver, RejectsBadConfig) {
  const wf::PhaseGrid g = wf::make_grid(8, 8, -4, 4, -4, 4);
  wf::SolverConfig cfg;
  cfg.dbeta_init = -1.0;
  EXPECT_THROW(wf::ground_state(oscillator(), g, cfg), wf::ConfigError);
  cfg = {};
  cfg.dbeta_min = 2.0;
  EXPECT_THROW(wf::ground_state(oscillator(), g, cfg), wf::ConfigError);
}
