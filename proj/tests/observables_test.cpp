#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"

using namespace testing_helpers;

TEST(Energy, OscillatorGroundGaussian) {
  const wf::PhaseGrid g = small_grid();
  EXPECT_NEAR(wf::energy(gaussian(g), oscillator()), 0.5, 1e-8);
}

TEST(Energy, AnalyticGibbsBetaTwo) {
  const wf::PhaseGrid g = small_grid();
  EXPECT_NEAR(wf::energy(ho_gibbs(g, 2.0), oscillator()), 0.5 / std::tanh(1.0), 1e-4);
}

TEST(Energy, FreeMomentumGaussian) {
  const wf::PhaseGrid g = small_grid();
  wf::WignerState s = sampled_state(g, [](double, double p) { return std::exp(-p * p); });
  wf::normalize(s);
  EXPECT_NEAR(wf::energy(s, wf::make_hamiltonian("0", "p^2/2")), 0.25, 1e-8);
}

TEST(Purity, PureGaussian) {
  EXPECT_NEAR(wf::purity(gaussian(small_grid(), 0.5, -1.0)), 1.0, 1e-10);
}

TEST(Purity, AnalyticGibbsBetaTwo) {
  EXPECT_NEAR(wf::purity(ho_gibbs(small_grid(), 2.0)), std::tanh(1.0), 1e-4);
}

TEST(Purity, ConstantState) {
  const wf::PhaseGrid g = wf::make_grid(16, 8, -2, 2, -1, 3);
  const wf::WignerState s = wf::identity_state(g);
  const double trace = wf::trace_integral(s);
  double direct = 0.0;
  for (double v : s.w) direct += v * v;
  direct *= 2.0 * std::numbers::pi * g.dx() * g.dp();
  EXPECT_NEAR(wf::purity(s), direct, 1e-15);
  EXPECT_NEAR(wf::purity(s), 2.0 * std::numbers::pi * trace * trace / g.area(), 1e-15);
}

TEST(Marginals, SeparableState) {
  const wf::PhaseGrid g = wf::make_grid(32, 16, -3, 3, -2, 2);
  auto f = [](double x) { return 1.0 + 0.5 * std::sin(x); };
  auto h = [](double p) { return std::exp(-p * p); };
  const wf::WignerState s = sampled_state(g, [&](double x, double p) { return f(x) * h(p); });
  const wf::Marginals m = wf::marginals(s);
  const double ratio = m.x[0] / f(g.x(0));
  for (std::size_t j = 0; j < g.n_x(); ++j) EXPECT_NEAR(m.x[j], ratio * f(g.x(j)), 1e-13);
  double sx = 0.0, sp = 0.0;
  for (double v : m.x) sx += v * g.dx();
  for (double v : m.p) sp += v * g.dp();
  EXPECT_NEAR(sx, wf::trace_integral(s), 1e-12);
  EXPECT_NEAR(sp, wf::trace_integral(s), 1e-12);
}

TEST(Marginals, OscillatorGroundDensity) {
  const wf::PhaseGrid g = small_grid();
  const wf::Marginals m = wf::marginals(gaussian(g));
  for (std::size_t j = 0; j < g.n_x(); ++j)
    EXPECT_NEAR(m.x[j], std::exp(-g.x(j) * g.x(j)) / std::sqrt(std::numbers::pi), 1e-8);
}

TEST(Moments, MinimumUncertainty) {
  const wf::Moments mo = wf::moments(gaussian(small_grid()));
  EXPECT_NEAR(mo.sigma_x, 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(mo.sigma_p, 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(mo.sigma_x * mo.sigma_p, 0.5, 1e-10);
}

TEST(Moments, DisplacedGaussian) {
  const wf::Moments mo = wf::moments(gaussian(small_grid(), 2.0, 0.0));
  EXPECT_NEAR(mo.mean_x, 2.0, 1e-8);
  EXPECT_NEAR(mo.mean_p, 0.0, 1e-12);
}

TEST(Moments, GibbsUncertaintyProduct) {
  const wf::Moments mo = wf::moments(ho_gibbs(small_grid(), 2.0));
  EXPECT_NEAR(mo.sigma_x * mo.sigma_p, 0.5 / std::tanh(1.0), 1e-4);
}

TEST(Moments, NegativeVarianceIsAnError) {
  const wf::PhaseGrid g = wf::make_grid(8, 8, -4, 4, -4, 4);
  wf::WignerState s(g);
  // Positive mass at the centre and negative mass at the edges gives a
  // negative second moment.
  for (std::size_t k = 0; k < 8; ++k) {
    s.w(4, k) = 1.0;
    s.w(0, k) = -0.2;
    s.w(7, k) = -0.2;
  }
  EXPECT_THROW(wf::moments(s), wf::NumericalError);
}

TEST(Observe, ReportIsConsistent) {
  const wf::PhaseGrid g = small_grid();
  const wf::WignerState s = ho_gibbs(g, 1.0);
  const wf::ObservablesReport r = wf::observe(s, oscillator());
  EXPECT_NEAR(r.trace, 1.0, 1e-12);
  EXPECT_EQ(r.energy, wf::energy(s, oscillator()));
  EXPECT_EQ(r.purity, wf::purity(s));
  EXPECT_EQ(r.marginal.x.size(), g.n_x());
  EXPECT_EQ(r.marginal.p.size(), g.n_p());
  EXPECT_GE(r.sigma_x, 0.0);
  EXPECT_NEAR(r.z_estimate, r.trace, 1e-15);
}
