#include <gtest/gtest.h>

#include <cmath>

#include "gkdv/errors.hpp"
#include "gkdv/hopf.hpp"

using namespace gkdv;

TEST(CriticalTime, NegSineBreaksAtOne) {
  const Grid g = make_grid(256, 2.0 * M_PI);
  const CriticalTime tc = critical_time(InitialDatum::neg_sine(), kdv_model(), g);
  EXPECT_NEAR(tc.t_c, 1.0, 1e-9);
  EXPECT_NEAR(std::abs(tc.arg_xi), M_PI, 1e-6);
  EXPECT_TRUE(tc.finite());
}

TEST(CriticalTime, GaussianClosedForm) {
  // max of phi' for A exp(-x^2/W^2) is A sqrt(2) exp(-1/2) / W
  const Grid g = make_grid(1024, 40.0);
  for (double amp : {0.5, 1.0, 2.0}) {
    const double expected = 2.0 * std::exp(0.5) / (amp * std::sqrt(2.0));
    EXPECT_NEAR(critical_time(InitialDatum::gaussian(amp, 2.0), kdv_model(), g).t_c, expected, 1e-9 * expected);
  }
}

TEST(CriticalTime, MonotoneDataBreaksAtInverseSlope) {
  const Grid g = make_grid(512, 16.0);
  EXPECT_NEAR(critical_time(InitialDatum::tanh_profile(2.0, 1.0), kdv_model(), g).t_c, 0.5, 1e-9);
  EXPECT_FALSE(critical_time(InitialDatum::tanh_profile(-1.0, 1.0), kdv_model(), g).finite());
}

TEST(CriticalTime, SampledDatumAgreesWithAnalytic) {
  const Grid g = make_grid(512, 40.0);
  const InitialDatum phi = InitialDatum::gaussian(1.0, 2.0);
  EXPECT_NEAR(critical_time(phi.sample(g), kdv_model()).t_c, critical_time(phi, kdv_model(), g).t_c, 1e-8);
}

TEST(SolveHopf, ImplicitEquationResidual) {
  const Grid g = make_grid(256, 2.0 * M_PI);
  const InitialDatum phi = InitialDatum::neg_sine();
  const HopfSolution s = solve_hopf(phi, kdv_model(), 0.5, g);
  for (std::size_t j = 0; j < g.n_points(); ++j) {
    EXPECT_NEAR(s.xi[j] - 0.5 * phi.phi(s.xi[j]), g.point(j), 1e-12);
    EXPECT_DOUBLE_EQ(s.v0[j], phi.phi(s.xi[j]));
  }
  EXPECT_GT(s.max_newton_iterations, 0);
}

TEST(SolveHopf, TimeZeroReturnsData) {
  const Grid g = make_grid(128, 20.0);
  const InitialDatum phi = InitialDatum::gaussian(1.0, 2.0);
  const HopfSolution s = solve_hopf(phi, kdv_model(), 0.0, g);
  const Field exact = phi.sample(g);
  for (std::size_t j = 0; j < g.n_points(); ++j) EXPECT_EQ(s.v0[j], exact[j]);
}

TEST(SolveHopf, SatisfiesConservationLaw) {
  // v_t = a(v) v_x checked with centred differences in time
  const Grid g = make_grid(512, 40.0);
  const FluxModel model = quadratic_model();
  const InitialDatum phi = InitialDatum::gaussian(1.0, 2.0);
  const double t = 1.0, h = 1e-4;
  const HopfSolution s = solve_hopf(phi, model, t, g);
  const HopfSolution sp = solve_hopf(phi, model, t + h, g);
  const HopfSolution sm = solve_hopf(phi, model, t - h, g);
  for (std::size_t j = 0; j < g.n_points(); ++j) {
    const double vt = (sp.v0[j] - sm.v0[j]) / (2 * h);
    EXPECT_NEAR(vt, model.a(s.v0[j]) * s.v0_x[j], 1e-7);
  }
}

TEST(SolveHopf, ChainRuleDerivativesMatchSpectral) {
  const Grid g = make_grid(1024, 40.0);
  const HopfSolution s = solve_hopf(InitialDatum::gaussian(1.0, 2.0), kdv_model(), 1.0, g);
  const Field vx = spectral_derivative(s.v0, 1);
  const Field vxx = spectral_v0_xx(s);
  const Field vxxx = spectral_derivative(s.v0, 3);
  for (std::size_t j = 0; j < g.n_points(); ++j) {
    EXPECT_NEAR(s.v0_x[j], vx[j], 1e-10);
    EXPECT_NEAR(s.v0_xx[j], vxx[j], 1e-9);
    EXPECT_NEAR(s.v0_xxx[j], vxxx[j], 1e-8);
  }
}

TEST(SolveHopf, DenominatorIsInverseJacobian) {
  const Grid g = make_grid(256, 40.0);
  const FluxModel model = quadratic_model();
  const HopfSolution s = solve_hopf(InitialDatum::gaussian(1.5, 2.0), model, 0.8, g);
  const Field d = denominator_field(s, model);
  for (std::size_t j = 0; j < g.n_points(); ++j) EXPECT_NEAR(d[j] * s.jacobian[j], 1.0, 1e-13);
}

TEST(SolveHopf, PastBreakingIsRefused) {
  const Grid g = make_grid(128, 2.0 * M_PI);
  EXPECT_THROW(solve_hopf(InitialDatum::neg_sine(), kdv_model(), 1.2, g), PastBreaking);
  EXPECT_THROW(solve_hopf(InitialDatum::neg_sine(), kdv_model(), 0.98, g), PastBreaking);
  HopfOptions closer;
  closer.max_fraction = 0.995;
  EXPECT_NO_THROW(solve_hopf(InitialDatum::neg_sine(), kdv_model(), 0.98, g, closer));
}

TEST(HopfFlow, WarmStartAgreesWithColdSolve) {
  const Grid g = make_grid(256, 40.0);
  const InitialDatum phi = InitialDatum::gaussian(1.0, 2.0);
  HopfFlow flow(phi, kdv_model(), g);
  for (double t : {0.2, 0.6, 1.1, 1.5}) {
    const HopfSolution warm = flow.at(t);
    const HopfSolution cold = solve_hopf(phi, kdv_model(), t, g);
    for (std::size_t j = 0; j < g.n_points(); ++j) EXPECT_NEAR(warm.v0[j], cold.v0[j], 1e-13);
  }
  EXPECT_NEAR(flow.critical().t_c, 2.0 * std::exp(0.5) / std::sqrt(2.0), 1e-9);
}

TEST(InitialDatum, AnalyticDerivativesAreConsistent) {
  const double h = 1e-5;
  for (const InitialDatum& d : {InitialDatum::gaussian(1.2, 1.5, 0.3), InitialDatum::neg_sine(0.7),
                                InitialDatum::soliton(1.3, 0.2), InitialDatum::tanh_profile(0.8, 2.0, 0.1)}) {
    for (double x : {-1.3, 0.0, 0.9}) {
      EXPECT_NEAR(d.dphi(x), (d.phi(x + h) - d.phi(x - h)) / (2 * h), 1e-8 * (1 + std::abs(d.dphi(x)))) << d.name;
      EXPECT_NEAR(d.d2phi(x), (d.dphi(x + h) - d.dphi(x - h)) / (2 * h), 1e-8 * (1 + std::abs(d.d2phi(x)))) << d.name;
      EXPECT_NEAR(d.d3phi(x), (d.d2phi(x + h) - d.d2phi(x - h)) / (2 * h), 1e-8 * (1 + std::abs(d.d3phi(x)))) << d.name;
    }
  }
}

TEST(InitialDatum, FromFieldInterpolates) {
  const Grid g = make_grid(128, 2.0 * M_PI);
  const InitialDatum d = InitialDatum::from_field(InitialDatum::neg_sine().sample(g));
  EXPECT_NEAR(d.phi(0.3), -std::sin(0.3), 1e-13);
  EXPECT_NEAR(d.dphi(0.3), -std::cos(0.3), 1e-12);
  EXPECT_NEAR(d.d3phi(0.3), std::cos(0.3), 1e-10);
}
