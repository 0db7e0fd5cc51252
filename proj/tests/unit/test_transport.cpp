#include <gtest/gtest.h>

#include <cmath>

#include "gkdv/errors.hpp"
#include "gkdv/transport.hpp"

using namespace gkdv;

namespace {

double rel_l2(const Field& a, const Field& b) {
  return sobolev_norm(a - b, SobolevIndex(0.0)) / sobolev_norm(b, SobolevIndex(0.0));
}

double l2_dot(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s * a.grid().spacing();
}

// odd data -x exp(-x^2/4)
InitialDatum odd_bump() {
  return {"odd bump", [](double x) { return -x * std::exp(-x * x / 4.0); },
          [](double x) { return (x * x / 2.0 - 1.0) * std::exp(-x * x / 4.0); },
          [](double x) { return (1.5 * x - x * x * x / 4.0) * std::exp(-x * x / 4.0); },
          [](double x) { return (1.5 - 1.5 * x * x + x * x * x * x / 8.0) * std::exp(-x * x / 4.0); }};
}

}  // namespace

TEST(CoefficientSeries, ExactAtNodesAndForCubicsInTime) {
  const Grid g = make_grid(16, 1.0);
  auto cubic = [&](double t) {
    return Field::from_function(g, [t](double x) { return 1.0 + x * t - 2.0 * t * t + 0.5 * t * t * t; });
  };
  const CoefficientSeries s = sample_series(cubic, 1.0, 0.1);
  EXPECT_EQ(s.size(), 11u);
  EXPECT_NEAR(s.t_end(), 1.0, 1e-15);
  for (double t : {0.0, 0.05, 0.33, 0.71, 0.97, 1.0}) {
    const Field got = s.at(t);
    const Field want = cubic(t);
    for (std::size_t j = 0; j < g.n_points(); ++j) EXPECT_NEAR(got[j], want[j], 1e-13) << "t = " << t;
  }
  EXPECT_EQ(s.at(0.3)[3], s.snapshot(3)[3]);
}

TEST(TimeMesh, CoversIntervalWithBoundedStep) {
  const TimeMesh m = make_time_mesh(1.0, 0.3);
  EXPECT_EQ(m.steps, 4);
  EXPECT_DOUBLE_EQ(m.step, 0.25);
  EXPECT_EQ(make_time_mesh(1.0, 0.25).steps, 4);
  EXPECT_THROW(make_time_mesh(1.0, 0.0), InvalidArgument);
}

TEST(Transport, FirstKdvEquationMatchesClosedForm) {
  const Grid g = make_grid(1024, 40.0);
  HopfFlow flow(InitialDatum::gaussian(1.0, 2.0), kdv_model(), g);
  const double t = 0.5 * flow.critical().t_c;
  SolverConfig cfg;
  cfg.t_end = t;
  cfg.dt = 1e-3;
  std::vector<CoefficientSeries> lower{hopf_series(flow, t, cfg.dt)};
  const CoefficientSeries v1 = solve_transport_kdv(1, lower, cfg);
  const Field closed = v1_closed_form(flow.at(t), kdv_model(), PerturbationData::constant_c(1.0));
  EXPECT_LT(rel_l2(v1.back(), closed), 1e-6);
}

TEST(Transport, GeneralEquationMatchesClosedForm) {
  const Grid g = make_grid(1024, 40.0);
  const FluxModel m = FluxModel::polynomial("cubic", {0.0, 1.0, 0.3});
  const PerturbationData pert = PerturbationData::linear_c();
  HopfFlow flow(InitialDatum::gaussian(0.8, 2.0), m, g);
  SolverConfig cfg;
  cfg.t_end = 0.5 * flow.critical().t_c;
  cfg.dt = 1e-3;
  const CoefficientSeries v1 = solve_transport_general(flow, pert, cfg);
  EXPECT_LT(rel_l2(v1.back(), v1_closed_form(flow.at(cfg.t_end), m, pert)), 1e-6);
}

TEST(Transport, SecondCoefficientHasOddParity) {
  // For odd data, -u(-x; -eps) solves the same problem, so v^k(-x) = (-1)^(k+1) v^k(x).
  const Grid g = make_grid(1024, 40.0);
  HopfFlow flow(odd_bump(), kdv_model(), g);
  const ExpansionCoefficients e = kdv_expansion(flow, 2, 0.4, 2e-3, 9.0);
  ASSERT_EQ(e.fields.size(), 3u);
  const std::size_t n = g.n_points();
  const double scale1 = e.fields[1].max_abs();
  const double scale2 = e.fields[2].max_abs();
  ASSERT_GT(scale2, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    EXPECT_NEAR(e.fields[0][n - j], -e.fields[0][j], 1e-13);
    EXPECT_NEAR(e.fields[1][n - j], e.fields[1][j], 1e-10 * scale1);
    EXPECT_NEAR(e.fields[2][n - j], -e.fields[2][j], 1e-8 * scale2);
  }
}

TEST(ClosedForm, ZeroCouplingGivesZero) {
  const Grid g = make_grid(256, 40.0);
  const HopfSolution s = solve_hopf(InitialDatum::gaussian(1.0, 2.0), kdv_model(), 1.0, g);
  EXPECT_EQ(v1_closed_form(s, kdv_model(), PerturbationData::zero()).max_abs(), 0.0);
}

TEST(ClosedForm, VanishesAtTimeZero) {
  const Grid g = make_grid(256, 40.0);
  const HopfSolution s = solve_hopf(InitialDatum::gaussian(1.0, 2.0), quadratic_model(), 0.0, g);
  EXPECT_EQ(v1_closed_form(s, quadratic_model(), PerturbationData::linear_c()).max_abs(), 0.0);
}

TEST(ClosedForm, AnalyticRouteMatchesSpectralOnPeriodicData) {
  const Grid g = make_grid(1024, 40.0);
  const HopfSolution s = solve_hopf(InitialDatum::gaussian(1.0, 2.0), kdv_model(), 1.0, g);
  const PerturbationData pert = PerturbationData::linear_c();
  const Field a = v1_closed_form(s, kdv_model(), pert, DerivativeRoute::Analytic);
  const Field b = v1_closed_form(s, kdv_model(), pert, DerivativeRoute::Spectral);
  EXPECT_LT(rel_l2(a, b), 1e-10);
}

TEST(ClosedForm, RefusesNonPositiveDenominator) {
  const Grid g = make_grid(256, 40.0);
  HopfSolution s = solve_hopf(InitialDatum::gaussian(1.0, 2.0), kdv_model(), 1.0, g);
  s.t = 10.0;
  EXPECT_THROW(v1_closed_form(s, kdv_model(), PerturbationData::constant_c(1.0)), PastBreaking);
}

TEST(MonotoneFormula, RejectsNonmonotoneData) {
  const Grid g = make_grid(256, 40.0);
  const HopfSolution s = solve_hopf(InitialDatum::gaussian(1.0, 2.0), kdv_model(), 0.5, g);
  EXPECT_THROW(v1_monotone_formula(s, PerturbationData::constant_c(1.0)), NonmonotoneData);
}

TEST(MonotoneFormula, NonzeroAtTimeZeroForTanh) {
  // (1/2) d_x (phi'' / phi') with phi = tanh: phi''/phi' = -2 tanh, so v = -sech^2
  const Grid g = make_grid(512, 16.0);
  const HopfSolution s = solve_hopf(InitialDatum::tanh_profile(), kdv_model(), 0.0, g);
  const Field v = v1_monotone_formula(s, PerturbationData::constant_c(1.0), 1e-8, DerivativeRoute::Analytic);
  for (std::size_t j = 0; j < g.n_points(); j += 17) {
    const double ch = std::cosh(g.point(j));
    EXPECT_NEAR(v[j], -1.0 / (ch * ch), 1e-12);
  }
}

TEST(Ktilde, VariationalDerivativeGeneratesV1) {
  // d/deta K[v0 + eta psi_x] = int (dK/du) psi_x = -int v1 psi
  const Grid g = make_grid(1024, 40.0);
  const FluxModel m = kdv_model();
  const PerturbationData pert = PerturbationData::linear_c();
  const double t = 1.0;
  const HopfSolution s = solve_hopf(InitialDatum::gaussian(1.0, 2.0), m, t, g);
  const Field psi = Field::from_function(g, [](double x) { return std::exp(-(x - 0.7) * (x - 0.7)); });
  const Field dpsi = spectral_derivative(psi, 1);
  const double eta = 1e-4;
  const double dk = (ktilde_functional(s.v0 + eta * dpsi, t, m, pert) - ktilde_functional(s.v0 - eta * dpsi, t, m, pert)) /
                    (2 * eta);
  const Field v1 = v1_closed_form(s, m, pert);
  EXPECT_NEAR(dk, -l2_dot(v1, psi), 1e-7);
}

TEST(Ktilde, DomainErrorPastBreaking) {
  const Grid g = make_grid(256, 40.0);
  const Field f = InitialDatum::gaussian(1.0, 2.0).sample(g);
  EXPECT_THROW(ktilde_functional(f, -5.0, kdv_model(), PerturbationData::constant_c(1.0)), DomainError);
}

TEST(Expansion, TaylorWeightsUseFactorials) {
  const Grid g = make_grid(16, 1.0);
  ExpansionCoefficients e;
  e.order = 2;
  e.fields = {Field::from_function(g, [](double) { return 1.0; }), Field::from_function(g, [](double) { return 3.0; }),
              Field::from_function(g, [](double) { return 4.0; })};
  EXPECT_DOUBLE_EQ(taylor_reconstruct(e, 0.5)[0], 1.0 + 0.5 * 3.0 + 0.25 * 4.0 / 2.0);
  e.order = 1;
  EXPECT_DOUBLE_EQ(taylor_reconstruct(e, 0.5)[0], 2.5);
}

TEST(Expansion, HigherOrdersNeedKdvFlux) {
  const Grid g = make_grid(256, 40.0);
  HopfFlow flow(InitialDatum::gaussian(1.0, 2.0), quadratic_model(), g);
  EXPECT_THROW(kdv_expansion(flow, 2, 0.5, 1e-2, 9.0), InvalidArgument);
  EXPECT_EQ(kdv_expansion(flow, 0, 0.5, 1e-2, 3.0).fields.size(), 1u);
  EXPECT_TRUE(is_kdv_flux(kdv_model()));
  EXPECT_FALSE(is_kdv_flux(quadratic_model()));
}
