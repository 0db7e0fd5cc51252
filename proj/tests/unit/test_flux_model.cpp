#include <gtest/gtest.h>

#include <cmath>

#include "gkdv/errors.hpp"
#include "gkdv/flux_model.hpp"
#include "gkdv/spectral.hpp"

using namespace gkdv;

namespace {

// Fourth-order centred difference, the oracle for every derivative identity below.
double fd(const ScalarFn& f, double u, double h = 1e-3) {
  return (f(u - 2 * h) - 8 * f(u - h) + 8 * f(u + h) - f(u + 2 * h)) / (12 * h);
}

}  // namespace

TEST(FluxModel, PolynomialPotentialsSatisfyDefiningIdentities) {
  const FluxModel m = FluxModel::polynomial("p", {0.3, -1.0, 0.5, 2.0});
  for (double u : {-1.2, -0.1, 0.4, 1.7}) {
    auto dh = [&](double v) { return fd(m.h, v); };
    EXPECT_NEAR(fd(dh, u), m.a(u), 1e-6);
    EXPECT_NEAR(fd(m.A, u), u * m.a(u), 1e-9);
    EXPECT_NEAR(fd(m.a, u), m.da(u), 1e-9);
    EXPECT_NEAR(fd(m.da, u), m.d2a(u), 1e-9);
    EXPECT_NEAR(fd(m.d2a, u), m.d3a(u), 1e-9);
  }
  EXPECT_EQ(m.h(0.0), 0.0);
  EXPECT_EQ(m.A(0.0), 0.0);
}

TEST(FluxModel, BuiltinsMatchClosedForms) {
  const FluxModel kdv = kdv_model();
  const FluxModel quad = quadratic_model();
  const FluxModel quart = quartic_model();
  const double u = 1.3;
  EXPECT_DOUBLE_EQ(kdv.h(u), u * u * u / 6.0);
  EXPECT_DOUBLE_EQ(kdv.A(u), u * u * u / 3.0);
  EXPECT_DOUBLE_EQ(quad.a(u), 0.5 * u * u);
  EXPECT_DOUBLE_EQ(quad.h(u), std::pow(u, 4) / 24.0);
  EXPECT_DOUBLE_EQ(quart.d4a(u), 24.0);
  EXPECT_DOUBLE_EQ(model_by_name("quartic").a(u), std::pow(u, 4));
  EXPECT_THROW(model_by_name("burgers"), InvalidArgument);
}

TEST(FluxModel, CustomQuadratureMatchesExactPotentials) {
  const FluxModel exact = quadratic_model();
  const FluxModel custom = FluxModel::custom(
      "q", [](double u) { return 0.5 * u * u; }, [](double u) { return u; }, [](double) { return 1.0; },
      [](double) { return 0.0; }, [](double) { return 0.0; });
  for (double u : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
    EXPECT_NEAR(custom.h(u), exact.h(u), 1e-14);
    EXPECT_NEAR(custom.A(u), exact.A(u), 1e-14);
  }
}

TEST(Dispersion, Validation) {
  EXPECT_THROW(DispersionParams({}), InvalidArgument);
  EXPECT_THROW(DispersionParams({1.0, 2.0, 3.0}), InvalidArgument);
  EXPECT_THROW(DispersionParams({std::nan("")}), InvalidArgument);
  const DispersionParams d({0.1, -0.2});
  EXPECT_EQ(d.order(), 2u);
  EXPECT_DOUBLE_EQ(d[1], -0.2);
}

TEST(CoefficientMap, KdvIsIdentityMap) {
  for (double u : {-3.0, 0.0, 0.5, 10.0}) {
    const MappedCoefficients m = map_coefficients(1.0, 0.0, kdv_model(), u);
    EXPECT_EQ(m.c, 1.0);
    EXPECT_EQ(m.p, 0.0);
    EXPECT_EQ(m.s, 0.0);
  }
}

TEST(CoefficientMap, QuadraticFluxClosedForm) {
  // a = u^2/2: a' = u, a'' = 1, a''' = a'''' = 0.
  const double alpha = 1.5, beta = 0.4;
  for (double u : {0.5, 1.0, 2.0}) {
    const MappedCoefficients m = map_coefficients(alpha, beta, quadratic_model(), u);
    EXPECT_NEAR(m.c, alpha / u, 1e-15);
    EXPECT_NEAR(m.p, beta / (2 * u) - 0.3 * alpha * alpha / std::pow(u, 3), 1e-14);
    EXPECT_NEAR(m.s, 0.4 * alpha * alpha / std::pow(u, 5) - beta / (12 * std::pow(u, 3)), 1e-14);
  }
}

TEST(CoefficientMap, HomogeneityInAlphaAndBeta) {
  // c is linear in alpha; p and s are of the form beta X + alpha^2 Y.
  const FluxModel m = FluxModel::polynomial("p", {0.0, 1.0, 0.3, 0.1});
  const double u = 0.8;
  const MappedCoefficients a1 = map_coefficients(1.0, 0.0, m, u);
  const MappedCoefficients a2 = map_coefficients(2.0, 0.0, m, u);
  const MappedCoefficients b1 = map_coefficients(0.0, 1.0, m, u);
  const MappedCoefficients mix = map_coefficients(2.0, 3.0, m, u);
  EXPECT_NEAR(a2.c, 2.0 * a1.c, 1e-15);
  EXPECT_NEAR(a2.p, 4.0 * a1.p, 1e-14);
  EXPECT_NEAR(a2.s, 4.0 * a1.s, 1e-14);
  EXPECT_NEAR(mix.p, 4.0 * a1.p + 3.0 * b1.p, 1e-14);
  EXPECT_NEAR(mix.s, 4.0 * a1.s + 3.0 * b1.s, 1e-14);
}

TEST(CoefficientMap, DegenerateFluxThrows) {
  EXPECT_THROW(map_coefficients(1.0, 0.0, quadratic_model(), 0.0), DegenerateFlux);
  EXPECT_THROW(mapped_perturbation(1.0, 0.0, quadratic_model()).dc(0.0), DegenerateFlux);
}

TEST(CoefficientMap, DerivativesMatchFiniteDifferences) {
  const FluxModel m = FluxModel::polynomial("p", {0.2, 1.0, 0.4, -0.3});
  const PerturbationData d = mapped_perturbation(0.7, -0.4, m);
  for (double u : {-0.5, 0.3, 0.9}) {
    EXPECT_NEAR(d.dc(u), fd(d.c, u, 1e-4), 1e-8 * std::abs(d.dc(u)));
    EXPECT_NEAR(d.d2c(u), fd(d.dc, u, 1e-4), 1e-8 * std::abs(d.d2c(u)));
    EXPECT_NEAR(d.dp(u), fd(d.p, u, 1e-4), 1e-8 * std::abs(d.dp(u)));
  }
}

TEST(Hamiltonian, ReducesToKdvEnergyDensity) {
  const FluxModel kdv = kdv_model();
  const PerturbationData d = mapped_perturbation(1.0, 0.0, kdv);
  const double u = 0.6, ux = -1.1, uxx = 0.4, eps = 0.3;
  EXPECT_NEAR(hamiltonian_density(u, ux, uxx, eps, kdv, d), u * u * u / 6.0 - 0.5 * eps * eps * ux * ux, 1e-15);
  EXPECT_EQ(hamiltonian_density(u, ux, uxx, 0.0, kdv, d), kdv.h(u));
}

TEST(Hamiltonian, SecondOrderTermIsMinusHalfCAprime) {
  const FluxModel m = quadratic_model();
  const PerturbationData d = PerturbationData::linear_c();
  const double u = 1.4, ux = 0.7, eps = 1e-3;
  const double got = (hamiltonian_density(u, ux, 0.0, eps, m, d) - m.h(u)) / (eps * eps);
  EXPECT_NEAR(got, -0.5 * u * m.da(u) * ux * ux, 1e-6);
}

TEST(Invariants, SingleModeClosedForm) {
  const Grid g = make_grid(64, 2.0 * M_PI);
  const double b = 0.5, eps = 0.2;
  const Field f = Field::from_function(g, [b](double x) { return 1.0 + b * std::cos(x); });
  const Invariants inv = gkdv_invariants(f, kdv_model(), DispersionParams({eps}));
  const double L = g.length();
  EXPECT_NEAR(inv.mass, L, 1e-13);
  EXPECT_NEAR(inv.momentum, 0.5 * L * (1.0 + b * b / 2.0), 1e-13);
  EXPECT_NEAR(inv.energy, L * (1.0 + 1.5 * b * b) / 6.0 - 0.5 * eps * b * b * L / 2.0, 1e-13);
}

TEST(Invariants, FifthOrderTermHasPositiveSign) {
  const Grid g = make_grid(64, 2.0 * M_PI);
  const Field f = Field::from_function(g, [](double x) { return std::sin(2 * x); });
  const Invariants i1 = gkdv_invariants(f, FluxModel::polynomial("zero", {0.0}), DispersionParams({0.0, 1.0}));
  // (1/2) int (f_xx)^2 = (1/2) * 16 * pi
  EXPECT_NEAR(i1.energy, 8.0 * M_PI, 1e-12);
}
