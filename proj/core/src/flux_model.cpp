#include "gkdv/flux_model.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "gkdv/errors.hpp"

namespace gkdv {

namespace {

double horner(const std::vector<double>& coeffs, double u) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
  return acc;
}

std::vector<double> derivative(const std::vector<double>& coeffs) {
  if (coeffs.size() <= 1) return {0.0};
  std::vector<double> d(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs[i];
  return d;
}

ScalarFn poly_fn(std::vector<double> coeffs) {
  return [c = std::move(coeffs)](double u) { return horner(c, u); };
}

// 20-point Gauss-Legendre rule on [-1, 1], nodes found by Newton iteration on P_20.
struct GaussLegendre {
  static constexpr int kOrder = 20;
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};

  GaussLegendre() {
    for (int i = 0; i < kOrder; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= kOrder; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  template <class F>
  double integrate(double lo, double hi, F&& f) const {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (int i = 0; i < kOrder; ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return half * sum;
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

void require_nondegenerate(double da) {
  if (da == 0.0) throw DegenerateFlux("map_coefficients: a'(u) = 0, c = alpha/a' undefined");
}

}  // namespace

FluxModel FluxModel::polynomial(std::string name, std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  FluxModel m;
  m.name = std::move(name);
  auto d1 = derivative(coeffs);
  auto d2 = derivative(d1);
  auto d3 = derivative(d2);
  auto d4 = derivative(d3);
  std::vector<double> h(coeffs.size() + 2, 0.0);
  std::vector<double> prim(coeffs.size() + 2, 0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double di = static_cast<double>(i);
    h[i + 2] = coeffs[i] / ((di + 1.0) * (di + 2.0));
    prim[i + 2] = coeffs[i] / (di + 2.0);
  }
  m.a = poly_fn(coeffs);
  m.da = poly_fn(std::move(d1));
  m.d2a = poly_fn(std::move(d2));
  m.d3a = poly_fn(std::move(d3));
  m.d4a = poly_fn(std::move(d4));
  m.h = poly_fn(std::move(h));
  m.A = poly_fn(std::move(prim));
  return m;
}

FluxModel FluxModel::custom(std::string name, ScalarFn a, ScalarFn da, ScalarFn d2a, ScalarFn d3a,
                            ScalarFn d4a) {
  FluxModel m;
  m.name = std::move(name);
  m.a = a;
  m.da = std::move(da);
  m.d2a = std::move(d2a);
  m.d3a = std::move(d3a);
  m.d4a = std::move(d4a);
  m.h = [a](double u) {
    return gauss_legendre().integrate(0.0, u, [&](double v) { return (u - v) * a(v); });
  };
  m.A = [a](double u) { return gauss_legendre().integrate(0.0, u, [&](double v) { return v * a(v); }); };
  return m;
}

FluxModel kdv_model() { return FluxModel::polynomial("kdv", {0.0, 1.0}); }
FluxModel quadratic_model() { return FluxModel::polynomial("quadratic", {0.0, 0.0, 0.5}); }
FluxModel quartic_model() { return FluxModel::polynomial("quartic", {0.0, 0.0, 0.0, 0.0, 1.0}); }

FluxModel model_by_name(const std::string& name) {
  if (name == "kdv") return kdv_model();
  if (name == "quadratic") return quadratic_model();
  if (name == "quartic") return quartic_model();
  throw InvalidArgument("unknown flux model '" + name + "' (expected kdv, quadratic or quartic)");
}

DispersionParams::DispersionParams(std::vector<double> eps) : eps_(std::move(eps)) {
  if (eps_.empty() || eps_.size() > 2) {
    throw InvalidArgument("DispersionParams: need one or two coefficients");
  }
  for (double e : eps_) {
    if (!std::isfinite(e)) throw InvalidArgument("DispersionParams: coefficients must be finite");
  }
}

PerturbationData PerturbationData::constant_c(double c0) {
  auto zero = [](double) { return 0.0; };
  return {[c0](double) { return c0; }, zero, zero, zero, zero, zero};
}

PerturbationData PerturbationData::linear_c() {
  auto zero = [](double) { return 0.0; };
  return {[](double u) { return u; }, [](double) { return 1.0; }, zero, zero, zero, zero};
}

PerturbationData PerturbationData::zero() { return constant_c(0.0); }

MappedCoefficients map_coefficients(double alpha, double beta, const FluxModel& model, double u) {
  const double a1 = model.da(u);
  require_nondegenerate(a1);
  const double a2 = model.d2a(u);
  const double a3 = model.d3a(u);
  const double a4 = model.d4a(u);
  const double a1_2 = a1 * a1;
  const double a1_3 = a1_2 * a1;
  const double a1_4 = a1_3 * a1;
  const double a1_5 = a1_4 * a1;
  const double alpha2 = alpha * alpha;
  MappedCoefficients out{};
  out.c = alpha / a1;
  out.p = beta / (2.0 * a1) - 0.3 * alpha2 * a2 / a1_3;
  out.s = alpha2 * (0.4 * a2 * a2 * a2 / a1_5 - 0.35 * a2 * a3 / a1_4 + a4 / (24.0 * a1_3)) -
          beta / 12.0 * (a2 * a2 / a1_3 - a3 / a1_2);
  return out;
}

PerturbationData mapped_perturbation(double alpha, double beta, const FluxModel& model) {
  PerturbationData d;
  d.c = [alpha, model](double u) { return map_coefficients(alpha, 0.0, model, u).c; };
  d.dc = [alpha, model](double u) {
    const double a1 = model.da(u);
    require_nondegenerate(a1);
    return -alpha * model.d2a(u) / (a1 * a1);
  };
  d.d2c = [alpha, model](double u) {
    const double a1 = model.da(u);
    require_nondegenerate(a1);
    const double a2 = model.d2a(u);
    return alpha * (2.0 * a2 * a2 / (a1 * a1 * a1) - model.d3a(u) / (a1 * a1));
  };
  d.p = [alpha, beta, model](double u) { return map_coefficients(alpha, beta, model, u).p; };
  d.dp = [alpha, beta, model](double u) {
    const double a1 = model.da(u);
    require_nondegenerate(a1);
    const double a2 = model.d2a(u);
    const double a3 = model.d3a(u);
    return -beta * a2 / (2.0 * a1 * a1) -
           0.3 * alpha * alpha * (a3 / (a1 * a1 * a1) - 3.0 * a2 * a2 / (a1 * a1 * a1 * a1));
  };
  d.s = [alpha, beta, model](double u) { return map_coefficients(alpha, beta, model, u).s; };
  return d;
}

double hamiltonian_density(double u, double u_x, double u_xx, double eps, const FluxModel& model,
                           const PerturbationData& pert) {
  const double h0 = model.h(u);
  if (eps == 0.0) return h0;
  const double h3 = model.da(u);
  const double h4 = model.d2a(u);
  const double h5 = model.d3a(u);
  const double h6 = model.d4a(u);
  const double c = pert.c(u);
  const double c1 = pert.dc(u);
  const double c2 = pert.d2c(u);
  const double p = pert.p(u);
  const double p1 = pert.dp(u);
  const double s = pert.s(u);
  const double e2 = eps * eps;
  const double e4 = e2 * e2;
  const double ux2 = u_x * u_x;
  const double second = (p * h3 + 0.3 * c * c * h4) * u_xx * u_xx;
  const double quartic =
      (c * c2 / 8.0 * h4 + c * c1 / 8.0 * h5 + c * c / 24.0 * h6 + p1 / 6.0 * h4 + p / 6.0 * h5 - s * h3) *
      ux2 * ux2;
  return h0 - 0.5 * e2 * c * h3 * ux2 + e4 * (second - quartic);
}

Invariants gkdv_invariants(const Field& f, const FluxModel& model, const DispersionParams& eps) {
  const double dx = f.grid().spacing();
  Invariants inv;
  double hsum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    inv.mass += f[j];
    inv.momentum += 0.5 * f[j] * f[j];
    hsum += model.h(f[j]);
  }
  double dispersive = 0.0;
  for (std::size_t i = 0; i < eps.order(); ++i) {
    if (eps[i] == 0.0) continue;
    const int order = static_cast<int>(i) + 1;
    const Field d = spectral_derivative(f, order);
    double sq = 0.0;
    for (double v : d.samples()) sq += v * v;
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    dispersive += sign * 0.5 * eps[i] * sq;
  }
  inv.mass *= dx;
  inv.momentum *= dx;
  inv.energy = (hsum + dispersive) * dx;
  return inv;
}

}  // namespace gkdv
