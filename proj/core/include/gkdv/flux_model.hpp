#pragma once

// The nonlinearity a(u) of u_t = a(u) u_x + sum_i eps_i d_x^{2i+1} u together
// with its Hamiltonian potential h (h'' = a), the order-eps^4 perturbation
// data (c, p, s) and the exact conserved quantities of the flow.

#include <functional>
#include <string>
#include <vector>

#include "gkdv/spectral.hpp"

namespace gkdv {

using ScalarFn = std::function<double(double)>;

/// a(u) with derivatives up to fourth order, the potential h with h'' = a and
/// the primitive A with A' = u a(u).
struct FluxModel {
  std::string name;
  ScalarFn a, da, d2a, d3a, d4a;
  ScalarFn h;
  ScalarFn A;

  /// a(u) = sum_i coeffs[i] u^i. h and A are integrated exactly with
  /// h(0) = h'(0) = 0 and A(0) = 0.
  static FluxModel polynomial(std::string name, std::vector<double> coeffs);

  /// Arbitrary smooth a given with its four derivatives. h and A are obtained
  /// by Gauss-Legendre quadrature of h(u) = int_0^u (u - v) a(v) dv and
  /// A(u) = int_0^u v a(v) dv.
  static FluxModel custom(std::string name, ScalarFn a, ScalarFn da, ScalarFn d2a, ScalarFn d3a,
                          ScalarFn d4a);
};

FluxModel kdv_model();        // a(u) = u
FluxModel quadratic_model();  // a(u) = u^2 / 2
FluxModel quartic_model();    // a(u) = u^4

/// Registry lookup: "kdv", "quadratic", "quartic". Throws InvalidArgument.
FluxModel model_by_name(const std::string& name);

/// Dispersion coefficients (eps_1, ..., eps_n) multiplying d_x^{2i+1}, n in {1, 2}.
class DispersionParams {
 public:
  explicit DispersionParams(std::vector<double> eps);
  static DispersionParams single(double eps1) { return DispersionParams({eps1}); }

  std::span<const double> values() const noexcept { return eps_; }
  std::size_t order() const noexcept { return eps_.size(); }
  double operator[](std::size_t i) const noexcept { return eps_[i]; }

 private:
  std::vector<double> eps_;
};

/// The free functions c(u), p(u), s(u) of the order-eps^4 normal form.
struct PerturbationData {
  ScalarFn c, dc, d2c;
  ScalarFn p, dp;
  ScalarFn s;

  static PerturbationData constant_c(double c0);
  /// c(u) = u, p = s = 0.
  static PerturbationData linear_c();
  static PerturbationData zero();
};

struct MappedCoefficients {
  double c;
  double p;
  double s;
};

/// Coefficients (c, p, s) under which u_t = a u_x + alpha eps^2 u_xxx +
/// beta eps^4 u_xxxxx coincides with the normal-form Hamiltonian flow.
/// Throws DegenerateFlux when a'(u) == 0.
MappedCoefficients map_coefficients(double alpha, double beta, const FluxModel& model, double u);

/// The same map as functions of u, including the derivatives c', c'', p'
/// needed by the transport equations.
PerturbationData mapped_perturbation(double alpha, double beta, const FluxModel& model);

/// Normal-form Hamiltonian density through order eps^4, h-derivatives taken
/// from a-derivatives (h''' = a', ..., h^(6) = a'''').
double hamiltonian_density(double u, double u_x, double u_xx, double eps, const FluxModel& model,
                           const PerturbationData& pert);

struct Invariants {
  double mass = 0.0;
  double momentum = 0.0;
  double energy = 0.0;
};

/// mass = int f, momentum = int f^2/2,
/// energy = int [h(f) + sum_i (-1)^i (eps_i/2) (d_x^i f)^2]  (periodic trapezoid rule).
Invariants gkdv_invariants(const Field& f, const FluxModel& model, const DispersionParams& eps);

}  // namespace gkdv
