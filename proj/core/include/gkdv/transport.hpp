#pragma once

// Coefficients of the small-dispersion expansion u(eps) ~ sum_k eps^k v^k / k!
// before the gradient catastrophe: numerical integration of the linear
// transport equations, the closed-form first correction valid for arbitrary
// data, the monotone-only quasi-Miura formula and the generating functional.

#include <functional>
#include <span>
#include <vector>

#include "gkdv/flux_model.hpp"
#include "gkdv/hopf.hpp"
#include "gkdv/solver.hpp"

namespace gkdv {

/// Fields stored on the uniform time mesh t_i = i * step, i = 0..count-1,
/// evaluated in between by 4-point cubic Lagrange interpolation.
class CoefficientSeries {
 public:
  CoefficientSeries(double step, std::vector<Field> snapshots);

  Field at(double t) const;
  double step() const noexcept { return step_; }
  double t_end() const noexcept { return step_ * static_cast<double>(snapshots_.size() - 1); }
  std::size_t size() const noexcept { return snapshots_.size(); }
  const Field& snapshot(std::size_t i) const { return snapshots_.at(i); }
  const Field& back() const { return snapshots_.back(); }

 private:
  double step_;
  std::vector<Field> snapshots_;
};

/// Uniform mesh covering [0, t_end] with spacing <= dt.
struct TimeMesh {
  int steps;
  double step;
};
TimeMesh make_time_mesh(double t_end, double dt);

/// Samples fn on the mesh of (t_end, dt).
CoefficientSeries sample_series(const std::function<Field(double)>& fn, double t_end, double dt);

/// v^0 on the mesh, from the characteristics.
CoefficientSeries hopf_series(HopfFlow& flow, double t_end, double dt);

/// KdV (a = u) hierarchy, k >= 1:
///   v^k_t = sum_{j=0}^{k} C(k,j) v^j v^{k-j}_x + k v^{k-1}_xxx,  v^k(0) = 0.
/// lower holds v^0 .. v^{k-1} on meshes covering [0, cfg.t_end]. RK4 with
/// step cfg.dt. Throws ResolutionError if v^k(t_end) carries more than 1e-6 of
/// its L2 norm in the modes removed by the 2/3 rule.
CoefficientSeries solve_transport_kdv(int k, std::span<const CoefficientSeries> lower, const SolverConfig& cfg);

/// First transport equation for general (a, c):
///   v^1_t = d_x( a v^1 + c a' v0_xx + (c a'' + c' a') (v0_x)^2 / 2 ),  v^1(0) = 0,
/// with v^0 and its derivatives taken from the characteristics at every stage.
CoefficientSeries solve_transport_general(HopfFlow& flow, const PerturbationData& pert, const SolverConfig& cfg);

/// How the outer x-derivative of a pointwise expression is taken. Spectral
/// needs periodic data; Analytic propagates derivatives through the chain rule
/// (uses v0_xxx) and works on any grid.
enum class DerivativeRoute { Spectral, Analytic };

/// v^1 = (t/2) d_x [ ((c a')' v0_x^2 + 2 c a' v0_xx + t c a'^2 v0_x v0_xx + t c' a'^2 v0_x^3)
///                   / (1 + t a' v0_x)^2 ].
/// Throws PastBreaking if the denominator is not positive.
Field v1_closed_form(const HopfSolution& sol, const FluxModel& model, const PerturbationData& pert,
                     DerivativeRoute route = DerivativeRoute::Spectral);

/// v^1 = (1/2) d_x ( c(v0) v0_xx / v0_x + c'(v0) v0_x ). Requires |v0_x| >= floor
/// everywhere, otherwise throws NonmonotoneData.
Field v1_monotone_formula(const HopfSolution& sol, const PerturbationData& pert, double floor = 1e-8,
                          DerivativeRoute route = DerivativeRoute::Spectral);

/// K_t[f] = -(1/2) int c(f) f_x log(1 + t a'(f) f_x) dx. Throws DomainError
/// when the logarithm's argument is not positive.
double ktilde_functional(const Field& f, double t, const FluxModel& model, const PerturbationData& pert);

/// v^0 .. v^N at a common time. fields[k] is the k-th eps-derivative of the
/// solution at eps = 0, so the Taylor coefficient is fields[k] / k!.
struct ExpansionCoefficients {
  int order = 0;
  double t = 0.0;
  double sobolev_budget = 0.0;  // v^k is tracked in H^{s - 3k}
  std::vector<Field> fields;
};

/// sum_{k <= N} eps^k v^k / k!.
Field taylor_reconstruct(const ExpansionCoefficients& coeffs, double eps);

/// True if the model is a(u) = u (checked on sample points).
bool is_kdv_flux(const FluxModel& model);

/// Builds v^0 .. v^N at time t for u_t = a(u) u_x + eps u_xxx. v^1 comes from
/// the closed form with c = 1/a'; N >= 2 requires a(u) = u and integrates the
/// hierarchy with RK4 at step dt.
ExpansionCoefficients kdv_expansion(HopfFlow& flow, int order, double t, double dt, double sobolev_budget);

}  // namespace gkdv
