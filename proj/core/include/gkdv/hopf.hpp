#pragma once

// Classical solution of v_t = a(v) v_x before the gradient catastrophe.
// Characteristics dx/dt = -a(v) carry v constant, so v(x, t) = phi(xi) where
// the foot point xi solves xi - t a(phi(xi)) = x.

#include <optional>
#include <string>

#include "gkdv/flux_model.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

/// Initial datum with analytic derivatives up to third order.
struct InitialDatum {
  std::string name;
  ScalarFn phi, dphi, d2phi, d3phi;

  /// amp * exp(-((x - center)/width)^2)
  static InitialDatum gaussian(double amp, double width, double center = 0.0);
  /// -amp * sin(x)
  static InitialDatum neg_sine(double amp = 1.0);
  /// 12 eps1 kappa^2 sech^2(kappa x): the KdV soliton at t = 0.
  static InitialDatum soliton(double kappa, double eps1);
  /// offset + amp * tanh(x / width): monotone on the whole line.
  static InitialDatum tanh_profile(double amp = 1.0, double width = 1.0, double offset = 0.0);
  /// Sampled datum; derivatives come from spectral differentiation and the
  /// trigonometric interpolant.
  static InitialDatum from_field(const Field& samples);

  Field sample(const Grid& grid) const { return Field::from_function(grid, phi); }
};

struct CriticalTime {
  double t_c = 0.0;     // +infinity when characteristics never cross
  double arg_xi = 0.0;  // foot point of the first crossing characteristic

  bool finite() const noexcept;
};

/// t_c = 1 / max over xi of [a'(phi(xi)) phi'(xi)] (positive part only).
/// Dense sampling of [-L/2, L/2) at 16 points per grid cell, then golden-section
/// refinement to relative 1e-10.
CriticalTime critical_time(const InitialDatum& datum, const FluxModel& model, const Grid& grid);
/// Sampled phi, differentiated spectrally.
CriticalTime critical_time(const Field& phi, const FluxModel& model);

struct HopfSolution {
  double t = 0.0;
  Field xi;        // foot points
  Field v0;        // phi(xi)
  Field v0_x;      // chain rule
  Field v0_xx;     // chain rule
  Field v0_xxx;    // chain rule
  Field jacobian;  // 1 - t a'(phi(xi)) phi'(xi), positive before breaking
  int max_newton_iterations = 0;
};

struct HopfOptions {
  const Field* warm_start = nullptr;  // foot points of a nearby time level
  std::optional<double> t_c;          // skip the critical-time search if known
  // Times above max_fraction * t_c are refused; raise it explicitly to go
  // closer to breaking.
  double max_fraction = 0.97;
  int max_iterations = 50;
  double tolerance = 1e-13;
};

/// Throws PastBreaking (t too close to or past t_c, or a non-positive
/// Jacobian) and NewtonNonconvergence.
HopfSolution solve_hopf(const InitialDatum& datum, const FluxModel& model, double t, const Grid& grid,
                        const HopfOptions& options = {});

/// 1 + t a'(v0) v0_x, which equals 1 / (1 - t a'(phi(xi)) phi'(xi)).
Field denominator_field(const HopfSolution& sol, const FluxModel& model);

/// Spectral second derivative of v0, the cross-check for the chain-rule v0_xx.
Field spectral_v0_xx(const HopfSolution& sol);

/// Time-continuation wrapper: remembers the previous foot points as the Newton
/// warm start. Not thread-safe; give each task its own flow.
class HopfFlow {
 public:
  HopfFlow(InitialDatum datum, FluxModel model, Grid grid, double max_fraction = 0.97);

  HopfSolution at(double t);

  const CriticalTime& critical() const noexcept { return tc_; }
  const InitialDatum& datum() const noexcept { return datum_; }
  const FluxModel& model() const noexcept { return model_; }
  const Grid& grid() const noexcept { return grid_; }

 private:
  InitialDatum datum_;
  FluxModel model_;
  Grid grid_;
  CriticalTime tc_;
  double max_fraction_;
  std::optional<Field> last_xi_;
};

}  // namespace gkdv
