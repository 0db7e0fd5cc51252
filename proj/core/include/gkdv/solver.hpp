#pragma once

// Time integration of u_t = a(u) u_x + sum_i eps_i d_x^{2i+1} u on a periodic
// grid. The dispersive part is diagonal in Fourier space and is propagated
// exactly; the nonlinearity is treated explicitly and pseudospectrally.

#include <string>
#include <vector>

#include "gkdv/flux_model.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

enum class Scheme { IfRk4, Etdrk4 };

Scheme parse_scheme(const std::string& name);  // "IF-RK4" | "ETDRK4" (case-insensitive)
std::string to_string(Scheme s);

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::IfRk4;
  bool dealiasing = true;
  double cfl_safety = 0.5;
  // Record a snapshot every this many steps; 0 keeps only t = 0 and t_end.
  int snapshot_every = 0;
  // Relative momentum drift that is treated as divergence.
  double momentum_drift_limit = 1e-3;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<Invariants> diagnostics;
  int steps = 0;

  const Field& final_state() const { return states.back(); }
};

/// i * sum_i eps_i (-1)^i k^{2i+1} in transform ordering; Nyquist entry zero.
std::vector<Complex> linear_symbol(const Grid& grid, const DispersionParams& eps);

/// a(f) * d_x f, optionally 2/3-dealiased. Throws SolverDivergence on NaN/Inf.
Field nonlinear_term(const Field& f, const FluxModel& model, bool dealiasing);

/// Largest admissible step under the advective CFL bound.
double cfl_limit(const Field& f, const FluxModel& model, double cfl_safety);

/// Integrates from phi to cfg.t_end. The final step is shortened so that
/// t_end is hit exactly. Throws CflViolation or SolverDivergence.
Trajectory evolve(const Field& phi, const FluxModel& model, const DispersionParams& eps,
                  const SolverConfig& cfg);

struct ControlledTrajectory {
  Trajectory trajectory;  // run at dt_used / 2
  double dt_used = 0.0;
  int halvings = 0;
  double error_estimate = 0.0;  // L2 distance between the dt_used and dt_used/2 runs
};

/// Step-doubling control around evolve: compares runs at dt and dt/2, halving
/// dt until the final states agree within tol in L2. Throws Nonconvergence
/// after max_halvings.
ControlledTrajectory evolve_with_error_control(const Field& phi, const FluxModel& model,
                                               const DispersionParams& eps, const SolverConfig& cfg,
                                               double tol, int max_halvings = 10);

}  // namespace gkdv
