#pragma once

// Epsilon sweeps: solve the dispersive problem for a list of eps, subtract the
// truncated expansion, measure Sobolev remainders and fit observed orders.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gkdv/flux_model.hpp"
#include "gkdv/hopf.hpp"
#include "gkdv/solver.hpp"

namespace gkdv {

struct PhiSpec {
  std::string kind = "gaussian";  // gaussian | neg_sine | soliton | tanh
  double amp = 1.0;
  double width = 2.0;
  double center = 0.0;
  double kappa = 1.0;
  double eps1 = 0.25;  // soliton amplitude parameter
};

InitialDatum make_datum(const PhiSpec& spec);

/// eps_1 = alpha eps^2, eps_2 = beta eps^4 for two-term dispersion.
struct PathSpec {
  double alpha = 1.0;
  double beta = 1.0;
};

struct SweepPlan {
  std::string model_name = "kdv";
  std::vector<double> model_coeffs;  // polynomial a(u) when model_name == "custom"
  PhiSpec phi;
  std::vector<double> eps_values = {1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4};
  int n_dispersion = 1;
  PathSpec direction;
  int expansion_order = 0;
  double sobolev_s = 3.0;
  double t_eval = 0.0;  // <= 0 means t_eval_fraction * t_c
  double t_eval_fraction = 0.5;
  std::size_t n_points = 1024;
  double length = 40.0;
  // The resolution rule (smallest dispersive wavelength >= 8 grid spacings)
  // is enforced unless this is set.
  bool allow_underresolved = false;
  SolverConfig solver;
  double transport_dt = 0.0;  // <= 0 means solver.dt
  bool parallel = true;
  bool report_timings = false;

  FluxModel model() const;
  Grid grid() const;
};

/// Dispersion coefficients along the sweep path for sweep parameter eps.
DispersionParams dispersion_for(const SweepPlan& plan, double eps);
/// Expansion parameter multiplying u_xxx: eps for n = 1, eps^2 for n = 2.
double expansion_parameter(const SweepPlan& plan, double eps);

struct ConservationDrift {
  double mass = 0.0;      // absolute
  double momentum = 0.0;  // relative
  double energy = 0.0;    // relative
};

ConservationDrift conservation_drift(const Trajectory& traj);

struct ReportRow {
  double eps = 0.0;
  double delta = 0.0;                   // expansion parameter
  std::vector<double> remainders;       // m = 0..N in H^{s-3m} (clamped at 0)
  std::vector<double> sobolev_indices;  // s - 3m, clamped at 0
  std::vector<double> remainders_l2;    // m = 0..N in L2
  ConservationDrift drift;
  double runtime_seconds = 0.0;
};

struct ExpansionReport {
  SweepPlan plan;
  double t_c = 0.0;
  double t_eval = 0.0;
  std::string substitution;
  std::vector<ReportRow> rows;
  std::vector<double> fitted_orders;        // in the raw sweep parameter
  std::vector<double> fitted_orders_delta;  // in the expansion parameter
  std::vector<std::string> warnings;
};

/// Checks the plan; returns warnings for soft violations, throws
/// InvalidArgument / PastBreaking for hard ones.
std::vector<std::string> validate_plan(const SweepPlan& plan, double t_c);

ExpansionReport run_sweep(const SweepPlan& plan);
/// Two-term dispersion along the shrinking path; reports ||u(eps) - v0||_{H^s}.
ExpansionReport run_continuity_check(const SweepPlan& plan);

/// Least-squares slope of log(errs) against log(eps) over the (up to) four
/// smallest eps. Needs >= 2 positive pairs. Returns +infinity if any error used
/// in the fit is zero.
double fit_order(std::vector<double> eps, std::vector<double> errs);

// ---------------------------------------------------------------- config

/// Flat "key = value" text with '#' comments.
using ConfigMap = std::map<std::string, std::string>;
ConfigMap parse_config(std::istream& is);
/// Throws IoError if the file cannot be read.
ConfigMap read_config_file(const std::filesystem::path& path);

/// Unknown keys raise InvalidArgument.
SweepPlan plan_from_config(const ConfigMap& cfg);

/// Single-run settings for the solve / invariants commands.
struct RunSpec {
  SweepPlan plan;  // model, phi, grid, solver
  std::vector<double> dispersion = {0.0};
};
RunSpec run_spec_from_config(const ConfigMap& cfg);

nlohmann::ordered_json to_json(const SweepPlan& plan);
nlohmann::ordered_json to_json(const ExpansionReport& report);

}  // namespace gkdv
