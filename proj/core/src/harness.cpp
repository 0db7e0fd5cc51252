#include "gkdv/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>

#include "gkdv/errors.hpp"
#include "gkdv/transport.hpp"

namespace gkdv {

InitialDatum make_datum(const PhiSpec& spec) {
  if (spec.kind == "gaussian") return InitialDatum::gaussian(spec.amp, spec.width, spec.center);
  if (spec.kind == "neg_sine") return InitialDatum::neg_sine(spec.amp);
  if (spec.kind == "soliton") return InitialDatum::soliton(spec.kappa, spec.eps1);
  if (spec.kind == "tanh") return InitialDatum::tanh_profile(spec.amp, spec.width, spec.center);
  throw InvalidArgument("unknown phi.kind '" + spec.kind + "'");
}

FluxModel SweepPlan::model() const {
  if (model_name == "custom") {
    if (model_coeffs.empty()) throw InvalidArgument("custom model needs model.coeffs");
    return FluxModel::polynomial("custom", model_coeffs);
  }
  return model_by_name(model_name);
}

Grid SweepPlan::grid() const { return make_grid(n_points, length); }

DispersionParams dispersion_for(const SweepPlan& plan, double eps) {
  if (plan.n_dispersion == 1) return DispersionParams({eps});
  const double e2 = eps * eps;
  return DispersionParams({plan.direction.alpha * e2, plan.direction.beta * e2 * e2});
}

double expansion_parameter(const SweepPlan& plan, double eps) {
  return plan.n_dispersion == 1 ? eps : eps * eps;
}

ConservationDrift conservation_drift(const Trajectory& traj) {
  ConservationDrift d;
  const Invariants& i0 = traj.diagnostics.front();
  auto rel = [](double v, double v0) {
    const double scale = std::abs(v0);
    return scale > 0.0 ? std::abs(v - v0) / scale : std::abs(v - v0);
  };
  for (const auto& inv : traj.diagnostics) {
    d.mass = std::max(d.mass, std::abs(inv.mass - i0.mass));
    d.momentum = std::max(d.momentum, rel(inv.momentum, i0.momentum));
    d.energy = std::max(d.energy, rel(inv.energy, i0.energy));
  }
  return d;
}

// ---------------------------------------------------------------- orders

double fit_order(std::vector<double> eps, std::vector<double> errs) {
  if (eps.size() != errs.size()) throw InvalidArgument("fit_order: eps and errs differ in length");
  std::vector<std::size_t> idx(eps.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return eps[a] < eps[b]; });
  const std::size_t used = std::min<std::size_t>(4, idx.size());
  if (used < 2) throw InvalidArgument("fit_order: need at least two (eps, err) pairs");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    const double e = eps[idx[i]];
    const double r = errs[idx[i]];
    if (!(e > 0.0) || !(r >= 0.0)) throw InvalidArgument("fit_order: eps must be > 0 and errs >= 0");
    if (r == 0.0) return std::numeric_limits<double>::infinity();
    mx += std::log(e);
    my += std::log(r);
  }
  mx /= static_cast<double>(used);
  my /= static_cast<double>(used);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    const double dx = std::log(eps[idx[i]]) - mx;
    sxy += dx * (std::log(errs[idx[i]]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw InvalidArgument("fit_order: eps values must differ");
  return sxy / sxx;
}

// ---------------------------------------------------------------- sweeps

std::vector<std::string> validate_plan(const SweepPlan& plan, double t_c) {
  std::vector<std::string> warnings;
  if (plan.n_dispersion != 1 && plan.n_dispersion != 2) throw InvalidArgument("plan: n_dispersion must be 1 or 2");
  if (plan.eps_values.empty()) throw InvalidArgument("plan: eps_values is empty");
  for (std::size_t i = 0; i < plan.eps_values.size(); ++i) {
    if (!(plan.eps_values[i] > 0.0)) throw InvalidArgument("plan: eps_values must be positive");
    if (i > 0 && !(plan.eps_values[i] < plan.eps_values[i - 1])) {
      throw InvalidArgument("plan: eps_values must be strictly descending");
    }
  }
  if (plan.expansion_order < 0) throw InvalidArgument("plan: expansion_order must be >= 0");
  if (plan.n_dispersion == 2 && plan.expansion_order > 1) {
    throw InvalidArgument("plan: two-term dispersion supports expansion_order <= 1");
  }
  if (!(plan.sobolev_s >= 0.0)) throw InvalidArgument("plan: sobolev_s must be >= 0");
  const double t_eval = plan.t_eval > 0.0 ? plan.t_eval : plan.t_eval_fraction * t_c;
  if (!(t_eval > 0.0) || !std::isfinite(t_eval)) throw InvalidArgument("plan: t_eval must be positive and finite");
  if (std::isfinite(t_c) && !(t_eval < t_c)) {
    std::ostringstream msg;
    msg << "plan: t_eval = " << t_eval << " is not before the critical time " << t_c;
    throw PastBreaking(msg.str());
  }
  if (std::isfinite(t_c) && t_eval >= 0.9 * t_c) {
    warnings.push_back("t_eval >= 0.9 t_c: expansion constants grow near breaking");
  }
  const int budget = static_cast<int>(std::floor(plan.sobolev_s / 3.0 - 1.0));
  if (plan.expansion_order > budget) {
    std::ostringstream msg;
    msg << "expansion_order " << plan.expansion_order << " exceeds the regularity budget floor(s/3 - 1) = "
        << budget << " for s = " << plan.sobolev_s;
    warnings.push_back(msg.str());
  }

  const double spacing = plan.length / static_cast<double>(plan.n_points);
  double shortest = std::numeric_limits<double>::infinity();
  for (double e : plan.eps_values) {
    const DispersionParams d = dispersion_for(plan, e);
    double scale = std::sqrt(std::abs(d[0]));
    if (d.order() > 1) scale = std::max(scale, std::pow(std::abs(d[1]), 0.25));
    shortest = std::min(shortest, scale);
  }
  if (shortest < 8.0 * spacing) {
    std::ostringstream msg;
    msg << "plan: dispersive length " << shortest << " is below 8 grid spacings (" << 8.0 * spacing << ")";
    if (!plan.allow_underresolved) {
      throw InvalidArgument(msg.str() + "; set grid.allow_underresolved = true to override");
    }
    warnings.push_back(msg.str() + " (override active)");
  }
  return warnings;
}

namespace {

struct EpsRun {
  Field state;
  ConservationDrift drift;
  double seconds;
};

EpsRun run_one(const Field& phi, const FluxModel& model, const DispersionParams& eps, const SolverConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Trajectory traj = evolve(phi, model, eps, cfg);
  const auto stop = std::chrono::steady_clock::now();
  return {traj.final_state(), conservation_drift(traj), std::chrono::duration<double>(stop - start).count()};
}

}  // namespace

ExpansionReport run_sweep(const SweepPlan& plan) {
  const FluxModel model = plan.model();
  const Grid grid = plan.grid();
  const InitialDatum datum = make_datum(plan.phi);
  const CriticalTime tc = critical_time(datum, model, grid);

  ExpansionReport report;
  report.plan = plan;
  report.t_c = tc.t_c;
  report.warnings = validate_plan(plan, tc.t_c);
  report.t_eval = plan.t_eval > 0.0 ? plan.t_eval : plan.t_eval_fraction * tc.t_c;
  report.substitution = plan.n_dispersion == 1
                            ? "eps1 = eps; expansion parameter eps"
                            : "eps1 = alpha*eps^2, eps2 = beta*eps^4; expansion parameter eps^2";

  HopfFlow flow(datum, model, grid, /*max_fraction=*/1.0);
  const double transport_dt = plan.transport_dt > 0.0 ? plan.transport_dt : plan.solver.dt;
  ExpansionCoefficients coeffs;
  if (plan.n_dispersion == 1) {
    coeffs = kdv_expansion(flow, plan.expansion_order, report.t_eval, transport_dt, plan.sobolev_s);
  } else {
    const HopfSolution sol = flow.at(report.t_eval);
    coeffs.order = plan.expansion_order;
    coeffs.t = report.t_eval;
    coeffs.sobolev_budget = plan.sobolev_s;
    coeffs.fields.push_back(sol.v0);
    if (plan.expansion_order >= 1) {
      coeffs.fields.push_back(
          v1_closed_form(sol, model, mapped_perturbation(plan.direction.alpha, plan.direction.beta, model)));
    }
  }

  SolverConfig cfg = plan.solver;
  cfg.t_end = report.t_eval;
  cfg.snapshot_every = std::max(1, static_cast<int>(std::ceil(cfg.t_end / cfg.dt / 8.0)));
  const Field phi = datum.sample(grid);

  std::vector<EpsRun> runs;
  runs.reserve(plan.eps_values.size());
  if (plan.parallel) {
    std::vector<std::future<EpsRun>> futures;
    for (double e : plan.eps_values) {
      futures.push_back(std::async(std::launch::async, [&, e] {
        return run_one(phi, model, dispersion_for(plan, e), cfg);
      }));
    }
    for (auto& f : futures) runs.push_back(f.get());
  } else {
    for (double e : plan.eps_values) runs.push_back(run_one(phi, model, dispersion_for(plan, e), cfg));
  }

  const int order = plan.expansion_order;
  for (std::size_t i = 0; i < plan.eps_values.size(); ++i) {
    ReportRow row;
    row.eps = plan.eps_values[i];
    row.delta = expansion_parameter(plan, row.eps);
    row.drift = runs[i].drift;
    row.runtime_seconds = runs[i].seconds;
    ExpansionCoefficients truncated = coeffs;
    for (int m = 0; m <= order; ++m) {
      truncated.order = m;
      const Field diff = runs[i].state - taylor_reconstruct(truncated, row.delta);
      const double index = std::max(plan.sobolev_s - 3.0 * m, 0.0);
      row.sobolev_indices.push_back(index);
      row.remainders.push_back(sobolev_norm(diff, SobolevIndex(index)));
      row.remainders_l2.push_back(sobolev_norm(diff, SobolevIndex(0.0)));
    }
    report.rows.push_back(std::move(row));
  }

  if (plan.eps_values.size() >= 2) {
    std::vector<double> eps_list, delta_list;
    for (const auto& r : report.rows) {
      eps_list.push_back(r.eps);
      delta_list.push_back(r.delta);
    }
    for (int m = 0; m <= order; ++m) {
      std::vector<double> errs;
      for (const auto& r : report.rows) errs.push_back(r.remainders[static_cast<std::size_t>(m)]);
      report.fitted_orders.push_back(fit_order(eps_list, errs));
      report.fitted_orders_delta.push_back(fit_order(delta_list, errs));
    }
  }
  return report;
}

ExpansionReport run_continuity_check(const SweepPlan& plan) {
  if (plan.n_dispersion != 2) throw InvalidArgument("run_continuity_check: plan must have n_dispersion = 2");
  SweepPlan p = plan;
  p.expansion_order = 0;
  return run_sweep(p);
}

// ---------------------------------------------------------------- config

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InvalidArgument("config: '" + key + "' expects a number, got '" + v + "'");
  }
}

long to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw InvalidArgument("config: '" + key + "' expects an integer, got '" + v + "'");
  return static_cast<long>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidArgument("config: '" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

// Applies every recognised key; returns the ones left over.
std::vector<std::string> apply_config(const ConfigMap& cfg, SweepPlan& plan, std::vector<double>* dispersion) {
  std::vector<std::string> unknown;
  double eps_start = -1.0, eps_ratio = 0.5;
  long eps_count = -1;
  for (const auto& [key, value] : cfg) {
    if (key == "model_name") plan.model_name = value;
    else if (key == "model.coeffs") plan.model_coeffs = to_list(key, value);
    else if (key == "phi.kind") plan.phi.kind = value;
    else if (key == "phi.amp") plan.phi.amp = to_double(key, value);
    else if (key == "phi.width") plan.phi.width = to_double(key, value);
    else if (key == "phi.center") plan.phi.center = to_double(key, value);
    else if (key == "phi.kappa") plan.phi.kappa = to_double(key, value);
    else if (key == "phi.eps1") plan.phi.eps1 = to_double(key, value);
    else if (key == "eps_values") plan.eps_values = to_list(key, value);
    else if (key == "eps.start") eps_start = to_double(key, value);
    else if (key == "eps.ratio") eps_ratio = to_double(key, value);
    else if (key == "eps.count") eps_count = to_int(key, value);
    else if (key == "n_dispersion") plan.n_dispersion = static_cast<int>(to_int(key, value));
    else if (key == "direction.alpha") plan.direction.alpha = to_double(key, value);
    else if (key == "direction.beta") plan.direction.beta = to_double(key, value);
    else if (key == "expansion_order") plan.expansion_order = static_cast<int>(to_int(key, value));
    else if (key == "sobolev_s") plan.sobolev_s = to_double(key, value);
    else if (key == "t_eval") plan.t_eval = to_double(key, value);
    else if (key == "t_eval_fraction") plan.t_eval_fraction = to_double(key, value);
    else if (key == "grid.n_points") plan.n_points = static_cast<std::size_t>(to_int(key, value));
    else if (key == "grid.length") plan.length = to_double(key, value);
    else if (key == "grid.allow_underresolved") plan.allow_underresolved = to_bool(key, value);
    else if (key == "solver.dt") plan.solver.dt = to_double(key, value);
    else if (key == "solver.t_end") plan.solver.t_end = to_double(key, value);
    else if (key == "solver.scheme") plan.solver.scheme = parse_scheme(value);
    else if (key == "solver.dealiasing") plan.solver.dealiasing = to_bool(key, value);
    else if (key == "solver.cfl_safety") plan.solver.cfl_safety = to_double(key, value);
    else if (key == "solver.snapshot_every") plan.solver.snapshot_every = static_cast<int>(to_int(key, value));
    else if (key == "transport.dt") plan.transport_dt = to_double(key, value);
    else if (key == "parallel") plan.parallel = to_bool(key, value);
    else if (key == "report_timings") plan.report_timings = to_bool(key, value);
    else if (dispersion != nullptr && key == "dispersion.eps1") {
      if (dispersion->empty()) dispersion->resize(1, 0.0);
      (*dispersion)[0] = to_double(key, value);
    } else if (dispersion != nullptr && key == "dispersion.eps2") {
      dispersion->resize(2, 0.0);
      (*dispersion)[1] = to_double(key, value);
    } else {
      unknown.push_back(key);
    }
  }
  if (eps_start > 0.0 || eps_count > 0) {
    if (eps_start <= 0.0) eps_start = 1e-2;
    if (eps_count <= 0) eps_count = 6;
    plan.eps_values.clear();
    double e = eps_start;
    for (long i = 0; i < eps_count; ++i, e *= eps_ratio) plan.eps_values.push_back(e);
  }
  return unknown;
}

void reject_unknown(const std::vector<std::string>& unknown) {
  if (unknown.empty()) return;
  std::string msg = "config: unknown key(s):";
  for (const auto& k : unknown) msg += " " + k;
  throw InvalidArgument(msg);
}

}  // namespace

ConfigMap parse_config(std::istream& is) {
  ConfigMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

ConfigMap read_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config file '" + path.string() + "'");
  return parse_config(is);
}

SweepPlan plan_from_config(const ConfigMap& cfg) {
  SweepPlan plan;
  reject_unknown(apply_config(cfg, plan, nullptr));
  return plan;
}

RunSpec run_spec_from_config(const ConfigMap& cfg) {
  RunSpec spec;
  reject_unknown(apply_config(cfg, spec.plan, &spec.dispersion));
  return spec;
}

// ---------------------------------------------------------------- JSON

nlohmann::ordered_json to_json(const SweepPlan& plan) {
  nlohmann::ordered_json j;
  j["model_name"] = plan.model_name;
  if (!plan.model_coeffs.empty()) j["model_coeffs"] = plan.model_coeffs;
  j["phi"] = {{"kind", plan.phi.kind},   {"amp", plan.phi.amp},     {"width", plan.phi.width},
              {"center", plan.phi.center}, {"kappa", plan.phi.kappa}, {"eps1", plan.phi.eps1}};
  j["eps_values"] = plan.eps_values;
  j["n_dispersion"] = plan.n_dispersion;
  j["direction"] = {{"alpha", plan.direction.alpha}, {"beta", plan.direction.beta}};
  j["expansion_order"] = plan.expansion_order;
  j["sobolev_s"] = plan.sobolev_s;
  j["t_eval"] = plan.t_eval;
  j["t_eval_fraction"] = plan.t_eval_fraction;
  j["grid"] = {{"n_points", plan.n_points}, {"length", plan.length}, {"allow_underresolved", plan.allow_underresolved}};
  j["solver"] = {{"dt", plan.solver.dt},
                 {"scheme", to_string(plan.solver.scheme)},
                 {"dealiasing", plan.solver.dealiasing},
                 {"cfl_safety", plan.solver.cfl_safety}};
  j["transport_dt"] = plan.transport_dt > 0.0 ? plan.transport_dt : plan.solver.dt;
  return j;
}

namespace {

nlohmann::ordered_json keyed(const std::vector<double>& values) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t m = 0; m < values.size(); ++m) {
    const double v = values[m];
    if (std::isfinite(v)) {
      j["m" + std::to_string(m)] = v;
    } else {
      j["m" + std::to_string(m)] = v > 0 ? "inf" : "nan";
    }
  }
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const ExpansionReport& report) {
  nlohmann::ordered_json j;
  j["plan_echo"] = to_json(report.plan);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["eps"] = r.eps;
    row["expansion_parameter"] = r.delta;
    row["remainders"] = keyed(r.remainders);
    row["sobolev_indices"] = keyed(r.sobolev_indices);
    row["remainders_l2"] = keyed(r.remainders_l2);
    row["conservation"] = {{"mass_abs", r.drift.mass}, {"momentum_rel", r.drift.momentum}, {"energy_rel", r.drift.energy}};
    if (report.plan.report_timings) row["runtime_seconds"] = r.runtime_seconds;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["fitted_orders"] = keyed(report.fitted_orders);
  nlohmann::ordered_json diag;
  diag["t_c"] = std::isfinite(report.t_c) ? nlohmann::ordered_json(report.t_c) : nlohmann::ordered_json("inf");
  diag["t_eval"] = report.t_eval;
  diag["substitution"] = report.substitution;
  diag["fitted_orders_expansion_parameter"] = keyed(report.fitted_orders_delta);
  ConservationDrift worst;
  for (const auto& r : report.rows) {
    worst.mass = std::max(worst.mass, r.drift.mass);
    worst.momentum = std::max(worst.momentum, r.drift.momentum);
    worst.energy = std::max(worst.energy, r.drift.energy);
  }
  diag["max_conservation_drift"] = {{"mass_abs", worst.mass}, {"momentum_rel", worst.momentum}, {"energy_rel", worst.energy}};
  diag["warnings"] = report.warnings;
  j["diagnostics"] = std::move(diag);
  return j;
}

}  // namespace gkdv
