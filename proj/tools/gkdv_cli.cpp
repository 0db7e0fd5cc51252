// gkdv command-line driver.
//
// Exit codes: 0 success, 1 usage or invalid input, 2 numerical failure,
// 3 I/O failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gkdv/errors.hpp"
#include "gkdv/harness.hpp"
#include "gkdv/hopf.hpp"
#include "gkdv/io.hpp"
#include "gkdv/solver.hpp"
#include "gkdv/transport.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

struct Options {
  std::string config;
  std::string out;
  std::string format = "csv";
  bool seedless = false;
};

gkdv::ConfigMap load_config(const Options& opt) {
  if (opt.config.empty()) return {};
  return gkdv::read_config_file(opt.config);
}

// Opens <out>/<name>, or returns nullopt when output goes to stdout.
std::optional<fs::path> output_path(const Options& opt, const std::string& name) {
  if (opt.out.empty()) return std::nullopt;
  std::error_code ec;
  fs::create_directories(opt.out, ec);
  if (ec) throw gkdv::IoError("cannot create output directory '" + opt.out + "': " + ec.message());
  return fs::path(opt.out) / name;
}

void emit_json(const Options& opt, const std::string& name, const json& j) {
  const auto path = output_path(opt, name);
  if (!path) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream os(*path);
  if (!os) throw gkdv::IoError("cannot write '" + path->string() + "'");
  os << j.dump(2) << '\n';
  if (!os) throw gkdv::IoError("write failed for '" + path->string() + "'");
  std::cout << "wrote " << path->string() << '\n';
}

void emit_snapshots(const Options& opt, const std::string& stem, const std::vector<gkdv::Snapshot>& snaps) {
  if (opt.format == "bin") {
    const auto path = output_path(opt, stem + ".bin");
    if (!path) throw gkdv::InvalidArgument("--format bin requires --out");
    gkdv::write_binary_file(*path, snaps);
    std::cout << "wrote " << path->string() << '\n';
    return;
  }
  if (opt.format == "json") {
    json arr = json::array();
    for (const auto& s : snaps) {
      const auto samples = s.field.samples();
      arr.push_back({{"t", s.t}, {"u", std::vector<double>(samples.begin(), samples.end())}});
    }
    json j;
    j["n_points"] = snaps.empty() ? 0 : snaps.front().field.grid().n_points();
    j["length"] = snaps.empty() ? 0.0 : snaps.front().field.grid().length();
    j["snapshots"] = std::move(arr);
    emit_json(opt, stem + ".json", j);
    return;
  }
  const auto path = output_path(opt, stem + ".csv");
  if (!path) {
    gkdv::write_csv(std::cout, snaps);
    return;
  }
  gkdv::write_csv_file(*path, snaps);
  std::cout << "wrote " << path->string() << '\n';
}

gkdv::SweepPlan sweep_plan(const Options& opt) { return gkdv::plan_from_config(load_config(opt)); }

double eval_time(const gkdv::SweepPlan& plan, double t_c) {
  return plan.t_eval > 0.0 ? plan.t_eval : plan.t_eval_fraction * t_c;
}

int cmd_solve(const Options& opt) {
  const gkdv::RunSpec spec = gkdv::run_spec_from_config(load_config(opt));
  const gkdv::Grid grid = spec.plan.grid();
  const gkdv::Field phi = gkdv::make_datum(spec.plan.phi).sample(grid);
  const gkdv::Trajectory traj =
      gkdv::evolve(phi, spec.plan.model(), gkdv::DispersionParams(spec.dispersion), spec.plan.solver);
  std::cerr << "solve: " << traj.steps << " steps to t = " << traj.times.back() << '\n';
  emit_snapshots(opt, "solve", gkdv::snapshots_of(traj));
  return kOk;
}

int cmd_hopf(const Options& opt) {
  const gkdv::SweepPlan plan = sweep_plan(opt);
  const gkdv::Grid grid = plan.grid();
  const gkdv::InitialDatum datum = gkdv::make_datum(plan.phi);
  const gkdv::FluxModel model = plan.model();
  const gkdv::CriticalTime tc = gkdv::critical_time(datum, model, grid);
  if (tc.finite()) {
    std::printf("t_c = %.12f (foot point %.12f)\n", tc.t_c, tc.arg_xi);
  } else {
    std::printf("t_c = inf\n");
  }
  if (opt.out.empty()) return kOk;
  const double t = eval_time(plan, tc.t_c);
  gkdv::HopfOptions hopt;
  hopt.t_c = tc.t_c;
  const gkdv::HopfSolution sol = gkdv::solve_hopf(datum, model, t, grid, hopt);
  emit_snapshots(opt, "hopf", {{0.0, datum.sample(grid)}, {t, sol.v0}});
  return kOk;
}

int cmd_transport(const Options& opt) {
  const gkdv::SweepPlan plan = sweep_plan(opt);
  gkdv::HopfFlow flow(gkdv::make_datum(plan.phi), plan.model(), plan.grid());
  const double t = eval_time(plan, flow.critical().t_c);
  const double dt = plan.transport_dt > 0.0 ? plan.transport_dt : plan.solver.dt;
  const gkdv::ExpansionCoefficients coeffs = gkdv::kdv_expansion(flow, plan.expansion_order, t, dt, plan.sobolev_s);
  for (std::size_t k = 0; k < coeffs.fields.size(); ++k) {
    emit_snapshots(opt, "v" + std::to_string(k), {{t, coeffs.fields[k]}});
  }
  return kOk;
}

int cmd_expand(const Options& opt) {
  emit_json(opt, "report.json", gkdv::to_json(gkdv::run_sweep(sweep_plan(opt))));
  return kOk;
}

int cmd_continuity(const Options& opt) {
  emit_json(opt, "continuity.json", gkdv::to_json(gkdv::run_continuity_check(sweep_plan(opt))));
  return kOk;
}

int cmd_invariants(const Options& opt) {
  const gkdv::RunSpec spec = gkdv::run_spec_from_config(load_config(opt));
  const gkdv::Grid grid = spec.plan.grid();
  const gkdv::FluxModel model = spec.plan.model();
  const gkdv::DispersionParams eps(spec.dispersion);
  gkdv::SolverConfig cfg = spec.plan.solver;
  if (cfg.snapshot_every <= 0) cfg.snapshot_every = std::max(1, static_cast<int>(std::ceil(cfg.t_end / cfg.dt / 20.0)));
  const gkdv::Trajectory traj = gkdv::evolve(gkdv::make_datum(spec.plan.phi).sample(grid), model, eps, cfg);
  const gkdv::ConservationDrift drift = gkdv::conservation_drift(traj);
  json series = json::array();
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& inv = traj.diagnostics[i];
    series.push_back({{"t", traj.times[i]}, {"mass", inv.mass}, {"momentum", inv.momentum}, {"energy", inv.energy}});
  }
  json j;
  j["steps"] = traj.steps;
  j["drift"] = {{"mass_abs", drift.mass}, {"momentum_rel", drift.momentum}, {"energy_rel", drift.energy}};
  j["series"] = std::move(series);
  emit_json(opt, "invariants.json", j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized KdV solver, Hopf characteristics and small-dispersion expansion harness"};
  app.require_subcommand(1);
  Options opt;

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Command commands[] = {
      {"solve", "Single gKdV run; writes the trajectory (csv | bin | json)", cmd_solve},
      {"hopf", "Critical time and, with --out, v0 at the evaluation time", cmd_hopf},
      {"transport", "Expansion coefficients v^0 .. v^N at the evaluation time", cmd_transport},
      {"expand", "Epsilon sweep; JSON remainder report", cmd_expand},
      {"continuity", "Two-term dispersion continuity check; JSON report", cmd_continuity},
      {"invariants", "Conservation audit of a single run; JSON", cmd_invariants},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opt.config, "Flat key = value configuration file");
    sub->add_option("--out", opt.out, "Output directory (default: stdout)");
    sub->add_option("--format", opt.format, "Field output format")->check(CLI::IsMember({"csv", "json", "bin"}));
    sub->add_flag("--seedless", opt.seedless, "Accepted for compatibility; every run is deterministic");
    subs.emplace_back(sub, &c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    for (const auto& [sub, cmd] : subs) {
      if (sub->parsed()) return cmd->run(opt);
    }
    return kUsage;
  } catch (const gkdv::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const gkdv::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const gkdv::InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
}
