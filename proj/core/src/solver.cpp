#include "gkdv/solver.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gkdv/errors.hpp"

namespace gkdv {

Scheme parse_scheme(const std::string& name) {
  std::string s;
  for (char ch : name) {
    if (ch != '-' && ch != '_') s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  }
  if (s == "IFRK4") return Scheme::IfRk4;
  if (s == "ETDRK4") return Scheme::Etdrk4;
  throw InvalidArgument("unknown scheme '" + name + "' (expected IF-RK4 or ETDRK4)");
}

std::string to_string(Scheme s) { return s == Scheme::IfRk4 ? "IF-RK4" : "ETDRK4"; }

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("SolverConfig: dt must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("SolverConfig: t_end must be > 0");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw InvalidArgument("SolverConfig: cfl_safety must be in (0, 1]");
  if (snapshot_every < 0) throw InvalidArgument("SolverConfig: snapshot_every must be >= 0");
}

std::vector<Complex> linear_symbol(const Grid& grid, const DispersionParams& eps) {
  std::vector<Complex> out(grid.n_points());
  const auto k = grid.wavenumbers();
  for (std::size_t m = 0; m < out.size(); ++m) {
    double im = 0.0;
    double kpow = k[m];  // k^{2i+1}, starting at i = 0
    for (std::size_t i = 0; i < eps.order(); ++i) {
      kpow *= k[m] * k[m];
      const double sign = ((i + 1) % 2 == 0) ? 1.0 : -1.0;
      im += sign * eps[i] * kpow;
    }
    out[m] = Complex(0.0, im);
  }
  out[grid.nyquist_index()] = 0.0;
  return out;
}

Field nonlinear_term(const Field& f, const FluxModel& model, bool dealiasing) {
  const Field fx = spectral_derivative(f, 1);
  Field out(f.grid());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = model.a(f[j]) * fx[j];
  if (dealiasing) out = dealias(out);
  if (!out.all_finite()) throw SolverDivergence("nonlinear_term: non-finite values", 0.0);
  return out;
}

double cfl_limit(const Field& f, const FluxModel& model, double cfl_safety) {
  double amax = 0.0;
  for (double v : f.samples()) amax = std::max(amax, std::abs(model.a(v)));
  if (amax == 0.0) return std::numeric_limits<double>::infinity();
  return cfl_safety * f.grid().spacing() / amax;
}

namespace {

// Works on half spectra throughout; one forward and two inverse transforms
// per nonlinear evaluation.
class Integrator {
 public:
  Integrator(const Grid& grid, const FluxModel& model, const DispersionParams& eps, const SolverConfig& cfg)
      : grid_(grid), model_(model), eps_(eps), cfg_(cfg) {
    const auto full = linear_symbol(grid, eps);
    lin_.assign(full.begin(), full.begin() + static_cast<long>(grid.half_size()));
  }

  // Physical state of a spectrum and the rhs N(u) = a(u) u_x.
  Spectrum rhs(const Spectrum& u_hat, Field* physical = nullptr) const {
    Field u = inverse_transform(grid_, u_hat);
    Spectrum ux_hat = u_hat;
    differentiate_spectrum(grid_, ux_hat, 1);
    const Field ux = inverse_transform(grid_, ux_hat);
    Field prod(grid_);
    for (std::size_t j = 0; j < prod.size(); ++j) prod[j] = model_.a(u[j]) * ux[j];
    Spectrum out = forward_transform(prod);
    if (cfg_.dealiasing) dealias_spectrum(grid_, out);
    if (physical != nullptr) *physical = std::move(u);
    return out;
  }

  void if_rk4_step(Spectrum& u, double h, Field* start_state) const {
    const std::size_t m = u.size();
    Spectrum e_half(m);
    for (std::size_t i = 0; i < m; ++i) e_half[i] = std::exp(lin_[i] * (0.5 * h));
    const Spectrum a = rhs(u, start_state);
    Spectrum tmp(m);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = e_half[i] * (u[i] + 0.5 * h * a[i]);
    const Spectrum b = rhs(tmp);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = e_half[i] * u[i] + 0.5 * h * b[i];
    const Spectrum c = rhs(tmp);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = e_half[i] * e_half[i] * u[i] + h * e_half[i] * c[i];
    const Spectrum d = rhs(tmp);
    for (std::size_t i = 0; i < m; ++i) {
      const Complex e2 = e_half[i] * e_half[i];
      u[i] = e2 * u[i] + h / 6.0 * (e2 * a[i] + 2.0 * e_half[i] * (b[i] + c[i]) + d[i]);
    }
  }

  struct EtdCoefficients {
    double h = -1.0;
    Spectrum e, e2, q, f1, f2, f3;
  };

  // Exponential time differencing coefficients evaluated as means over a
  // circle of radius 1 around h*L in the complex plane, which avoids the
  // cancellation of the direct formulas for small |h L|. The symbol is
  // imaginary, so the full circle is needed (no real-axis symmetry).
  void prepare_etd(double h) {
    if (etd_.h == h) return;
    constexpr int kContour = 32;
    const std::size_t m = lin_.size();
    etd_.h = h;
    etd_.e.resize(m);
    etd_.e2.resize(m);
    etd_.q.resize(m);
    etd_.f1.resize(m);
    etd_.f2.resize(m);
    etd_.f3.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const Complex hl = h * lin_[i];
      etd_.e[i] = std::exp(hl);
      etd_.e2[i] = std::exp(0.5 * hl);
      Complex q = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
      for (int j = 1; j <= kContour; ++j) {
        const Complex r = hl + std::exp(Complex(0.0, 2.0 * std::numbers::pi * (j - 0.5) / kContour));
        const Complex er = std::exp(r);
        const Complex r3 = r * r * r;
        q += (std::exp(0.5 * r) - 1.0) / r;
        f1 += (-4.0 - r + er * (4.0 - 3.0 * r + r * r)) / r3;
        f2 += (2.0 + r + er * (r - 2.0)) / r3;
        f3 += (-4.0 - 3.0 * r - r * r + er * (4.0 - r)) / r3;
      }
      etd_.q[i] = h * q / double(kContour);
      etd_.f1[i] = h * f1 / double(kContour);
      etd_.f2[i] = h * f2 / double(kContour);
      etd_.f3[i] = h * f3 / double(kContour);
    }
  }

  void etdrk4_step(Spectrum& u, double h, Field* start_state) {
    prepare_etd(h);
    const std::size_t m = u.size();
    const Spectrum nu = rhs(u, start_state);
    Spectrum a(m);
    for (std::size_t i = 0; i < m; ++i) a[i] = etd_.e2[i] * u[i] + etd_.q[i] * nu[i];
    const Spectrum na = rhs(a);
    Spectrum b(m);
    for (std::size_t i = 0; i < m; ++i) b[i] = etd_.e2[i] * u[i] + etd_.q[i] * na[i];
    const Spectrum nb = rhs(b);
    Spectrum c(m);
    for (std::size_t i = 0; i < m; ++i) c[i] = etd_.e2[i] * a[i] + etd_.q[i] * (2.0 * nb[i] - nu[i]);
    const Spectrum nc = rhs(c);
    for (std::size_t i = 0; i < m; ++i) {
      u[i] = etd_.e[i] * u[i] + etd_.f1[i] * nu[i] + 2.0 * etd_.f2[i] * (na[i] + nb[i]) + etd_.f3[i] * nc[i];
    }
  }

  void step(Spectrum& u, double h, Field* start_state) {
    if (cfg_.scheme == Scheme::IfRk4) {
      if_rk4_step(u, h, start_state);
    } else {
      etdrk4_step(u, h, start_state);
    }
  }

 private:
  Grid grid_;
  const FluxModel& model_;
  const DispersionParams& eps_;
  const SolverConfig& cfg_;
  Spectrum lin_;
  EtdCoefficients etd_;
};

double spectral_momentum(const Grid& g, const Spectrum& u_hat) {
  double sum = 0.0;
  for (std::size_t m = 0; m < u_hat.size(); ++m) {
    const double w = (m == 0 || m == g.nyquist_index()) ? 1.0 : 2.0;
    sum += w * std::norm(u_hat[m]);
  }
  const double n = static_cast<double>(g.n_points());
  return 0.5 * g.length() * sum / (n * n);
}

}  // namespace

Trajectory evolve(const Field& phi, const FluxModel& model, const DispersionParams& eps, const SolverConfig& cfg) {
  cfg.validate();
  if (!phi.all_finite()) throw InvalidArgument("evolve: initial datum has non-finite samples");
  const Grid& grid = phi.grid();

  Spectrum u = forward_transform(phi);
  if (cfg.dealiasing) dealias_spectrum(grid, u);
  Field state = inverse_transform(grid, u);

  auto check_cfl = [&](const Field& f, double h, double t) {
    if (h > cfl_limit(f, model, cfg.cfl_safety) * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "advective CFL violated at t = " << t << ": dt = " << h << " exceeds "
          << cfl_limit(f, model, cfg.cfl_safety);
      throw CflViolation(msg.str());
    }
  };
  check_cfl(state, std::min(cfg.dt, cfg.t_end), 0.0);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(state);
  traj.diagnostics.push_back(gkdv_invariants(state, model, eps));

  const double momentum0 = spectral_momentum(grid, u);
  const double momentum_scale = std::max(std::abs(momentum0), std::numeric_limits<double>::min());

  Integrator integrator(grid, model, eps, cfg);
  double t = 0.0;
  int step = 0;
  const double t_end = cfg.t_end;
  while (t < t_end) {
    // times are step * dt so no rounding sliver is left before t_end
    double h = cfg.dt;
    bool last = false;
    if (static_cast<double>(step + 1) * cfg.dt >= t_end - 1e-9 * cfg.dt) {
      h = t_end - t;
      last = true;
    }
    Field start(grid);
    integrator.step(u, h, &start);
    // the rhs evaluation at the start of the step hands back the physical state
    check_cfl(start, h, t);
    const double momentum = spectral_momentum(grid, u);
    if (!std::isfinite(momentum)) throw SolverDivergence("evolve: non-finite state", t);
    if (std::abs(momentum - momentum0) > cfg.momentum_drift_limit * momentum_scale) {
      std::ostringstream msg;
      msg << "evolve: relative momentum drift exceeds " << cfg.momentum_drift_limit << " at t = " << t + h;
      throw SolverDivergence(msg.str(), t);
    }
    ++step;
    t = last ? t_end : static_cast<double>(step) * cfg.dt;
    const bool snap = last || (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0);
    if (snap) {
      state = inverse_transform(grid, u);
      if (!state.all_finite()) throw SolverDivergence("evolve: non-finite state", traj.times.back());
      traj.times.push_back(t);
      traj.states.push_back(state);
      traj.diagnostics.push_back(gkdv_invariants(state, model, eps));
    }
  }
  traj.steps = step;
  return traj;
}

ControlledTrajectory evolve_with_error_control(const Field& phi, const FluxModel& model,
                                               const DispersionParams& eps, const SolverConfig& cfg,
                                               double tol, int max_halvings) {
  if (!(tol >= 0.0)) throw InvalidArgument("evolve_with_error_control: tol must be >= 0");
  SolverConfig coarse_cfg = cfg;
  Trajectory coarse = evolve(phi, model, eps, coarse_cfg);
  double last_error = std::numeric_limits<double>::infinity();
  for (int halvings = 0; halvings <= max_halvings; ++halvings) {
    SolverConfig fine_cfg = coarse_cfg;
    fine_cfg.dt = 0.5 * coarse_cfg.dt;
    if (fine_cfg.snapshot_every > 0) fine_cfg.snapshot_every *= 2;
    Trajectory fine = evolve(phi, model, eps, fine_cfg);
    last_error = sobolev_norm(fine.final_state() - coarse.final_state(), SobolevIndex(0.0));
    if (last_error <= tol) {
      return ControlledTrajectory{std::move(fine), coarse_cfg.dt, halvings, last_error};
    }
    coarse_cfg = fine_cfg;
    coarse = std::move(fine);
  }
  std::ostringstream msg;
  msg << "evolve_with_error_control: no agreement within " << tol << " after " << max_halvings
      << " halvings (last estimate " << last_error << ")";
  throw Nonconvergence(msg.str());
}

}  // namespace gkdv
