#include "gkdv/transport.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "gkdv/errors.hpp"
#include "jet.hpp"

namespace gkdv {

using detail::Jet;

// ---------------------------------------------------------------- series

CoefficientSeries::CoefficientSeries(double step, std::vector<Field> snapshots)
    : step_(step), snapshots_(std::move(snapshots)) {
  if (snapshots_.empty()) throw InvalidArgument("CoefficientSeries: no snapshots");
  if (snapshots_.size() > 1 && !(step_ > 0.0)) throw InvalidArgument("CoefficientSeries: step must be > 0");
}

Field CoefficientSeries::at(double t) const {
  const std::size_t count = snapshots_.size();
  if (count == 1) return snapshots_.front();
  const double pos = t / step_;
  if (pos < -1e-9 || pos > static_cast<double>(count - 1) + 1e-9) {
    std::ostringstream msg;
    msg << "CoefficientSeries: t = " << t << " outside [0, " << t_end() << "]";
    throw InvalidArgument(msg.str());
  }
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) < 1e-12) return snapshots_[static_cast<std::size_t>(nearest)];

  const std::size_t degree = std::min<std::size_t>(3, count - 1);
  const auto cell = static_cast<long>(std::floor(pos));
  long base = cell - static_cast<long>(degree - 1) / 2;
  base = std::clamp(base, 0L, static_cast<long>(count - 1 - degree));

  Field out(snapshots_.front().grid());
  for (std::size_t i = 0; i <= degree; ++i) {
    double w = 1.0;
    const double ti = static_cast<double>(base + static_cast<long>(i));
    for (std::size_t j = 0; j <= degree; ++j) {
      if (j == i) continue;
      const double tj = static_cast<double>(base + static_cast<long>(j));
      w *= (pos - tj) / (ti - tj);
    }
    const Field& s = snapshots_[static_cast<std::size_t>(base) + i];
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += w * s[p];
  }
  return out;
}

TimeMesh make_time_mesh(double t_end, double dt) {
  if (!(t_end >= 0.0) || !(dt > 0.0)) throw InvalidArgument("make_time_mesh: need t_end >= 0 and dt > 0");
  if (t_end == 0.0) return {0, dt};
  const int steps = std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-9)));
  return {steps, t_end / steps};
}

CoefficientSeries sample_series(const std::function<Field(double)>& fn, double t_end, double dt) {
  const TimeMesh mesh = make_time_mesh(t_end, dt);
  std::vector<Field> snaps;
  snaps.reserve(static_cast<std::size_t>(mesh.steps) + 1);
  for (int i = 0; i <= mesh.steps; ++i) snaps.push_back(fn(i == mesh.steps ? t_end : i * mesh.step));
  return CoefficientSeries(mesh.step, std::move(snaps));
}

CoefficientSeries hopf_series(HopfFlow& flow, double t_end, double dt) {
  return sample_series([&flow](double t) { return flow.at(t).v0; }, t_end, dt);
}

// ---------------------------------------------------------------- RK4 driver

namespace {

template <class Rhs>
CoefficientSeries integrate_rk4(const Grid& grid, double t_end, double dt, Rhs&& rhs) {
  const TimeMesh mesh = make_time_mesh(t_end, dt);
  const double h = mesh.step;
  std::vector<Field> snaps;
  snaps.reserve(static_cast<std::size_t>(mesh.steps) + 1);
  Field w(grid);
  snaps.push_back(w);
  for (int i = 0; i < mesh.steps; ++i) {
    const double t = i * h;
    const Field k1 = rhs(t, w);
    const Field k2 = rhs(t + 0.5 * h, w + (0.5 * h) * k1);
    const Field k3 = rhs(t + 0.5 * h, w + (0.5 * h) * k2);
    const Field k4 = rhs(t + h, w + h * k3);
    for (std::size_t p = 0; p < w.size(); ++p) w[p] += h / 6.0 * (k1[p] + 2.0 * (k2[p] + k3[p]) + k4[p]);
    if (!w.all_finite()) throw SolverDivergence("transport: non-finite coefficient", t);
    snaps.push_back(w);
  }
  return CoefficientSeries(h, std::move(snaps));
}

double binomial(int k, int j) {
  double r = 1.0;
  for (int i = 1; i <= j; ++i) r = r * (k - j + i) / i;
  return r;
}

void check_resolution(const Field& v, int k) {
  const double tail = spectral_tail_fraction(v);
  if (tail > 1e-6) {
    std::ostringstream msg;
    msg << "transport: v^" << k << " is under-resolved (spectral tail fraction " << tail << " > 1e-6)";
    throw ResolutionError(msg.str());
  }
}

// Caches the two most recent characteristic solutions; RK4 asks for t + h/2
// twice and t + h again at the start of the next step.
class HopfCache {
 public:
  explicit HopfCache(HopfFlow& flow) : flow_(flow) {}
  const HopfSolution& at(double t) {
    for (auto& e : entries_) {
      if (e && e->t == t) return *e;
    }
    entries_[next_] = flow_.at(t);
    const HopfSolution& out = *entries_[next_];
    next_ = 1 - next_;
    return out;
  }

 private:
  HopfFlow& flow_;
  std::optional<HopfSolution> entries_[2];
  int next_ = 0;
};

}  // namespace

CoefficientSeries solve_transport_kdv(int k, std::span<const CoefficientSeries> lower, const SolverConfig& cfg) {
  if (k < 1) throw InvalidArgument("solve_transport_kdv: k must be >= 1");
  if (lower.size() < static_cast<std::size_t>(k)) {
    throw InvalidArgument("solve_transport_kdv: need v^0 .. v^{k-1}");
  }
  for (int j = 0; j < k; ++j) {
    if (lower[j].t_end() < cfg.t_end * (1.0 - 1e-12)) {
      throw InvalidArgument("solve_transport_kdv: lower coefficients do not cover [0, t_end]");
    }
  }
  const Grid grid = lower[0].snapshot(0).grid();

  // forcing = sum_{j=1}^{k-1} C(k,j) v^j v^{k-j}_x + k v^{k-1}_xxx
  auto forcing = [&](double t, const std::vector<Field>& vals) {
    Field f = static_cast<double>(k) * spectral_derivative(vals[k - 1], 3);
    for (int j = 1; j <= k - 1; ++j) {
      const Field dx = spectral_derivative(vals[k - j], 1);
      const double c = binomial(k, j);
      for (std::size_t p = 0; p < f.size(); ++p) f[p] += c * vals[j][p] * dx[p];
    }
    (void)t;
    return f;
  };

  auto lower_at = [&](double t) {
    std::vector<Field> vals;
    vals.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) vals.push_back(lower[j].at(t));
    return vals;
  };

  auto rhs = [&](double t, const Field& w) {
    const std::vector<Field> vals = lower_at(t);
    const Field& v0 = vals[0];
    const Field v0x = spectral_derivative(v0, 1);
    const Field wx = spectral_derivative(w, 1);
    Field out = forcing(t, vals);
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += v0[p] * wx[p] + w[p] * v0x[p];
    return out;
  };

  CoefficientSeries result = integrate_rk4(grid, cfg.t_end, cfg.dt, rhs);
  check_resolution(result.back(), k);
  return result;
}

CoefficientSeries solve_transport_general(HopfFlow& flow, const PerturbationData& pert, const SolverConfig& cfg) {
  const FluxModel& model = flow.model();
  HopfCache cache(flow);
  auto rhs = [&](double t, const Field& w) {
    const HopfSolution& sol = cache.at(t);
    Field flux(w.grid());
    for (std::size_t p = 0; p < flux.size(); ++p) {
      const double v = sol.v0[p];
      const double vx = sol.v0_x[p];
      const double a1 = model.da(v);
      const double c = pert.c(v);
      flux[p] = model.a(v) * w[p] + c * a1 * sol.v0_xx[p] +
                0.5 * (c * model.d2a(v) + pert.dc(v) * a1) * vx * vx;
    }
    return spectral_derivative(flux, 1);
  };
  return integrate_rk4(flow.grid(), cfg.t_end, cfg.dt, rhs);
}

// ---------------------------------------------------------------- closed forms

Field v1_closed_form(const HopfSolution& sol, const FluxModel& model, const PerturbationData& pert,
                     DerivativeRoute route) {
  const Grid& grid = sol.v0.grid();
  const double t = sol.t;
  Field bracket(grid);
  Field analytic(grid);
  for (std::size_t p = 0; p < grid.n_points(); ++p) {
    const double u = sol.v0[p];
    const double ux = sol.v0_x[p];
    const Jet vx{ux, sol.v0_xx[p]};
    const Jet vxx{sol.v0_xx[p], sol.v0_xxx[p]};
    const double a1 = model.da(u), a2 = model.d2a(u), a3 = model.d3a(u);
    const double c0 = pert.c(u), c1 = pert.dc(u), c2 = pert.d2c(u);
    const Jet a1j{a1, a2 * ux};
    const Jet cj{c0, c1 * ux};
    const Jet c1j{c1, c2 * ux};
    const Jet ca1_prime{c1 * a1 + c0 * a2, (c2 * a1 + 2.0 * c1 * a2 + c0 * a3) * ux};

    const Jet denom = 1.0 + t * (a1j * vx);
    if (!(denom.v > 0.0)) {
      std::ostringstream msg;
      msg << "v1_closed_form: 1 + t a' v0_x <= 0 at x = " << grid.point(p);
      throw PastBreaking(msg.str());
    }
    const Jet num = ca1_prime * vx * vx + 2.0 * (cj * a1j * vxx) + t * (cj * a1j * a1j * vx * vxx) +
                    t * (c1j * a1j * a1j * vx * vx * vx);
    const Jet b = num / (denom * denom);
    bracket[p] = b.v;
    analytic[p] = b.d;
  }
  Field out = (route == DerivativeRoute::Spectral) ? spectral_derivative(bracket, 1) : std::move(analytic);
  out *= 0.5 * t;
  return out;
}

Field v1_monotone_formula(const HopfSolution& sol, const PerturbationData& pert, double floor,
                          DerivativeRoute route) {
  const Grid& grid = sol.v0.grid();
  Field inner(grid);
  Field analytic(grid);
  for (std::size_t p = 0; p < grid.n_points(); ++p) {
    const double u = sol.v0[p];
    const double ux = sol.v0_x[p];
    if (!(std::abs(ux) >= floor)) {
      std::ostringstream msg;
      msg << "v1_monotone_formula: |v0_x| = " << std::abs(ux) << " below floor " << floor << " at x = "
          << grid.point(p) << " (data not monotone)";
      throw NonmonotoneData(msg.str());
    }
    const Jet vx{ux, sol.v0_xx[p]};
    const Jet vxx{sol.v0_xx[p], sol.v0_xxx[p]};
    const double c0 = pert.c(u), c1 = pert.dc(u), c2 = pert.d2c(u);
    const Jet cj{c0, c1 * ux};
    const Jet c1j{c1, c2 * ux};
    const Jet g = 0.5 * (cj * vxx / vx + c1j * vx);
    inner[p] = g.v;
    analytic[p] = g.d;
  }
  return route == DerivativeRoute::Spectral ? spectral_derivative(inner, 1) : analytic;
}

double ktilde_functional(const Field& f, double t, const FluxModel& model, const PerturbationData& pert) {
  const Field fx = spectral_derivative(f, 1);
  double sum = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p) {
    const double arg = 1.0 + t * model.da(f[p]) * fx[p];
    if (!(arg > 0.0)) {
      std::ostringstream msg;
      msg << "ktilde_functional: 1 + t a'(u) u_x = " << arg << " <= 0 at x = " << f.grid().point(p);
      throw DomainError(msg.str());
    }
    sum += pert.c(f[p]) * fx[p] * std::log(arg);
  }
  return -0.5 * sum * f.grid().spacing();
}

// ---------------------------------------------------------------- expansion

Field taylor_reconstruct(const ExpansionCoefficients& coeffs, double eps) {
  if (coeffs.fields.empty()) throw InvalidArgument("taylor_reconstruct: no coefficients");
  const int order = std::min<int>(coeffs.order, static_cast<int>(coeffs.fields.size()) - 1);
  Field out = coeffs.fields[0];
  double weight = 1.0;
  for (int k = 1; k <= order; ++k) {
    weight *= eps / k;
    const Field& v = coeffs.fields[static_cast<std::size_t>(k)];
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += weight * v[p];
  }
  return out;
}

bool is_kdv_flux(const FluxModel& model) {
  for (double u : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
    if (model.a(u) != u || model.da(u) != 1.0 || model.d2a(u) != 0.0) return false;
  }
  return true;
}

ExpansionCoefficients kdv_expansion(HopfFlow& flow, int order, double t, double dt, double sobolev_budget) {
  if (order < 0) throw InvalidArgument("kdv_expansion: order must be >= 0");
  if (order >= 2 && !is_kdv_flux(flow.model())) {
    throw InvalidArgument("kdv_expansion: orders >= 2 are available for a(u) = u only");
  }
  ExpansionCoefficients out;
  out.order = order;
  out.t = t;
  out.sobolev_budget = sobolev_budget;
  const PerturbationData pert = mapped_perturbation(1.0, 0.0, flow.model());

  const HopfSolution sol = flow.at(t);
  out.fields.push_back(sol.v0);
  if (order == 0) return out;
  out.fields.push_back(v1_closed_form(sol, flow.model(), pert));
  if (order == 1) return out;

  std::vector<CoefficientSeries> series;
  series.push_back(hopf_series(flow, t, dt));
  series.push_back(sample_series(
      [&](double tt) { return v1_closed_form(flow.at(tt), flow.model(), pert); }, t, dt));
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t;
  for (int k = 2; k <= order; ++k) {
    series.push_back(solve_transport_kdv(k, series, cfg));
    out.fields.push_back(series.back().back());
  }
  return out;
}

}  // namespace gkdv
