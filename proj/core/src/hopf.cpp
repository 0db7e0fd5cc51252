#include "gkdv/hopf.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "gkdv/errors.hpp"

namespace gkdv {

// ---------------------------------------------------------------- data

InitialDatum InitialDatum::gaussian(double amp, double width, double center) {
  if (!(width > 0.0)) throw InvalidArgument("gaussian: width must be > 0");
  InitialDatum d;
  d.name = "gaussian";
  d.phi = [=](double x) {
    const double z = (x - center) / width;
    return amp * std::exp(-z * z);
  };
  d.dphi = [=](double x) {
    const double z = (x - center) / width;
    return amp * std::exp(-z * z) * (-2.0 * z) / width;
  };
  d.d2phi = [=](double x) {
    const double z = (x - center) / width;
    return amp * std::exp(-z * z) * (4.0 * z * z - 2.0) / (width * width);
  };
  d.d3phi = [=](double x) {
    const double z = (x - center) / width;
    return amp * std::exp(-z * z) * (12.0 * z - 8.0 * z * z * z) / (width * width * width);
  };
  return d;
}

InitialDatum InitialDatum::neg_sine(double amp) {
  InitialDatum d;
  d.name = "neg_sine";
  d.phi = [=](double x) { return -amp * std::sin(x); };
  d.dphi = [=](double x) { return -amp * std::cos(x); };
  d.d2phi = [=](double x) { return amp * std::sin(x); };
  d.d3phi = [=](double x) { return amp * std::cos(x); };
  return d;
}

InitialDatum InitialDatum::soliton(double kappa, double eps1) {
  const double amp = 12.0 * eps1 * kappa * kappa;
  InitialDatum d;
  d.name = "soliton";
  d.phi = [=](double x) {
    const double s = 1.0 / std::cosh(kappa * x);
    return amp * s * s;
  };
  d.dphi = [=](double x) {
    const double s = 1.0 / std::cosh(kappa * x);
    return -2.0 * kappa * amp * s * s * std::tanh(kappa * x);
  };
  d.d2phi = [=](double x) {
    const double s = 1.0 / std::cosh(kappa * x);
    const double th = std::tanh(kappa * x);
    return -2.0 * kappa * kappa * amp * s * s * (1.0 - 3.0 * th * th);
  };
  d.d3phi = [=](double x) {
    const double s = 1.0 / std::cosh(kappa * x);
    const double th = std::tanh(kappa * x);
    return 4.0 * kappa * kappa * kappa * amp * s * s * th * (4.0 - 6.0 * th * th);
  };
  return d;
}

InitialDatum InitialDatum::tanh_profile(double amp, double width, double offset) {
  if (!(width > 0.0)) throw InvalidArgument("tanh_profile: width must be > 0");
  InitialDatum d;
  d.name = "tanh";
  d.phi = [=](double x) { return offset + amp * std::tanh(x / width); };
  d.dphi = [=](double x) {
    const double s = 1.0 / std::cosh(x / width);
    return amp / width * s * s;
  };
  d.d2phi = [=](double x) {
    const double s = 1.0 / std::cosh(x / width);
    return -2.0 * amp / (width * width) * s * s * std::tanh(x / width);
  };
  d.d3phi = [=](double x) {
    const double s = 1.0 / std::cosh(x / width);
    const double th = std::tanh(x / width);
    return -2.0 * amp / (width * width * width) * s * s * (1.0 - 3.0 * th * th);
  };
  return d;
}

InitialDatum InitialDatum::from_field(const Field& samples) {
  auto f0 = std::make_shared<FourierInterpolant>(samples);
  auto f1 = std::make_shared<FourierInterpolant>(spectral_derivative(samples, 1));
  auto f2 = std::make_shared<FourierInterpolant>(spectral_derivative(samples, 2));
  auto f3 = std::make_shared<FourierInterpolant>(spectral_derivative(samples, 3));
  InitialDatum d;
  d.name = "sampled";
  d.phi = [f0](double x) { return (*f0)(x); };
  d.dphi = [f1](double x) { return (*f1)(x); };
  d.d2phi = [f2](double x) { return (*f2)(x); };
  d.d3phi = [f3](double x) { return (*f3)(x); };
  return d;
}

// ---------------------------------------------------------------- critical time

bool CriticalTime::finite() const noexcept { return std::isfinite(t_c); }

CriticalTime critical_time(const InitialDatum& datum, const FluxModel& model, const Grid& grid) {
  auto rate = [&](double xi) { return model.da(datum.phi(xi)) * datum.dphi(xi); };

  constexpr int kOversample = 16;
  const std::size_t samples = grid.n_points() * kOversample;
  const double h = grid.length() / static_cast<double>(samples);
  const double x0 = -0.5 * grid.length();
  double best = 0.0;
  double best_xi = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < samples; ++i) {
    const double xi = x0 + static_cast<double>(i) * h;
    const double r = rate(xi);
    if (r > best) {
      best = r;
      best_xi = xi;
      found = true;
    }
  }
  if (!found) return {std::numeric_limits<double>::infinity(), 0.0};

  // golden-section refinement of the maximum inside the neighbouring cells
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_xi - h;
  double hi = best_xi + h;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = rate(c);
  double fd = rate(d);
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-10 * std::max(1.0, std::abs(best_xi)); ++iter) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = rate(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = rate(d);
    }
  }
  const double xi_star = 0.5 * (lo + hi);
  const double r_star = std::max(rate(xi_star), best);
  return {1.0 / r_star, r_star == best ? best_xi : xi_star};
}

CriticalTime critical_time(const Field& phi, const FluxModel& model) {
  return critical_time(InitialDatum::from_field(phi), model, phi.grid());
}

// ---------------------------------------------------------------- characteristics

namespace {

struct Foot {
  double xi;
  int iterations;
};

// Root of g(xi) = xi - t a(phi(xi)) - x. Newton first; if it meets a
// non-positive slope or stalls, fall back to bracketing, which is safe
// because g is increasing before breaking.
Foot find_foot(const InitialDatum& d, const FluxModel& model, double t, double x, double guess, double h0,
               const HopfOptions& opt) {
  auto g = [&](double xi) { return xi - t * model.a(d.phi(xi)) - x; };
  auto gp = [&](double xi) { return 1.0 - t * model.da(d.phi(xi)) * d.dphi(xi); };
  const double tol = opt.tolerance * (1.0 + std::abs(x));

  double xi = guess;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const double gv = g(xi);
    if (std::abs(gv) <= tol) return {xi, it};
    const double slope = gp(xi);
    if (!(slope > 0.0)) break;
    xi -= gv / slope;
  }

  // bracket the root by stepping away from the guess
  double lo = guess;
  double hi = guess;
  double step = h0;
  double glo = g(lo);
  double ghi = glo;
  int expansions = 0;
  while (glo > 0.0 && expansions < 200) {
    hi = lo;
    ghi = glo;
    lo -= step;
    step *= 2.0;
    glo = g(lo);
    ++expansions;
  }
  step = h0;
  while (ghi < 0.0 && expansions < 400) {
    lo = hi;
    glo = ghi;
    hi += step;
    step *= 2.0;
    ghi = g(hi);
    ++expansions;
  }
  if (glo > 0.0 || ghi < 0.0) {
    std::ostringstream msg;
    msg << "solve_hopf: could not bracket the foot point of x = " << x;
    throw NewtonNonconvergence(msg.str());
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::abs(gm) <= tol || (hi - lo) <= 1e-15 * (1.0 + std::abs(mid))) return {mid, opt.max_iterations + it};
    if (gm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::ostringstream msg;
  msg << "solve_hopf: foot point iteration did not converge at x = " << x;
  throw NewtonNonconvergence(msg.str());
}

}  // namespace

HopfSolution solve_hopf(const InitialDatum& datum, const FluxModel& model, double t, const Grid& grid,
                        const HopfOptions& options) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("solve_hopf: t must be >= 0");
  const double tc = options.t_c ? *options.t_c : critical_time(datum, model, grid).t_c;
  if (std::isfinite(tc) && t >= options.max_fraction * tc) {
    std::ostringstream msg;
    msg << "solve_hopf: t = " << t << " is not below " << options.max_fraction << " * t_c (t_c = " << tc << ")";
    throw PastBreaking(msg.str());
  }
  if (options.warm_start != nullptr && !(options.warm_start->grid() == grid)) {
    throw InvalidArgument("solve_hopf: warm start lives on a different grid");
  }

  const std::size_t n = grid.n_points();
  HopfSolution sol{t,          Field(grid), Field(grid), Field(grid), Field(grid),
                   Field(grid), Field(grid), 0};
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.point(j);
    const double guess = options.warm_start != nullptr ? (*options.warm_start)[j] : x;
    const Foot foot = find_foot(datum, model, t, x, guess, grid.spacing(), options);
    sol.max_newton_iterations = std::max(sol.max_newton_iterations, foot.iterations);

    const double xi = foot.xi;
    const double p0 = datum.phi(xi);
    const double p1 = datum.dphi(xi);
    const double p2 = datum.d2phi(xi);
    const double p3 = datum.d3phi(xi);
    const double a1 = model.da(p0);
    const double a2 = model.d2a(p0);
    const double a3 = model.d3a(p0);

    const double jac = 1.0 - t * a1 * p1;
    if (!(jac > 0.0)) {
      std::ostringstream msg;
      msg << "solve_hopf: characteristics have crossed at x = " << x << " (t = " << t << ")";
      throw PastBreaking(msg.str());
    }
    const double jac_xi = -t * (a2 * p1 * p1 + a1 * p2);
    const double jac_xixi = -t * (a3 * p1 * p1 * p1 + 3.0 * a2 * p1 * p2 + a1 * p3);
    const double num2 = p2 * jac - p1 * jac_xi;
    const double j2 = jac * jac;
    const double j3 = j2 * jac;

    sol.xi[j] = xi;
    sol.v0[j] = p0;
    sol.v0_x[j] = p1 / jac;
    sol.v0_xx[j] = num2 / j3;
    sol.v0_xxx[j] = (p3 * jac - p1 * jac_xixi) / (j3 * jac) - 3.0 * num2 * jac_xi / (j3 * j2);
    sol.jacobian[j] = jac;
  }
  return sol;
}

Field denominator_field(const HopfSolution& sol, const FluxModel& model) {
  Field out(sol.v0.grid());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = 1.0 + sol.t * model.da(sol.v0[j]) * sol.v0_x[j];
  return out;
}

Field spectral_v0_xx(const HopfSolution& sol) { return spectral_derivative(sol.v0, 2); }

HopfFlow::HopfFlow(InitialDatum datum, FluxModel model, Grid grid, double max_fraction)
    : datum_(std::move(datum)),
      model_(std::move(model)),
      grid_(std::move(grid)),
      tc_(critical_time(datum_, model_, grid_)),
      max_fraction_(max_fraction) {}

HopfSolution HopfFlow::at(double t) {
  HopfOptions opt;
  opt.t_c = tc_.t_c;
  opt.max_fraction = max_fraction_;
  opt.warm_start = last_xi_ ? &*last_xi_ : nullptr;
  HopfSolution sol = solve_hopf(datum_, model_, t, grid_, opt);
  last_xi_ = sol.xi;
  return sol;
}

}  // namespace gkdv
