#include "gkdv/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "gkdv/errors.hpp"

namespace gkdv {

namespace {

// FFTW planning is not thread-safe, execution is. Plans are created once per
// size under a lock and executed with the new-array interface.
class PlanCache {
 public:
  struct Plans {
    fftw_plan forward;
    fftw_plan backward;
  };

  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  const Plans& get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<double> real(n);
    std::vector<fftw_complex> cplx(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p{};
    p.forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(), cplx.data(), flags);
    p.backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx.data(), real.data(), flags);
    return plans_.emplace(n, p).first->second;
  }

  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, Plans> plans_;
};

Complex ipow(double k, int order) {
  // (i k)^order without going through std::pow on complex numbers
  double mag = 1.0;
  for (int i = 0; i < order; ++i) mag *= k;
  switch (order % 4) {
    case 0: return {mag, 0.0};
    case 1: return {0.0, mag};
    case 2: return {-mag, 0.0};
    default: return {0.0, -mag};
  }
}

}  // namespace

// ---------------------------------------------------------------- Grid

Grid make_grid(std::size_t n_points, double length) {
  if (n_points < 16 || !std::has_single_bit(n_points)) {
    throw InvalidArgument("make_grid: n_points must be a power of two >= 16");
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidArgument("make_grid: length must be positive and finite");
  }
  auto impl = std::make_shared<Grid::Impl>();
  impl->n = n_points;
  impl->length = length;
  impl->spacing = length / static_cast<double>(n_points);
  const double dk = 2.0 * std::numbers::pi / length;
  const auto n = static_cast<long>(n_points);
  impl->k_full.resize(n_points);
  for (long m = 0; m < n; ++m) {
    const long signed_m = (m <= n / 2) ? m : m - n;
    impl->k_full[static_cast<std::size_t>(m)] = dk * static_cast<double>(signed_m);
  }
  impl->k_half.assign(impl->k_full.begin(), impl->k_full.begin() + n / 2 + 1);
  return Grid(std::move(impl));
}

double Grid::point(std::size_t j) const noexcept {
  return -0.5 * impl_->length + static_cast<double>(j) * impl_->spacing;
}

std::vector<double> Grid::points() const {
  std::vector<double> x(impl_->n);
  for (std::size_t j = 0; j < impl_->n; ++j) x[j] = point(j);
  return x;
}

// ---------------------------------------------------------------- Field

Field::Field(Grid grid) : grid_(std::move(grid)), samples_(grid_.n_points(), 0.0) {}

Field::Field(Grid grid, std::vector<double> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
  if (samples_.size() != grid_.n_points()) {
    throw InvalidArgument("Field: sample count does not match grid");
  }
}

Field Field::from_function(const Grid& grid, const std::function<double(double)>& fn) {
  std::vector<double> s(grid.n_points());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = fn(grid.point(j));
  return Field(grid, std::move(s));
}

bool Field::all_finite() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

Field& Field::operator+=(const Field& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("Field: grid mismatch");
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += other.samples_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("Field: grid mismatch");
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] -= other.samples_[j];
  return *this;
}

Field& Field::operator*=(double s) noexcept {
  for (double& v : samples_) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

Field pointwise_product(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("pointwise_product: grid mismatch");
  Field out(a.grid());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

SobolevIndex::SobolevIndex(double s) : s_(s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("SobolevIndex: s must be >= 0");
}

// ---------------------------------------------------------------- transforms

Spectrum forward_transform(const Field& f) {
  const std::size_t n = f.size();
  const auto& plans = PlanCache::instance().get(n);
  Spectrum out(n / 2 + 1);
  // r2c does not modify its input
  fftw_execute_dft_r2c(plans.forward, const_cast<double*>(f.samples().data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

Field inverse_transform(const Grid& grid, std::span<const Complex> half_spectrum) {
  const std::size_t n = grid.n_points();
  if (half_spectrum.size() != n / 2 + 1) {
    throw InvalidArgument("inverse_transform: spectrum size does not match grid");
  }
  const auto& plans = PlanCache::instance().get(n);
  Spectrum scratch(half_spectrum.begin(), half_spectrum.end());  // c2r destroys its input
  std::vector<double> out(n);
  fftw_execute_dft_c2r(plans.backward, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= inv_n;
  return Field(grid, std::move(out));
}

void differentiate_spectrum(const Grid& grid, std::span<Complex> half_spectrum, int order) {
  if (order < 0 || order > 11) throw InvalidArgument("spectral_derivative: order must be in [0, 11]");
  if (order == 0) return;
  const auto k = grid.half_wavenumbers();
  for (std::size_t m = 0; m < half_spectrum.size(); ++m) half_spectrum[m] *= ipow(k[m], order);
  if (order % 2 == 1) half_spectrum[grid.nyquist_index()] = 0.0;
}

Field spectral_derivative(const Field& f, int order) {
  Spectrum s = forward_transform(f);
  differentiate_spectrum(f.grid(), s, order);
  return inverse_transform(f.grid(), s);
}

double sobolev_norm(const Field& f, SobolevIndex s) {
  const Spectrum spec = forward_transform(f);
  const Grid& g = f.grid();
  const auto k = g.half_wavenumbers();
  const double n = static_cast<double>(g.n_points());
  const double sv = s.value();
  double sum = 0.0;
  for (std::size_t m = 0; m < spec.size(); ++m) {
    const double weight = (m == 0 || m == g.nyquist_index()) ? 1.0 : 2.0;
    const double mult = (sv == 0.0) ? 1.0 : std::pow(1.0 + k[m] * k[m], sv);
    sum += weight * mult * std::norm(spec[m] / n);
  }
  return std::sqrt(sum * g.length());
}

bool kept_by_dealiasing(const Grid& grid, std::size_t m) noexcept {
  return 3 * m <= grid.n_points();
}

void dealias_spectrum(const Grid& grid, std::span<Complex> half_spectrum) {
  for (std::size_t m = 0; m < half_spectrum.size(); ++m) {
    if (!kept_by_dealiasing(grid, m)) half_spectrum[m] = 0.0;
  }
}

Field dealias(const Field& f) {
  Spectrum s = forward_transform(f);
  dealias_spectrum(f.grid(), s);
  return inverse_transform(f.grid(), s);
}

std::vector<Complex> make_symbol(const Grid& grid, const std::function<Complex(double)>& fn) {
  std::vector<Complex> out(grid.n_points());
  const auto k = grid.wavenumbers();
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = fn(k[m]);
  return out;
}

Field apply_multiplier(const Field& f, std::span<const Complex> symbol) {
  const Grid& g = f.grid();
  const std::size_t n = g.n_points();
  if (symbol.size() != n) throw InvalidArgument("apply_multiplier: symbol length must equal n_points");
  for (std::size_t m = 1; m < n / 2; ++m) {
    const Complex pos = symbol[m];
    const Complex neg = symbol[n - m];
    const double scale = 1.0 + std::abs(pos);
    if (std::abs(neg - std::conj(pos)) > 1e-12 * scale) {
      throw InvalidArgument("apply_multiplier: symbol violates conjugate symmetry");
    }
  }
  if (std::abs(symbol[0].imag()) > 1e-12 * (1.0 + std::abs(symbol[0]))) {
    throw InvalidArgument("apply_multiplier: zero-mode symbol must be real");
  }
  Spectrum s = forward_transform(f);
  for (std::size_t m = 0; m < n / 2; ++m) s[m] *= symbol[m];
  s[n / 2] *= symbol[n / 2].real();
  return inverse_transform(g, s);
}

Field apply_bessel_potential(const Field& f, double s) {
  const auto symbol = make_symbol(f.grid(), [s](double k) { return Complex(std::pow(1.0 + k * k, 0.5 * s)); });
  return apply_multiplier(f, symbol);
}

FourierInterpolant::FourierInterpolant(const Field& f) : grid_(f.grid()), coeffs_(forward_transform(f)) {
  const double n = static_cast<double>(grid_.n_points());
  for (auto& c : coeffs_) c /= n;
  coeffs_.back() *= 0.5;  // Nyquist shared between +-n/2
}

double FourierInterpolant::operator()(double x) const {
  const auto k = grid_.half_wavenumbers();
  const double shifted = x + 0.5 * grid_.length();
  double sum = coeffs_[0].real();
  for (std::size_t m = 1; m < coeffs_.size(); ++m) {
    const double phase = k[m] * shifted;
    sum += 2.0 * (coeffs_[m].real() * std::cos(phase) - coeffs_[m].imag() * std::sin(phase));
  }
  return sum;
}

double spectral_tail_fraction(const Field& f) {
  const Spectrum s = forward_transform(f);
  const Grid& g = f.grid();
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t m = 0; m < s.size(); ++m) {
    const double w = (m == 0 || m == g.nyquist_index()) ? 1.0 : 2.0;
    const double e = w * std::norm(s[m]);
    total += e;
    if (!kept_by_dealiasing(g, m)) tail += e;
  }
  if (total == 0.0) return 0.0;
  return std::sqrt(tail / total);
}

}  // namespace gkdv
