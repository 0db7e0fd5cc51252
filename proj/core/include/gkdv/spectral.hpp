#pragma once

// Periodic grid, Fourier transforms, spectral differentiation, Sobolev
// norms and 2/3-rule dealiasing. Everything else in the library is built on
// these primitives.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace gkdv {

using Complex = std::complex<double>;

// Half spectrum of a real field as produced by a real-to-complex transform:
// entries m = 0 .. n/2 (the last one is the Nyquist mode). Coefficients are
// unnormalized, i.e. F_m = sum_j f_j exp(-i k_m x'_j) with x'_j = j * spacing.
using Spectrum = std::vector<Complex>;

/// Uniform periodic sampling of [-L/2, L/2). Cheap to copy: the wavenumber
/// tables are shared between copies.
class Grid {
 public:
  std::size_t n_points() const noexcept { return impl_->n; }
  double length() const noexcept { return impl_->length; }
  double spacing() const noexcept { return impl_->spacing; }

  /// Wavenumbers in transform ordering, m = 0, 1, ..., n/2, -n/2+1, ..., -1.
  std::span<const double> wavenumbers() const noexcept { return impl_->k_full; }
  /// Wavenumbers of the half spectrum, m = 0 .. n/2.
  std::span<const double> half_wavenumbers() const noexcept { return impl_->k_half; }

  double point(std::size_t j) const noexcept;
  std::vector<double> points() const;

  std::size_t half_size() const noexcept { return impl_->n / 2 + 1; }
  std::size_t nyquist_index() const noexcept { return impl_->n / 2; }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.impl_ == b.impl_ ||
           (a.impl_->n == b.impl_->n && a.impl_->length == b.impl_->length);
  }

 private:
  struct Impl {
    std::size_t n;
    double length;
    double spacing;
    std::vector<double> k_full;
    std::vector<double> k_half;
  };
  explicit Grid(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend Grid make_grid(std::size_t n_points, double length);
};

/// n_points must be a power of two >= 16 and length > 0.
Grid make_grid(std::size_t n_points, double length);

/// A real function sampled on a Grid.
class Field {
 public:
  explicit Field(Grid grid);  // zero field
  Field(Grid grid, std::vector<double> samples);

  /// Samples grid.point(j) -> fn(x).
  static Field from_function(const Grid& grid, const std::function<double(double)>& fn);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t j) const noexcept { return samples_[j]; }
  double& operator[](std::size_t j) noexcept { return samples_[j]; }

  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s) noexcept;

 private:
  Grid grid_;
  std::vector<double> samples_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
/// Pointwise product.
Field pointwise_product(const Field& a, const Field& b);

/// Exponent of the Bessel-potential space H^s, s >= 0.
class SobolevIndex {
 public:
  explicit SobolevIndex(double s);
  double value() const noexcept { return s_; }

 private:
  double s_;
};

Spectrum forward_transform(const Field& f);
Field inverse_transform(const Grid& grid, std::span<const Complex> half_spectrum);

/// Multiplies the spectrum by (i k)^order. Odd orders zero the Nyquist mode.
/// order <= 11.
Field spectral_derivative(const Field& f, int order);

/// In-place version on a half spectrum; same conventions.
void differentiate_spectrum(const Grid& grid, std::span<Complex> half_spectrum, int order);

/// sqrt( sum_m (1 + k_m^2)^s |f_m|^2 * L ) with f_m the amplitude coefficients.
double sobolev_norm(const Field& f, SobolevIndex s);

/// Zeroes all modes with |m| > n/3.
Field dealias(const Field& f);
void dealias_spectrum(const Grid& grid, std::span<Complex> half_spectrum);

/// True if mode index m (0..n/2) survives the 2/3 rule.
bool kept_by_dealiasing(const Grid& grid, std::size_t m) noexcept;

/// Builds a full-length symbol (transform ordering) from a function of k.
std::vector<Complex> make_symbol(const Grid& grid, const std::function<Complex(double)>& fn);

/// Pointwise multiplication in spectral space by a full-length symbol.
/// The symbol must satisfy symbol(-k) = conj(symbol(k)); the Nyquist mode uses
/// the real part of its entry. Throws InvalidArgument otherwise.
Field apply_multiplier(const Field& f, std::span<const Complex> symbol);

/// Bessel potential (1 + k^2)^{s/2}; s may be negative.
Field apply_bessel_potential(const Field& f, double s);

/// Evaluates the trigonometric interpolant of f at an arbitrary x
/// (periodically extended). O(n) per call.
class FourierInterpolant {
 public:
  explicit FourierInterpolant(const Field& f);
  double operator()(double x) const;

 private:
  Grid grid_;
  Spectrum coeffs_;  // amplitude coefficients, Nyquist halved
};

/// Fraction of the L2 norm carried by modes removed by the 2/3 rule.
double spectral_tail_fraction(const Field& f);

}  // namespace gkdv
