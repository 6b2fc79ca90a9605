#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relsol/error.hpp"

namespace relsol {

using cplx = std::complex<double>;

/// Uniform periodic grid on [-L/2, L/2) with N (even) samples.
///
/// Sample j sits at x_j = -L/2 + j h, so the origin is sample N/2 and the
/// reflection x -> -x maps sample j to (N - j) mod N. Frequencies follow the
/// FFT ordering: index k < N/2 carries 2 pi k / L, index k >= N/2 carries
/// 2 pi (k - N) / L. The single Nyquist mode is -pi/h.
class Grid {
 public:
  /// Empty grid (N = 0), only as a placeholder for default-constructed fields.
  Grid() = default;

  Grid(double length, std::size_t n_points) : length_(length), n_(n_points) {
    if (!(length > 0.0) || !std::isfinite(length))
      throw UsageError("grid length must be positive and finite, got " + std::to_string(length));
    if (n_points < 2 || n_points % 2 != 0)
      throw UsageError("grid size must be an even integer >= 2, got " + std::to_string(n_points));
    spacing_ = length / static_cast<double>(n_points);
    if (spacing_ * static_cast<double>(n_points) != length)
      throw UsageError("grid spacing L/N does not reproduce L exactly; choose a representable L");
  }

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return spacing_; }

  double x(std::size_t j) const noexcept {
    return -0.5 * length_ + static_cast<double>(j) * spacing_;
  }

  /// Signed integer wavenumber of FFT index k.
  long wavenumber(std::size_t k) const noexcept {
    const long kk = static_cast<long>(k);
    const long n = static_cast<long>(n_);
    return kk < n / 2 ? kk : kk - n;
  }

  double frequency(std::size_t k) const noexcept {
    return 2.0 * std::numbers::pi * static_cast<double>(wavenumber(k)) / length_;
  }

  std::vector<double> frequencies() const {
    std::vector<double> xi(n_);
    for (std::size_t k = 0; k < n_; ++k) xi[k] = frequency(k);
    return xi;
  }

  double nyquist() const noexcept { return std::numbers::pi / spacing_; }

  std::size_t mirror_index(std::size_t j) const noexcept { return (n_ - j) % n_; }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.length_ == b.length_ && a.n_ == b.n_;
  }

 private:
  double length_ = 0.0;
  std::size_t n_ = 0;
  double spacing_ = 0.0;
};

/// Complex grid function. Value semantics; carries its grid.
class Field {
 public:
  Field() = default;

  explicit Field(Grid grid) : grid_(grid), values_(grid.size(), cplx{}) {}

  Field(Grid grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw UsageError("field has " + std::to_string(values_.size()) + " samples, grid has " +
                       std::to_string(grid_.size()));
  }

  template <class F>
  static Field sample(Grid grid, F&& f) {
    Field u(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) u.values_[j] = cplx(f(grid.x(j)));
    return u;
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const cplx> values() const noexcept { return values_; }
  std::span<cplx> values() noexcept { return values_; }
  std::vector<cplx>& data() noexcept { return values_; }
  const std::vector<cplx>& data() const noexcept { return values_; }

  cplx& operator[](std::size_t j) noexcept { return values_[j]; }
  const cplx& operator[](std::size_t j) const noexcept { return values_[j]; }

  double max_abs() const noexcept {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z));
    return m;
  }

  bool all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](const cplx& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  /// True when every sample has |Im| <= tol and Re >= -tol.
  bool is_real_nonneg(double tol = 0.0) const noexcept {
    return std::all_of(values_.begin(), values_.end(), [tol](const cplx& z) {
      return std::abs(z.imag()) <= tol && z.real() >= -tol;
    });
  }

  Field& operator+=(const Field& o) {
    require_same_grid(o);
    for (std::size_t j = 0; j < size(); ++j) values_[j] += o.values_[j];
    return *this;
  }
  Field& operator-=(const Field& o) {
    require_same_grid(o);
    for (std::size_t j = 0; j < size(); ++j) values_[j] -= o.values_[j];
    return *this;
  }
  Field& operator*=(cplx a) noexcept {
    for (auto& z : values_) z *= a;
    return *this;
  }
  Field& operator*=(double a) noexcept {
    for (auto& z : values_) z *= a;
    return *this;
  }

  /// this += a * o
  Field& axpy(cplx a, const Field& o) {
    require_same_grid(o);
    for (std::size_t j = 0; j < size(); ++j) values_[j] += a * o.values_[j];
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(cplx s, Field a) { return a *= s; }
  friend Field operator*(double s, Field a) { return a *= s; }

  void require_same_grid(const Field& o) const {
    if (!(grid_ == o.grid_)) throw UsageError("fields live on different grids");
  }

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

/// Pointwise real part, imaginary part dropped.
inline Field real_part(const Field& u) {
  Field r(u.grid());
  for (std::size_t j = 0; j < u.size(); ++j) r[j] = u[j].real();
  return r;
}

/// (u(x) + u(-x)) / 2 on the grid.
inline Field symmetrize(const Field& u) {
  const Grid& g = u.grid();
  Field s(g);
  for (std::size_t j = 0; j < g.size(); ++j) s[j] = 0.5 * (u[j] + u[g.mirror_index(j)]);
  return s;
}

/// Circular shift by an integer number of samples: result(x) = u(x - m h).
inline Field shift_samples(const Field& u, long m) {
  const long n = static_cast<long>(u.size());
  Field s(u.grid());
  for (long j = 0; j < n; ++j) {
    const long src = ((j - m) % n + n) % n;
    s[static_cast<std::size_t>(j)] = u[static_cast<std::size_t>(src)];
  }
  return s;
}

}  // namespace relsol
