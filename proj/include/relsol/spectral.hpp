#pragma once

// Pseudospectral substrate: discrete transforms, the L2 inner product,
// Fourier multipliers, and the pseudo-relativistic symbol.
//
// Normalization: the forward transform is unnormalized and the inverse
// carries 1/N. Quadrature weights enter only through `inner` (weight h) and
// the Parseval-type sums below (weight h/N), so
//     inner(u, u) = h sum |u_j|^2 = (h/N) sum |u^_k|^2.

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "relsol/error.hpp"
#include "relsol/fft.hpp"
#include "relsol/grid.hpp"

namespace relsol {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline std::vector<cplx> spectrum(const Field& u) { return fft::forward(u.values()); }

inline Field from_spectrum(const Grid& g, std::span<const cplx> spec) {
  return Field(g, fft::inverse(spec));
}

/// <u, v> = h sum u_j conj(v_j).
inline cplx inner(const Field& u, const Field& v) {
  u.require_same_grid(v);
  cplx s{};
  for (std::size_t j = 0; j < u.size(); ++j) s += u[j] * std::conj(v[j]);
  return s * u.grid().spacing();
}

inline double norm_sq(const Field& u) {
  double s = 0.0;
  for (const auto& z : u.values()) s += std::norm(z);
  return s * u.grid().spacing();
}

inline double norm(const Field& u) { return std::sqrt(norm_sq(u)); }

/// sigma_c(xi) = sqrt(c^2 xi^2 + c^4/4) - c^2/2, in the rationalized form
/// c^2 xi^2 / (sqrt(c^2 xi^2 + c^4/4) + c^2/2). For c = infinity returns xi^2.
inline double hc_symbol(double xi, double c) {
  if (std::isinf(c)) return xi * xi;
  const double cx2 = c * c * xi * xi;
  const double half_c2 = 0.5 * c * c;
  return cx2 / (std::sqrt(cx2 + half_c2 * half_c2) + half_c2);
}

/// xi^2 - sigma_c(xi) = xi^4 / (sqrt(c^2 xi^2 + c^4/4) + c^2/2 + xi^2), >= 0.
inline double kinetic_gap_symbol(double xi, double c) {
  if (std::isinf(c)) return 0.0;
  const double x2 = xi * xi;
  const double half_c2 = 0.5 * c * c;
  return x2 * x2 / (std::sqrt(c * c * x2 + half_c2 * half_c2) + half_c2 + x2);
}

/// Real, even Fourier multiplier.
struct MultiplierSpec {
  enum class Kind {
    Hc,              ///< sigma_c
    SqrtHc,          ///< sqrt(sigma_c)
    OnePlusHc,       ///< 1 + sigma_c, the H^{1/2}-type weight
    SqrtOnePlusHc,   ///< sqrt(1 + sigma_c)
    NegLaplacian,    ///< xi^2
    AbsDxPow,        ///< |xi|^s
    LowPass,         ///< 1 for |xi| <= cutoff
    HighPass,        ///< 1 for |xi| >  cutoff
  };

  Kind kind = Kind::Hc;
  double c = kInfinity;
  double s = 1.0;
  double cutoff = 0.0;

  static MultiplierSpec hc(double c) { return {Kind::Hc, c}; }
  static MultiplierSpec sqrt_hc(double c) { return {Kind::SqrtHc, c}; }
  static MultiplierSpec weight_1_plus_hc(double c) { return {Kind::OnePlusHc, c}; }
  static MultiplierSpec sqrt_weight_1_plus_hc(double c) { return {Kind::SqrtOnePlusHc, c}; }
  static MultiplierSpec neg_laplacian() { return {Kind::NegLaplacian}; }
  static MultiplierSpec abs_dx_pow(double s) { return {Kind::AbsDxPow, kInfinity, s}; }
  static MultiplierSpec low_pass(double cutoff) { return {Kind::LowPass, kInfinity, 1.0, cutoff}; }
  static MultiplierSpec high_pass(double cutoff) { return {Kind::HighPass, kInfinity, 1.0, cutoff}; }

  double operator()(double xi) const {
    switch (kind) {
      case Kind::Hc: return hc_symbol(xi, c);
      case Kind::SqrtHc: return std::sqrt(hc_symbol(xi, c));
      case Kind::OnePlusHc: return 1.0 + hc_symbol(xi, c);
      case Kind::SqrtOnePlusHc: return std::sqrt(1.0 + hc_symbol(xi, c));
      case Kind::NegLaplacian: return xi * xi;
      case Kind::AbsDxPow: return xi == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(std::abs(xi), s);
      case Kind::LowPass: return std::abs(xi) <= cutoff ? 1.0 : 0.0;
      case Kind::HighPass: return std::abs(xi) > cutoff ? 1.0 : 0.0;
    }
    return 0.0;
  }
};

/// Multiply the spectrum of u by sym(xi_k) and transform back.
template <class Symbol>
Field apply_symbol(const Field& u, Symbol&& sym) {
  const Grid& g = u.grid();
  auto spec = spectrum(u);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= sym(g.frequency(k));
  return from_spectrum(g, spec);
}

/// Multiply the spectrum by precomputed values d_k (FFT ordering).
inline Field apply_diagonal(const Field& u, std::span<const double> d) {
  auto spec = spectrum(u);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= d[k];
  return from_spectrum(u.grid(), spec);
}

inline Field apply_multiplier(const Field& u, const MultiplierSpec& m) {
  const Grid& g = u.grid();
  std::vector<double> sym(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    sym[k] = m(g.frequency(k));
    if (!std::isfinite(sym[k]))
      throw UsageError("multiplier symbol is not finite at xi = " + std::to_string(g.frequency(k)));
  }
  auto spec = spectrum(u);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= sym[k];
  return from_spectrum(g, spec);
}

/// (h/N) sum_k w(xi_k) |u^_k|^2, i.e. <W u, u> for the multiplier W.
template <class Weight>
double weighted_norm_sq(const Field& u, Weight&& w) {
  const Grid& g = u.grid();
  const auto spec = spectrum(u);
  double s = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) s += w(g.frequency(k)) * std::norm(spec[k]);
  return s * g.spacing() / static_cast<double>(g.size());
}

/// ||sqrt(H_c) u||^2.
inline double kinetic_c(const Field& u, double c) {
  return weighted_norm_sq(u, [c](double xi) { return hc_symbol(xi, c); });
}

/// ||d_x u||^2.
inline double kinetic_inf(const Field& u) {
  return weighted_norm_sq(u, [](double xi) { return xi * xi; });
}

/// ||u||_{H^s}^2 with weight (1 + xi^2)^s.
inline double hs_norm_sq(const Field& u, double s) {
  return weighted_norm_sq(u, [s](double xi) { return std::pow(1.0 + xi * xi, s); });
}

/// ||u||_{\dot H^2}^2 = ||xi^2 u^||^2.
inline double h2_seminorm_sq(const Field& u) {
  return weighted_norm_sq(u, [](double xi) { return xi * xi * xi * xi; });
}

/// Spectral derivative. The Nyquist mode is zeroed (odd symbol).
inline Field derivative(const Field& u) {
  const Grid& g = u.grid();
  auto spec = spectrum(u);
  const std::size_t nyq = g.size() / 2;
  for (std::size_t k = 0; k < spec.size(); ++k)
    spec[k] = (k == nyq) ? cplx{} : spec[k] * cplx(0.0, g.frequency(k));
  return from_spectrum(g, spec);
}

/// result(x) = u(x - a) for real a, by trigonometric interpolation. The
/// Nyquist mode is multiplied by cos(xi a) so real fields stay real.
inline Field translate(const Field& u, double a) {
  const Grid& g = u.grid();
  auto spec = spectrum(u);
  const std::size_t nyq = g.size() / 2;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double xi = g.frequency(k);
    spec[k] *= (k == nyq) ? cplx(std::cos(xi * a)) : std::polar(1.0, -xi * a);
  }
  return from_spectrum(g, spec);
}

/// Outcome of checking the lower/upper bounds on sigma_c over sample points.
struct SymbolBoundsReport {
  struct Violation {
    double xi;
    std::string bound;  ///< "low-frequency", "high-frequency", "upper"
    double margin;
  };

  double c = 0.0;
  double delta = 0.0;
  double worst_low_margin = kInfinity;    ///< min sigma - xi^2/2 on |xi| <= c delta
  double worst_high_margin = kInfinity;   ///< min sigma - c delta |xi|/2 on |xi| >= c delta
  double worst_upper_margin = kInfinity;  ///< min xi^2 - sigma
  double worst_gap_margin = kInfinity;    ///< min xi^4/c^2 - (xi^2 - sigma)
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    if (ok()) {
      os << "symbol bounds hold for c=" << c << " delta=" << delta;
    } else {
      os << violations.size() << " symbol bound violation(s) for c=" << c << " delta=" << delta;
      const auto& v = violations.front();
      os << "; first at xi=" << v.xi << " (" << v.bound << ", margin " << v.margin << ")";
    }
    return os.str();
  }
};

/// Checks  sigma_c >= xi^2/2 (|xi| <= c delta),  sigma_c >= (c delta/2)|xi|
/// (|xi| >= c delta),  sigma_c <= xi^2,  and  xi^2 - sigma_c <= xi^4/c^2.
/// Violations are counted only beyond a few ulps of the compared bound.
inline SymbolBoundsReport symbol_bounds_check(double c, double delta, std::span<const double> xi_samples) {
  if (!(c > 0.0)) throw UsageError("symbol_bounds_check: c must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw UsageError("symbol_bounds_check: delta must lie in (0, 1]");
  constexpr double kUlps = 8.0 * std::numeric_limits<double>::epsilon();

  SymbolBoundsReport r;
  r.c = c;
  r.delta = delta;
  const double cut = c * delta;
  auto record = [&](double xi, const char* name, double margin, double scale, double& worst) {
    worst = std::min(worst, margin);
    if (margin < -kUlps * scale) r.violations.push_back({xi, name, margin});
  };
  for (double xi : xi_samples) {
    const double s = hc_symbol(xi, c);
    const double a = std::abs(xi);
    const double x2 = xi * xi;
    if (a <= cut) record(xi, "low-frequency", s - 0.5 * x2, x2, r.worst_low_margin);
    if (a >= cut) record(xi, "high-frequency", s - 0.5 * cut * a, cut * a, r.worst_high_margin);
    record(xi, "upper", x2 - s, x2, r.worst_upper_margin);
    record(xi, "difference", x2 * x2 / (c * c) - kinetic_gap_symbol(xi, c), x2 * x2 / (c * c),
           r.worst_gap_margin);
  }
  return r;
}

}  // namespace relsol
