#pragma once

// Test-side reference computations. These deliberately avoid the library's
// FFT wrapper, multipliers and solvers: transforms go through Eigen's FFT and
// operators are assembled as dense matrices.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace oracle {

using cvec = std::vector<std::complex<double>>;

inline double pi() { return 3.14159265358979323846; }

/// Naive symbol sqrt(c^2 xi^2 + c^4/4) - c^2/2 in long double.
inline long double naive_symbol(long double xi, long double c) {
  return std::sqrt(c * c * xi * xi + c * c * c * c / 4.0L) - c * c / 2.0L;
}

inline double symbol(double xi, double c) {
  if (!std::isfinite(c)) return xi * xi;
  return static_cast<double>(naive_symbol(xi, c));
}

inline std::vector<double> freqs(double L, std::size_t n) {
  std::vector<double> xi(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long kk = k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
    xi[k] = 2.0 * pi() * kk / L;
  }
  return xi;
}

/// Applies a real Fourier symbol to a real periodic signal.
inline std::vector<double> apply_symbol(const std::vector<double>& u, const std::vector<double>& sym) {
  Eigen::FFT<double> fft;
  cvec spec;
  std::vector<double> in(u), out;
  fft.fwd(spec, in);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= sym[k];
  fft.inv(out, spec);
  return out;
}

struct Profile {
  std::vector<double> u;
  double mu = 0.0;
};

/// Positive solution of K u + mu u = u^p with mass M, by fixed-mu
/// Petviashvili iteration nested in bisection on log mu.
inline Profile ground_state(double p, double c, double M, double L, std::size_t n, double mu_lo, double mu_hi) {
  const double h = L / n;
  const auto xi = freqs(L, n);
  auto solve_mu = [&](double mu, std::vector<double> u) {
    std::vector<double> inv(n);
    for (std::size_t k = 0; k < n; ++k) inv[k] = 1.0 / (symbol(xi[k], c) + mu);
    std::vector<double> sym(n);
    for (std::size_t k = 0; k < n; ++k) sym[k] = symbol(xi[k], c) + mu;
    for (int it = 0; it < 2000; ++it) {
      std::vector<double> nl(n);
      for (std::size_t j = 0; j < n; ++j) nl[j] = std::pow(std::abs(u[j]), p);
      const auto lu = apply_symbol(u, sym);
      double num = 0, den = 0;
      for (std::size_t j = 0; j < n; ++j) {
        num += lu[j] * u[j];
        den += nl[j] * u[j];
      }
      const double s = std::pow(num / den, p / (p - 1.0));
      auto next = apply_symbol(nl, inv);
      double diff = 0, nrm = 0;
      for (std::size_t j = 0; j < n; ++j) {
        next[j] *= s;
        diff = std::max(diff, std::abs(next[j] - u[j]));
        nrm = std::max(nrm, std::abs(next[j]));
      }
      u.swap(next);
      if (diff <= 1e-14 * nrm) break;
    }
    return u;
  };
  auto mass = [&](const std::vector<double>& u) {
    double s = 0;
    for (double v : u) s += v * v;
    return s * h;
  };
  auto seed = [&](double mu) {
    std::vector<double> u(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = -0.5 * L + j * h;
      u[j] = std::pow(0.5 * (p + 1.0) * mu, 1.0 / (p - 1.0)) /
             std::pow(std::cosh(0.5 * (p - 1.0) * std::sqrt(mu) * x), 2.0 / (p - 1.0));
    }
    return u;
  };
  double a = std::log(mu_lo), b = std::log(mu_hi);
  Profile best;
  for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
    const double m = 0.5 * (a + b);
    const auto u = solve_mu(std::exp(m), seed(std::exp(m)));
    (mass(u) < M ? a : b) = m;
    best = {u, std::exp(m)};
  }
  return best;
}

/// Dense real matrix of the circulant multiplier with symbol `sym` on n points.
inline Eigen::MatrixXd circulant(const std::vector<double>& sym) {
  const std::size_t n = sym.size();
  std::vector<double> e(n, 0.0);
  e[0] = 1.0;
  const auto col = apply_symbol(e, sym);
  Eigen::MatrixXd A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A(i, j) = col[(i + n - j) % n];
  return A;
}

/// Orthonormal basis of even grid functions (j <-> n - j) orthogonal to q.
inline Eigen::MatrixXd even_complement_basis(const std::vector<double>& q) {
  const std::size_t n = q.size();
  const std::size_t m = n / 2 + 1;
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, m);
  // Samples are centered at index n/2: index n/2 + k mirrors to n/2 - k.
  const std::size_t c = n / 2;
  E(c, 0) = 1.0;
  for (std::size_t k = 1; k < m - 1; ++k) {
    E(c + k, k) = 1.0 / std::sqrt(2.0);
    E(c - k, k) = 1.0 / std::sqrt(2.0);
  }
  E(0, m - 1) = 1.0;
  Eigen::VectorXd qv(n);
  for (std::size_t j = 0; j < n; ++j) qv[j] = q[j];
  Eigen::VectorXd qe = E.transpose() * qv;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(qe);
  Eigen::MatrixXd H = qr.householderQ();
  return E * H.rightCols(m - 1);
}

/// Real band-limited random field, for property tests independent of the library generator.
inline std::vector<double> smooth_random(std::size_t n, double L, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> w(0.5, 3.0);
  const double width = w(rng);
  const auto xi = freqs(L, n);
  cvec spec(n);
  for (std::size_t k = 0; k < n; ++k) spec[k] = std::complex<double>(nd(rng), nd(rng)) * std::exp(-0.5 * xi[k] * xi[k] * width * width);
  spec[n / 2] = 0.0;
  Eigen::FFT<double> fft;
  cvec out;
  fft.inv(out, spec);
  std::vector<double> u(n);
  for (std::size_t j = 0; j < n; ++j) u[j] = out[j].real();
  return u;
}

}  // namespace oracle
