#pragma once

// Optimal translation/phase alignment of a field against a reference in a
// weighted L2 norm  ||u||_w^2 = (h/N) sum w(xi_k) |u^_k|^2.
//
// With corr(a) = <W u(. - a), ref>,
//     ||e^{i theta} u(. - a) - ref||_w^2 = ||u||_w^2 + ||ref||_w^2 - 2 Re(e^{i theta} corr(a)),
// so the optimal phase is theta = -arg corr(a) and the optimal shift
// maximizes |corr(a)|. corr is evaluated at every grid shift with one FFT,
// the peak is refined by a parabola through the three samples around it and
// then polished with Newton steps on the trigonometric polynomial |corr(a)|^2.

#include <algorithm>
#include <cmath>
#include <vector>

#include "relsol/error.hpp"
#include "relsol/fft.hpp"
#include "relsol/grid.hpp"
#include "relsol/spectral.hpp"

namespace relsol {

struct Alignment {
  double shift = 0.0;       ///< a in u(x - a)
  double phase = 0.0;       ///< theta in e^{i theta}
  cplx correlation{};       ///< corr(a) at the optimum
  double distance_sq = 0.0;
  double norm_u_sq = 0.0;
  double norm_ref_sq = 0.0;
  double distance() const { return std::sqrt(std::max(distance_sq, 0.0)); }
};

namespace detail {

struct CorrelationPoly {
  std::vector<double> xi;
  std::vector<cplx> coef;  // includes the (h/N) factor

  void eval(double a, cplx& f, cplx& d1, cplx& d2) const {
    f = d1 = d2 = cplx{};
    for (std::size_t k = 0; k < xi.size(); ++k) {
      const cplx e = coef[k] * std::polar(1.0, -xi[k] * a);
      f += e;
      d1 += cplx(0.0, -xi[k]) * e;
      d2 += -xi[k] * xi[k] * e;
    }
  }
};

}  // namespace detail

template <class Weight>
Alignment align(const Field& u, const Field& ref, Weight&& w) {
  u.require_same_grid(ref);
  const Grid& g = u.grid();
  const std::size_t n = g.size();
  const double scale = g.spacing() / static_cast<double>(n);
  const auto us = spectrum(u);
  const auto rs = spectrum(ref);

  Alignment out;
  detail::CorrelationPoly poly;
  poly.xi.resize(n);
  poly.coef.resize(n);
  std::vector<cplx> c(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double xi = g.frequency(k);
    const double wk = w(xi);
    out.norm_u_sq += wk * std::norm(us[k]);
    out.norm_ref_sq += wk * std::norm(rs[k]);
    c[k] = wk * us[k] * std::conj(rs[k]);
    poly.xi[k] = xi;
    poly.coef[k] = (k == n / 2) ? cplx{} : c[k] * scale;
  }
  out.norm_u_sq *= scale;
  out.norm_ref_sq *= scale;

  const auto corr = fft::forward(c);
  std::vector<double> mag(n);
  for (std::size_t m = 0; m < n; ++m) mag[m] = std::abs(corr[m]) * scale;
  const auto it_max = std::max_element(mag.begin(), mag.end());
  const double vmax = *it_max;
  const double vmin = *std::min_element(mag.begin(), mag.end());
  if (!(vmax > 0.0) || (vmax - vmin) <= 1e-12 * vmax)
    throw Error("alignment: degenerate (flat) correlation peak");

  const std::size_t m0 = static_cast<std::size_t>(it_max - mag.begin());
  const double fm = mag[(m0 + n - 1) % n], f0 = mag[m0], fp = mag[(m0 + 1) % n];
  const double curv = fm - 2.0 * f0 + fp;
  double offset = curv < 0.0 ? 0.5 * (fm - fp) / curv : 0.0;
  offset = std::clamp(offset, -0.5, 0.5);
  const double h = g.spacing();
  const double base = static_cast<double>(g.wavenumber(m0)) * h;
  double a = base + offset * h;

  // Newton on f(a) = |corr(a)|^2, kept within one cell of the grid peak.
  for (int it = 0; it < 30; ++it) {
    cplx f, d1, d2;
    poly.eval(a, f, d1, d2);
    const double g1 = 2.0 * (std::conj(f) * d1).real();
    const double g2 = 2.0 * (std::norm(d1) + (std::conj(f) * d2).real());
    if (!(g2 < 0.0)) break;
    const double step = -g1 / g2;
    const double next = std::clamp(a + step, base - h, base + h);
    if (std::abs(next - a) <= 1e-15 * std::max(1.0, std::abs(a))) {
      a = next;
      break;
    }
    a = next;
  }

  cplx f, d1, d2;
  poly.eval(a, f, d1, d2);
  // Nyquist contribution, real-symmetric treatment.
  f += c[n / 2] * scale * std::cos(g.frequency(n / 2) * a);
  out.shift = a;
  out.correlation = f;
  out.phase = -std::arg(f);
  // Summed termwise: the expanded form loses everything below sqrt(eps).
  const cplx rot = std::polar(1.0, out.phase);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx m = (k == n / 2) ? cplx(std::cos(poly.xi[k] * a)) : std::polar(1.0, -poly.xi[k] * a);
    const double xi = g.frequency(k);
    out.distance_sq += w(xi) * std::norm(rot * m * us[k] - rs[k]);
  }
  out.distance_sq *= scale;
  return out;
}

/// e^{i theta} u(. - a) for the alignment's parameters.
inline Field apply_alignment(const Field& u, const Alignment& al) {
  Field v = translate(u, al.shift);
  v *= std::polar(1.0, al.phase);
  return v;
}

}  // namespace relsol
