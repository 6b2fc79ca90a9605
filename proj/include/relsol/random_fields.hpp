#pragma once

// Seeded random test fields.

#include <cmath>
#include <cstdint>
#include <random>

#include "relsol/grid.hpp"
#include "relsol/spectral.hpp"

namespace relsol {

/// Complex field with random Fourier coefficients under a Gaussian envelope
/// of random width, random amplitude and center, band-limited to
/// |xi| <= nyquist / 3.
inline Field random_band_limited(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uw(0.25, 4.0), ua(0.05, 4.0), ux(-0.25, 0.25);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double width = uw(rng);  // spatial width
  const double amp = ua(rng);
  const double center = ux(rng) * g.length() * 0.5;
  const double cut = g.nyquist() / 3.0;
  std::vector<cplx> spec(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double xi = g.frequency(k);
    const double re = nd(rng), im = nd(rng);
    if (std::abs(xi) > cut) continue;
    spec[k] = cplx(re, im) * std::exp(-0.5 * xi * xi * width * width) * std::polar(1.0, -xi * center);
  }
  Field u = from_spectrum(g, spec);
  const double m = u.max_abs();
  if (m > 0.0) u *= amp / m;
  return u;
}

}  // namespace relsol
