#pragma once

// Closed-form non-relativistic soliton
//     -Q'' - Q^p = -mu Q,   Q(x) = ((p+1) mu / 2)^{1/(p-1)} sech^{2/(p-1)}((p-1) sqrt(mu) x / 2)
// and the quantities that follow from it in closed form.

#include <cmath>
#include <numbers>

#include "relsol/error.hpp"

namespace relsol {

inline double soliton_amplitude(double p, double mu) {
  return std::pow(0.5 * (p + 1.0) * mu, 1.0 / (p - 1.0));
}

/// Exponential decay rate of the profile: Q(x) ~ A 2^{2/(p-1)} exp(-sqrt(mu) |x|).
inline double soliton_decay_rate(double mu) { return std::sqrt(mu); }

inline double soliton_profile(double p, double mu, double x) {
  const double a = 0.5 * (p - 1.0) * std::sqrt(mu);
  return soliton_amplitude(p, mu) * std::pow(1.0 / std::cosh(a * x), 2.0 / (p - 1.0));
}

/// Mass of the profile: A^2 * int sech^{2b}(a x) dx with b = 2/(p-1),
/// int sech^{2b}(a x) dx = sqrt(pi) Gamma(b) / (a Gamma(b + 1/2)).
inline double soliton_mass(double p, double mu) {
  if (!(mu > 0.0)) throw UsageError("soliton_mass: mu must be positive");
  const double amp = soliton_amplitude(p, mu);
  const double a = 0.5 * (p - 1.0) * std::sqrt(mu);
  const double b = 2.0 / (p - 1.0);
  return amp * amp * std::sqrt(std::numbers::pi) * std::tgamma(b) / (a * std::tgamma(b + 0.5));
}

/// Sharp Gagliardo-Nirenberg constant C_{1,p+1} expressed through the
/// multiplier and mass of the optimizer:
///   2(p+1) / ((p+3)^{(5-p)/4} (p-1)^{(p-1)/4}) * mu^{(5-p)/4} / M^{(p-1)/2}.
inline double sharp_c1(double p, double M, double mu_inf) {
  if (!(M > 0.0) || !(mu_inf > 0.0) || !(p > 1.0))
    throw UsageError("sharp_c1: p > 1, M > 0 and mu > 0 required");
  return 2.0 * (p + 1.0) /
         (std::pow(p + 3.0, 0.25 * (5.0 - p)) * std::pow(p - 1.0, 0.25 * (p - 1.0))) *
         std::pow(mu_inf, 0.25 * (5.0 - p)) / std::pow(M, 0.5 * (p - 1.0));
}

/// C_{1,p+1} from the closed-form soliton at mu = 1.
inline double closed_form_c1(double p) { return sharp_c1(p, soliton_mass(p, 1.0), 1.0); }

/// mu_inf(M) = (p+3) [ (p-1)^{(p-1)/4} C1 / (2(p+1)) ]^{4/(5-p)} M^{2(p-1)/(5-p)}.
inline double mu_inf_from_c1(double p, double M, double c1) {
  if (!(M > 0.0)) throw UsageError("mu_inf_of_mass: M must be positive");
  if (!(p > 1.0 && p < 5.0)) throw UsageError("mu_inf_of_mass: p must lie in (1, 5)");
  const double base = std::pow(p - 1.0, 0.25 * (p - 1.0)) * c1 / (2.0 * (p + 1.0));
  return (p + 3.0) * std::pow(base, 4.0 / (5.0 - p)) * std::pow(M, 2.0 * (p - 1.0) / (5.0 - p));
}

/// J_inf(M) = -(5-p)/(2(p+3)) mu_inf M.
inline double min_energy_inf(double p, double M, double mu_inf) {
  return -(5.0 - p) / (2.0 * (p + 3.0)) * mu_inf * M;
}

/// J_inf(M) = -(5-p)/2 [ (p-1)^{(p-1)/4} C1 / (2(p+1)) ]^{4/(5-p)} M^{(p+3)/(5-p)}.
inline double min_energy_inf_from_c1(double p, double M, double c1) {
  const double base = std::pow(p - 1.0, 0.25 * (p - 1.0)) * c1 / (2.0 * (p + 1.0));
  return -0.5 * (5.0 - p) * std::pow(base, 4.0 / (5.0 - p)) * std::pow(M, (p + 3.0) / (5.0 - p));
}

/// ||Q'||^2 = [ (p-1) C1 / (2(p+1)) ]^{4/(5-p)} M^{(p+3)/(5-p)}.
inline double soliton_kinetic_from_c1(double p, double M, double c1) {
  return std::pow((p - 1.0) * c1 / (2.0 * (p + 1.0)), 4.0 / (5.0 - p)) *
         std::pow(M, (p + 3.0) / (5.0 - p));
}

}  // namespace relsol
