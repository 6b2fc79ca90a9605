#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "relsol/constants.hpp"
#include "relsol/error.hpp"
#include "relsol/grid.hpp"
#include "relsol/spectral.hpp"

namespace relsol {

/// Nonlinearity power p, speed of light c (may be +infinity) and mass M.
struct ModelParams {
  double p = 3.0;
  double c = 8.0;
  double M = 1.0;

  bool relativistic() const noexcept { return std::isfinite(c); }

  void validate() const {
    if (!(p >= 3.0 && p < 5.0)) throw UsageError("p must lie in [3, 5), got " + std::to_string(p));
    if (!(M > 0.0) || !std::isfinite(M)) throw UsageError("M must be positive, got " + std::to_string(M));
    if (!(c > 0.0)) throw UsageError("c must be positive, got " + std::to_string(c));
  }
};

inline double mass(const Field& u) { return norm_sq(u); }

/// ||u||_{p+1}^{p+1} = h sum |u_j|^{p+1}.
inline double potential_norm(const Field& u, double p) {
  double s = 0.0;
  for (const auto& z : u.values()) s += std::pow(std::abs(z), p + 1.0);
  return s * u.grid().spacing();
}

/// E_c(u) = 1/2 ||sqrt(H_c) u||^2 - 1/(p+1) ||u||_{p+1}^{p+1}.
inline double energy_c(const Field& u, const ModelParams& params) {
  if (!params.relativistic()) throw UsageError("energy_c requires finite c");
  return 0.5 * kinetic_c(u, params.c) - potential_norm(u, params.p) / (params.p + 1.0);
}

/// E_inf(u) = 1/2 ||u'||^2 - 1/(p+1) ||u||_{p+1}^{p+1}.
inline double energy_inf(const Field& u, double p) {
  return 0.5 * kinetic_inf(u) - potential_norm(u, p) / (p + 1.0);
}

/// Energy for finite c, or the non-relativistic energy when c = infinity.
inline double energy(const Field& u, const ModelParams& params) {
  return params.relativistic() ? energy_c(u, params) : energy_inf(u, params.p);
}

/// I_c(u) = E_c(u) + (mu/2) M(u).
inline double functional_I(const Field& u, double mu, const ModelParams& params) {
  return energy(u, params) + 0.5 * mu * mass(u);
}

/// Right-hand side of the modified Gagliardo-Nirenberg inequality
///   C_GN { ||u||^{(p+3)/2} ||sqrt(H_c) P_{<=c delta} u||^{(p-1)/2}
///          + (c delta)^{-(p-1)/2} ||u||^2 ||sqrt(H_c) P_{>c delta} u||^{p-1} }.
struct GnModifiedTerms {
  double low = 0.0;
  double high = 0.0;
  double total() const noexcept { return low + high; }
};

inline GnModifiedTerms gn_modified_terms(const Field& u, double delta, const ModelParams& params,
                                         const Constants& consts) {
  if (!(delta > 0.0 && delta <= 1.0)) throw UsageError("gn_modified_rhs: delta must lie in (0, 1]");
  if (!params.relativistic()) throw UsageError("gn_modified_rhs requires finite c");
  const double c = params.c;
  const double p = params.p;
  const double cut = c * delta;
  const double m = norm_sq(u);
  const double k_low = weighted_norm_sq(u, [=](double xi) { return std::abs(xi) <= cut ? hc_symbol(xi, c) : 0.0; });
  const double k_high = weighted_norm_sq(u, [=](double xi) { return std::abs(xi) > cut ? hc_symbol(xi, c) : 0.0; });
  GnModifiedTerms t;
  t.low = consts.c_gn * std::pow(m, 0.25 * (p + 3.0)) * std::pow(k_low, 0.25 * (p - 1.0));
  t.high = consts.c_gn * std::pow(cut, -0.5 * (p - 1.0)) * m * std::pow(k_high, 0.5 * (p - 1.0));
  return t;
}

inline double gn_modified_rhs(const Field& u, double delta, const ModelParams& params, const Constants& consts) {
  return gn_modified_terms(u, delta, params, consts).total();
}

/// Constraint radii and the c thresholds under which the existence, ground
/// state and separation statements apply.
struct Thresholds {
  double c_alpha = 0.0;          ///< (alpha M)^{(p-1)/(5-p)}
  double c_kinetic = 0.0;        ///< (alpha^{4/(p+3)} M)^{(p-1)/(5-p)}
  double c_min_existence = 0.0;  ///< max of the two above
  std::optional<double> c_min_ground_state;  ///< adds (M/(p-3))^{(p-1)/(5-p)}, p > 3 only
  double kinetic_radius = 0.0;   ///< c^{(p+3)/(2(p-1))}
  double refined_radius = 0.0;   ///< alpha^{2/(5-p)} M^{(p+3)/(2(5-p))}
  bool existence_admissible = false;
  bool ground_state_admissible = false;
  bool refined_within_kinetic = false;

  /// Names the violated existence thresholds, empty when admissible.
  std::string violation_message(double c) const {
    std::ostringstream os;
    os.precision(6);
    if (c < c_alpha) os << "c >= (alpha M)^((p-1)/(5-p)) = " << c_alpha << " violated";
    if (c < c_alpha && c < c_kinetic) os << "; ";
    if (c < c_kinetic) os << "c >= (alpha^(4/(p+3)) M)^((p-1)/(5-p)) = " << c_kinetic << " violated";
    return os.str();
  }
};

inline double kinetic_radius(double p, double c) { return std::pow(c, (p + 3.0) / (2.0 * (p - 1.0))); }

inline double refined_radius(double p, double M, double alpha) {
  return std::pow(alpha, 2.0 / (5.0 - p)) * std::pow(M, (p + 3.0) / (2.0 * (5.0 - p)));
}

inline Thresholds thresholds(const ModelParams& params, const Constants& consts) {
  params.validate();
  const double p = params.p, M = params.M, a = consts.alpha;
  const double e = (p - 1.0) / (5.0 - p);
  Thresholds t;
  t.c_alpha = std::pow(a * M, e);
  t.c_kinetic = std::pow(std::pow(a, 4.0 / (p + 3.0)) * M, e);
  t.c_min_existence = std::max(t.c_alpha, t.c_kinetic);
  if (p > 3.0) t.c_min_ground_state = std::max(t.c_min_existence, std::pow(M / (p - 3.0), e));
  t.refined_radius = refined_radius(p, M, a);
  if (params.relativistic()) {
    const double c = params.c;
    t.kinetic_radius = kinetic_radius(p, c);
    t.existence_admissible = c >= t.c_min_existence;
    t.ground_state_admissible = t.c_min_ground_state && c >= *t.c_min_ground_state;
    t.refined_within_kinetic = t.refined_radius <= t.kinetic_radius * (1.0 + 1e-12);
    if (c >= t.c_kinetic && !t.refined_within_kinetic)
      throw Error("refined radius exceeds the kinetic radius although c is above the kinetic threshold");
  } else {
    t.kinetic_radius = kInfinity;
    t.existence_admissible = true;
    t.ground_state_admissible = p > 3.0;
    t.refined_within_kinetic = true;
  }
  return t;
}

/// Lower-bound chain for E_c on the negative-energy branch (mass M, kinetic
/// norm K <= c^{(p+3)/(2(p-1))}, c >= (alpha M)^{(p-1)/(5-p)}):
///   E >= 1/2 K^2 - alpha/4 { M^{(p+3)/4} K^{(p-1)/2} + c^{-(p-1)/2} M K^{p-1} }      (b0)
///     >= 1/2 K^2 - alpha/4 { M^{(p+3)/4} K^{(p-1)/2} + M c^{-(5-p)/(p-1)} K^2 }        (b1)
///     >= 1/4 K^{(p-1)/2} { K^{(5-p)/2} - alpha M^{(p+3)/4} }                            (b2)
struct EnergyLowerBounds {
  double energy = 0.0;
  double kinetic_norm = 0.0;
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;

  bool chain_holds(double rel_tol = 1e-12) const {
    const double tol = rel_tol * std::max({std::abs(energy), std::abs(b0), std::abs(b1), 1e-300});
    return energy >= b0 - tol && b0 >= b1 - tol && b1 >= b2 - tol;
  }
};

inline EnergyLowerBounds energy_lower_bounds(const Field& u, const ModelParams& params, const Constants& consts) {
  const double p = params.p, c = params.c, a = consts.alpha;
  const double M = mass(u);
  EnergyLowerBounds r;
  r.energy = energy_c(u, params);
  const double K = std::sqrt(kinetic_c(u, c));
  r.kinetic_norm = K;
  const double mp = std::pow(M, 0.25 * (p + 3.0));
  r.b0 = 0.5 * K * K - 0.25 * a * (mp * std::pow(K, 0.5 * (p - 1.0)) + std::pow(c, -0.5 * (p - 1.0)) * M * std::pow(K, p - 1.0));
  r.b1 = 0.5 * K * K - 0.25 * a * (mp * std::pow(K, 0.5 * (p - 1.0)) + M * std::pow(c, -(5.0 - p) / (p - 1.0)) * K * K);
  r.b2 = 0.25 * std::pow(K, 0.5 * (p - 1.0)) * (std::pow(K, 0.5 * (5.0 - p)) - a * mp);
  return r;
}

}  // namespace relsol
