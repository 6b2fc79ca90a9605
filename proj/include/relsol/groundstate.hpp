#pragma once

// Ground states of  H_c Q - Q^p = -mu Q  at prescribed mass, the closed-form
// non-relativistic soliton, Pohozaev-type residuals, the c-scaling map and
// the non-relativistic limit study.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "relsol/alignment.hpp"
#include "relsol/constants.hpp"
#include "relsol/error.hpp"
#include "relsol/functionals.hpp"
#include "relsol/grid.hpp"
#include "relsol/petviashvili.hpp"
#include "relsol/soliton.hpp"
#include "relsol/spectral.hpp"

namespace relsol {

enum class SolveMethod { Petviashvili, GradientFlow, ClosedFormInf };

inline const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::Petviashvili: return "petviashvili";
    case SolveMethod::GradientFlow: return "gradient_flow";
    case SolveMethod::ClosedFormInf: return "closed_form_inf";
  }
  return "unknown";
}

struct SolveLog {
  int outer_iterations = 0;
  int inner_iterations = 0;        ///< summed over all inner solves
  int final_inner_iterations = 0;  ///< inner solve at the returned mu
  std::vector<double> mu_trace;
  std::vector<double> mass_trace;
  std::vector<double> energy_trace;
  std::vector<double> kinetic_trace;  ///< ||sqrt(H_c) u_n||
  std::vector<double> residual_trace;
};

struct GroundState {
  Field Q;
  double mu = 0.0;
  ModelParams params;
  double el_residual = 0.0;
  double pohozaev_residual = 0.0;
  SolveMethod method = SolveMethod::ClosedFormInf;
  bool admissible = false;
  SolveLog log;
};

struct SolveOptions {
  double tol_residual = 1e-10;
  int max_outer = 60;
  int max_inner = 20000;
  std::optional<double> gamma;  ///< Petviashvili exponent, default p/(p-1)
  std::optional<Field> init;    ///< default: closed-form soliton at mu_inf(M)
  std::optional<std::pair<double, double>> mu_bracket;
  double inner_tol = 1e-13;  ///< relative Petviashvili step
  double mass_tol = 1e-13;   ///< relative mass mismatch
  double tau0 = 0.0;         ///< gradient-flow initial step, 0 picks 10/mu_inf

  void validate(double p) const {
    if (!(tol_residual > 0.0) || !(inner_tol > 0.0) || !(mass_tol > 0.0))
      throw UsageError("solver tolerances must be positive");
    if (max_outer < 1 || max_inner < 1) throw UsageError("iteration limits must be positive");
    const double g = gamma.value_or(p / (p - 1.0));
    if (!(g > 1.0 && g < p)) throw UsageError("Petviashvili gamma must lie in (1, p)");
    if (mu_bracket && !(mu_bracket->first > 0.0 && mu_bracket->second > mu_bracket->first))
      throw UsageError("mu bracket must satisfy 0 < lo < hi");
    if (tau0 < 0.0) throw UsageError("tau0 must be nonnegative");
  }
};

/// Kinetic symbol sigma_c, or xi^2 when c is infinite.
inline auto kinetic_symbol(double c) {
  return [c](double xi) { return hc_symbol(xi, c); };
}

/// ||K Q - |Q|^{p-1} Q + mu Q|| / ||Q|| with K = H_c (or -d^2 for c = inf).
inline double el_residual(const Field& Q, double mu, double p, double c) {
  Field r = apply_symbol(Q, kinetic_symbol(c));
  r -= power_nonlinearity(Q, p);
  r.axpy(mu, Q);
  return norm(r) / norm(Q);
}

/// mu from the Nehari identity: (||Q||_{p+1}^{p+1} - ||sqrt(K) Q||^2) / M.
inline double multiplier_from_quotient(const Field& Q, double p, double c) {
  const double k = std::isfinite(c) ? kinetic_c(Q, c) : kinetic_inf(Q);
  return (potential_norm(Q, p) - k) / mass(Q);
}

/// mu_inf(M) through C_{1,p+1}.
inline double mu_inf_of_mass(double p, double M, const Constants& consts) {
  return mu_inf_from_c1(p, M, consts.c1);
}

inline double mu_inf_of_mass(double p, double M) { return mu_inf_from_c1(p, M, closed_form_c1(p)); }

/// Power-of-two domain length holding 64 decay lengths of Q_inf, N = n points.
inline Grid default_grid(double p, double M, std::size_t n = 4096) {
  const double mu = mu_inf_of_mass(p, M);
  const double raw = 64.0 / std::sqrt(mu);
  return Grid(std::exp2(std::ceil(std::log2(raw))), n);
}

/// Non-relativistic Pohozaev identities: relative errors of
/// ||Q'||^2 = (p-1)/(p+3) mu M and ||Q||_{p+1}^{p+1} = 2(p+1)/(p+3) mu M.
inline double pohozaev_inf_residual(const Field& Q, double mu, double p) {
  const double m = mass(Q);
  const double k_ref = (p - 1.0) / (p + 3.0) * mu * m;
  const double p_ref = 2.0 * (p + 1.0) / (p + 3.0) * mu * m;
  return std::max(std::abs(kinetic_inf(Q) - k_ref) / k_ref, std::abs(potential_norm(Q, p) - p_ref) / p_ref);
}

inline GroundState soliton_inf(double p, double mu, const Grid& grid, double decay_tol = 1e-13) {
  if (!(mu > 0.0)) throw UsageError("soliton_inf: mu must be positive");
  Field Q = Field::sample(grid, [=](double x) { return soliton_profile(p, mu, x); });
  const double edge = soliton_profile(p, mu, -0.5 * grid.length());
  const double peak = soliton_amplitude(p, mu);
  if (edge > decay_tol * peak)
    throw GridError("grid too short for the soliton: boundary/peak = " + std::to_string(edge / peak) +
                    " exceeds " + std::to_string(decay_tol));
  GroundState gs{std::move(Q), mu, ModelParams{p, kInfinity, 0.0}, 0.0, 0.0, SolveMethod::ClosedFormInf, true, {}};
  gs.params.M = mass(gs.Q);
  gs.el_residual = el_residual(gs.Q, mu, p, kInfinity);
  gs.pohozaev_residual = pohozaev_inf_residual(gs.Q, mu, p);
  return gs;
}

/// Terms of the relativistic Pohozaev-type identities at finite c.
///   identity       : 1/2 K - (p-1)/(2(p+1)) P + 1/4 int sigma/sqrt(1/4 + xi^2/c^2) |Q^|^2 = 0
///   nehari         : K + mu M - P = 0
///   multiplier form: -1/2 K - mu M / 2 + P/(p+1) + c^2/2 int xi^2 |Q^|^2 / sqrt(c^2 xi^2 + c^4/4) = 0
/// Integrals use the discrete Plancherel weight h/N.
struct PohozaevTerms {
  double kinetic = 0.0;
  double potential = 0.0;
  double mass = 0.0;
  double composite = 0.0;  ///< 1/4 int sigma/sqrt(1/4 + xi^2/c^2) |Q^|^2
  double dilation = 0.0;   ///< c^2/2 int xi^2 |Q^|^2 / S
  double identity = 0.0, nehari = 0.0, multiplier_form = 0.0;
  double identity_residual = 0.0, nehari_residual = 0.0, multiplier_form_residual = 0.0;
};

inline PohozaevTerms pohozaev_terms(const Field& Q, double mu, double p, double c) {
  if (!std::isfinite(c)) throw UsageError("relativistic Pohozaev identity requires finite c");
  PohozaevTerms t;
  t.kinetic = kinetic_c(Q, c);
  t.potential = potential_norm(Q, p);
  t.mass = mass(Q);
  const double c2 = c * c;
  t.composite = 0.25 * weighted_norm_sq(Q, [=](double xi) {
                  const double s = std::sqrt(c2 * xi * xi + 0.25 * c2 * c2);
                  return hc_symbol(xi, c) * c2 / s;
                });
  t.dilation = 0.5 * c2 * weighted_norm_sq(Q, [=](double xi) {
                 return xi * xi / std::sqrt(c2 * xi * xi + 0.25 * c2 * c2);
               });
  const double a = 0.5 * t.kinetic, b = (p - 1.0) / (2.0 * (p + 1.0)) * t.potential;
  t.identity = a - b + t.composite;
  t.identity_residual = std::abs(t.identity) / std::max({a, b, t.composite});
  t.nehari = t.kinetic + mu * t.mass - t.potential;
  t.nehari_residual = std::abs(t.nehari) / std::max({t.kinetic, mu * t.mass, t.potential});
  const double q = t.potential / (p + 1.0);
  t.multiplier_form = -a - 0.5 * mu * t.mass + q + t.dilation;
  t.multiplier_form_residual = std::abs(t.multiplier_form) / std::max({a, 0.5 * mu * t.mass, q, t.dilation});
  return t;
}

inline double pohozaev_relativistic_residual(const GroundState& gs) {
  return pohozaev_terms(gs.Q, gs.mu, gs.params.p, gs.params.c).identity_residual;
}

/// Lower end of the ground-state energy chain for p > 3:
///   (p-3)/(2(p-1)) ||sqrt(H_c) Q||^2 - c^2 M / (2(p-1)).
inline double ground_state_energy_floor(double kinetic, double M, double p, double c) {
  return (p - 3.0) / (2.0 * (p - 1.0)) * kinetic - c * c * M / (2.0 * (p - 1.0));
}

namespace detail {

inline bool admissible_for(const ModelParams& params, const Constants* consts) {
  if (!consts) return false;
  return thresholds(params, *consts).existence_admissible;
}

inline Field initial_guess(const ModelParams& params, const Grid& grid, const SolveOptions& opts) {
  if (opts.init) {
    opts.init->require_same_grid(Field(grid));
    return *opts.init;
  }
  return soliton_inf(params.p, mu_inf_of_mass(params.p, params.M), grid).Q;
}

inline void finish(GroundState& gs) {
  gs.el_residual = el_residual(gs.Q, gs.mu, gs.params.p, gs.params.c);
  gs.pohozaev_residual = gs.params.relativistic() ? pohozaev_relativistic_residual(gs)
                                                  : pohozaev_inf_residual(gs.Q, gs.mu, gs.params.p);
}

}  // namespace detail

/// Petviashvili at fixed mu inside a secant search on log mu for mass(Q_mu) = M.
inline GroundState solve_petviashvili(const ModelParams& params, const Grid& grid, const SolveOptions& opts = {},
                                      const Constants* consts = nullptr) {
  params.validate();
  opts.validate(params.p);
  const double p = params.p, c = params.c, M = params.M;
  const double gamma = opts.gamma.value_or(p / (p - 1.0));
  const auto sym = kinetic_symbol(c);

  SolveLog log;
  struct Sample {
    double x;  // log mu
    double f;  // log(mass / M)
    Field u;
  };
  std::vector<Sample> samples;

  auto run = [&](double x, Field init, double tol) -> Sample {
    auto res = petviashvili_fixed_mu(std::move(init), sym, std::exp(x), p, gamma, tol, opts.max_inner);
    log.inner_iterations += res.iterations;
    log.final_inner_iterations = res.iterations;
    ++log.outer_iterations;
    const double m = mass(res.u);
    log.mu_trace.push_back(std::exp(x));
    log.mass_trace.push_back(m);
    return {x, std::log(m / M), std::move(res.u)};
  };
  // Warm start from the nearest sample, rescaled in amplitude.
  auto warm = [&](double x) {
    const Sample* best = &samples.front();
    for (const auto& s : samples)
      if (std::abs(s.x - x) < std::abs(best->x - x)) best = &s;
    Field u = best->u;
    u *= cplx(std::exp((x - best->x) / (p - 1.0)));
    return u;
  };
  auto check_monotone = [&]() {
    std::vector<std::pair<double, double>> xf;
    for (const auto& s : samples) xf.emplace_back(s.x, s.f);
    std::sort(xf.begin(), xf.end());
    for (std::size_t i = 1; i < xf.size(); ++i)
      // Pairs closer than the inner-solve noise are not informative.
      if (xf[i].first - xf[i - 1].first > 1e-9 && !(xf[i].second > xf[i - 1].second - 1e-11))
        throw SolverError("mass is not monotone in mu across the bracket; use solve_gradient_flow instead",
                          log.mass_trace);
  };
  auto converged = [&](const Sample& s) { return std::abs(s.f) <= opts.mass_tol; };

  Field init = detail::initial_guess(params, grid, opts);
  double lo = -kInfinity, hi = kInfinity;
  double x0 = std::log(mu_inf_of_mass(p, M));
  if (opts.mu_bracket) {
    lo = std::log(opts.mu_bracket->first);
    hi = std::log(opts.mu_bracket->second);
    samples.push_back(run(lo, init, opts.inner_tol));
    samples.push_back(run(hi, warm(hi), opts.inner_tol));
    check_monotone();
    if (samples[0].f > 0.0 || samples[1].f < 0.0)
      throw SolverError("mass does not cross M inside the mu bracket", log.mass_trace);
    x0 = std::clamp(x0, lo, hi);
    samples.push_back(run(x0, warm(x0), opts.inner_tol));
  } else {
    samples.push_back(run(x0, std::move(init), opts.inner_tol));
  }

  // Non-relativistic slope d log M / d log mu = (5-p)/(2(p-1)) seeds the secant.
  const double slope0 = (5.0 - p) / (2.0 * (p - 1.0));
  const Sample* cur = &samples.back();
  double x_prev = 0.0, f_prev = 0.0;
  bool have_prev = false;
  while (!converged(*cur)) {
    if (log.outer_iterations >= opts.max_outer)
      throw SolverError("mass matching did not converge in " + std::to_string(opts.max_outer) + " outer steps",
                        log.mass_trace);
    if (cur->f < 0.0) lo = std::max(lo, cur->x);
    else hi = std::min(hi, cur->x);
    double slope = slope0;
    if (have_prev && cur->x != x_prev) slope = (cur->f - f_prev) / (cur->x - x_prev);
    if (!(slope > 0.0)) slope = slope0;
    double x = cur->x - cur->f / slope;
    if (std::isfinite(lo) && std::isfinite(hi) && !(x > lo && x < hi)) x = 0.5 * (lo + hi);
    x_prev = cur->x;
    f_prev = cur->f;
    have_prev = true;
    samples.push_back(run(x, warm(x), opts.inner_tol));
    check_monotone();
    cur = &samples.back();
  }
  GroundState gs{symmetrize(cur->u), std::exp(cur->x), params, 0.0, 0.0, SolveMethod::Petviashvili,
                 detail::admissible_for(params, consts), std::move(log)};
  detail::finish(gs);
  gs.log.residual_trace.push_back(gs.el_residual);
  gs.log.energy_trace.push_back(energy(gs.Q, params));
  if (!(gs.el_residual <= opts.tol_residual))
    throw SolverError("Petviashvili: Euler-Lagrange residual " + std::to_string(gs.el_residual) +
                          " above tolerance",
                      gs.log.residual_trace);
  return gs;
}

/// Normalized, preconditioned gradient flow on the mass sphere:
///   g   = H u - |u|^{p-1} u + mu_n u,   mu_n from the Nehari quotient
///   u*  = u - tau (I + tau (H + |mu_n|))^{-1} g,   u_{n+1} = sqrt(M) u* / ||u*||
/// Steps raising the energy by more than 1e-12 are rejected and tau halved.
inline GroundState solve_gradient_flow(const ModelParams& params, const Grid& grid, const SolveOptions& opts = {},
                                       const Constants* consts = nullptr) {
  params.validate();
  opts.validate(params.p);
  const double p = params.p, c = params.c, M = params.M;
  const auto sym = kinetic_symbol(c);
  const double radius = params.relativistic() ? kinetic_radius(p, c) : kInfinity;
  const std::size_t n = grid.size();
  std::vector<double> hsym(n);
  for (std::size_t k = 0; k < n; ++k) hsym[k] = sym(grid.frequency(k));

  auto normalize = [M](Field u) {
    u *= cplx(std::sqrt(M / mass(u)));
    return u;
  };

  SolveLog log;
  Field u = normalize(real_part(detail::initial_guess(params, grid, opts)));
  double E = energy(u, params);
  double tau = opts.tau0 > 0.0 ? opts.tau0 : 10.0 / mu_inf_of_mass(p, M);
  const double tau_max = 1e3 * tau;
  double mu = 0.0;
  int accepted = 0;

  for (int it = 0;; ++it) {
    const auto spec = spectrum(u);
    std::vector<cplx> hs(n);
    for (std::size_t k = 0; k < n; ++k) hs[k] = hsym[k] * spec[k];
    Field Hu = from_spectrum(grid, hs);
    const Field nl = power_nonlinearity(u, p);
    const double K = inner(Hu, u).real();
    mu = (inner(nl, u).real() - K) / M;
    Field g = Hu - nl;
    g.axpy(mu, u);
    const double res = norm(g) / std::sqrt(M);
    log.residual_trace.push_back(res);
    log.energy_trace.push_back(E);
    log.kinetic_trace.push_back(std::sqrt(K));
    log.mu_trace.push_back(mu);
    if (std::sqrt(K) > radius)
      throw SolverError("gradient flow left the admissible kinetic ball ||sqrt(H_c) u|| <= c^((p+3)/(2(p-1)))",
                        log.kinetic_trace);
    if (res <= 0.5 * opts.tol_residual) break;
    if (it >= opts.max_inner)
      throw SolverError("gradient flow stagnated above tolerance after " + std::to_string(it) + " steps",
                        log.residual_trace);

    const auto gspec = spectrum(g);
    for (;;) {
      std::vector<cplx> d(n);
      for (std::size_t k = 0; k < n; ++k) d[k] = gspec[k] * (tau / (1.0 + tau * (hsym[k] + std::abs(mu))));
      Field trial = real_part(u - from_spectrum(grid, d));
      trial = normalize(std::move(trial));
      const double Et = energy(trial, params);
      if (Et <= E + 1e-12) {
        u = std::move(trial);
        E = Et;
        tau = std::min(tau * 1.5, tau_max);
        break;
      }
      tau *= 0.5;
      if (tau < 1e-14)
        throw SolverError("gradient flow step size underflow (energy does not decrease)", log.energy_trace);
    }
    if (++accepted % 50 == 0) u = symmetrize(u);
  }
  log.inner_iterations = log.final_inner_iterations = static_cast<int>(log.residual_trace.size()) - 1;
  log.outer_iterations = 1;

  GroundState gs{symmetrize(u), mu, params, 0.0, 0.0, SolveMethod::GradientFlow,
                 detail::admissible_for(params, consts), std::move(log)};
  gs.mu = multiplier_from_quotient(gs.Q, p, c);
  detail::finish(gs);
  if (!(gs.el_residual <= opts.tol_residual))
    throw SolverError("gradient flow: Euler-Lagrange residual " + std::to_string(gs.el_residual) +
                          " above tolerance",
                      gs.log.residual_trace);
  return gs;
}

/// Even, positive random initial data of mass M: a sum of three sech bumps
/// with random amplitudes and widths around the soliton scale.
inline Field random_even_init(double p, double M, const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(0.2, 1.0), width(0.5, 2.0);
  const double w0 = 1.0 / std::sqrt(mu_inf_of_mass(p, M));
  double a[3], w[3];
  for (int i = 0; i < 3; ++i) {
    a[i] = amp(rng);
    w[i] = width(rng) * w0;
  }
  Field u = Field::sample(grid, [&](double x) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += a[i] / std::cosh(x / w[i]);
    return s;
  });
  u *= cplx(std::sqrt(M / mass(u)));
  return u;
}

/// H^{1/2} distance after optimal translation and phase alignment of `a` onto `b`.
inline double h_half_distance_centered(const Field& a, const Field& b) {
  return align(a, b, [](double xi) { return std::sqrt(1.0 + xi * xi); }).distance();
}

/// u(x) = c^{2/(p-1)} v(c x) on `target`, evaluating the trigonometric
/// interpolant of v at the points c x_j.
inline Field scaling_transport(const Field& v, double c_target, double p, const Grid& target) {
  if (!v.all_finite()) throw UsageError("scaling_transport: input field is not finite");
  if (!(c_target > 0.0)) throw UsageError("scaling_transport: c must be positive");
  const Grid& src = v.grid();
  if (c_target == 1.0 && target == src) return v;

  const double reach = c_target * 0.5 * target.length();
  if (reach > 0.5 * src.length() + src.spacing())
    throw GridError("scaling_transport: target points leave the source domain");

  const std::size_t ns = src.size();
  const auto vs = spectrum(v);
  const double amp = std::pow(c_target, 2.0 / (p - 1.0)) / static_cast<double>(ns);
  const double x0 = src.x(0);
  Field u(target);
  for (std::size_t j = 0; j < target.size(); ++j) {
    const double y = c_target * target.x(j) - x0;
    cplx s = vs[0];
    for (std::size_t k = 1; k < ns / 2; ++k) {
      const double th = src.frequency(k) * y;
      s += vs[k] * std::polar(1.0, th) + vs[ns - k] * std::polar(1.0, -th);
    }
    s += vs[ns / 2] * std::cos(src.frequency(ns / 2) * y);
    u[j] = amp * s;
  }

  const auto us = spectrum(u);
  const std::size_t nt = target.size();
  double tail = 0.0, total = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    const double e = std::norm(us[k]);
    total += e;
    if (std::abs(target.wavenumber(k)) > static_cast<long long>(nt / 3)) tail += e;
  }
  if (total > 0.0 && std::sqrt(tail / total) > 1e-10)
    throw GridError("scaling_transport: spectral tail " + std::to_string(std::sqrt(tail / total)) +
                    " exceeds 1e-10 (aliasing)");
  return u;
}

/// Default target: same N, length scaled by 1/c so the samples map exactly.
inline Field scaling_transport(const Field& v, double c_target, double p) {
  const Grid& g = v.grid();
  return scaling_transport(v, c_target, p, Grid(g.length() / c_target, g.size()));
}

struct LimitRow {
  double c = 0.0;
  double mu = 0.0;
  double h1_distance = 0.0;  ///< ||Q_c - Q_inf||_{H^1}
  double mu_gap = 0.0;       ///< |mu_c - mu_inf|
  double kinetic_gap = 0.0;  ///< ||Q_c'||^2 - ||sqrt(H_c) Q_c||^2
  double gap_bound = 0.0;    ///< ||Q_c||_{H^2 dot}^2 / c^2
  double h2_norm = 0.0;      ///< ||Q_c||_{H^2}
  double el_residual = 0.0;
  bool gap_bound_holds = false;
  bool admissible = false;
};

struct LimitStudy {
  double p = 0.0;
  double M = 0.0;
  double mu_inf = 0.0;
  std::vector<LimitRow> rows;
  double mu_rate_exponent = 0.0;  ///< least-squares slope of log|mu_c - mu_inf| vs log c
  double h1_rate_exponent = 0.0;
};

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("loglog_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline LimitStudy nonrel_limit_study(double p, double M, const std::vector<double>& c_list, const Grid& grid,
                                     const SolveOptions& opts = {}, const Constants* consts = nullptr) {
  LimitStudy st;
  st.p = p;
  st.M = M;
  st.mu_inf = mu_inf_of_mass(p, M);
  const Field Qinf = soliton_inf(p, st.mu_inf, grid).Q;
  std::vector<double> cs, mus, h1s;
  for (double c : c_list) {
    const ModelParams params{p, c, M};
    const GroundState gs = solve_petviashvili(params, grid, opts, consts);
    LimitRow r;
    r.c = c;
    r.mu = gs.mu;
    r.h1_distance = std::sqrt(weighted_norm_sq(gs.Q - Qinf, [](double xi) { return 1.0 + xi * xi; }));
    r.mu_gap = std::abs(gs.mu - st.mu_inf);
    r.kinetic_gap = kinetic_inf(gs.Q) - kinetic_c(gs.Q, c);
    const double h2dot = weighted_norm_sq(gs.Q, [](double xi) { return xi * xi * xi * xi; });
    r.gap_bound = h2dot / (c * c);
    r.h2_norm = std::sqrt(hs_norm_sq(gs.Q, 2.0));
    r.el_residual = gs.el_residual;
    r.gap_bound_holds = r.kinetic_gap >= 0.0 && r.kinetic_gap <= r.gap_bound * (1.0 + 1e-12);
    r.admissible = gs.admissible;
    st.rows.push_back(r);
    cs.push_back(c);
    mus.push_back(r.mu_gap);
    h1s.push_back(r.h1_distance);
  }
  if (cs.size() >= 2) {
    st.mu_rate_exponent = loglog_slope(cs, mus);
    st.h1_rate_exponent = loglog_slope(cs, h1s);
  }
  return st;
}

}  // namespace relsol
