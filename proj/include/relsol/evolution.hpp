#pragma once

// Strang split-step integration of  i u_t = H_c u - |u|^{p-1} u,
// conservation monitoring, modulation distance to the ground-state orbit,
// the perturbed-ground-state stability run and the kinetic-bound monitor.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "relsol/alignment.hpp"
#include "relsol/constants.hpp"
#include "relsol/error.hpp"
#include "relsol/functionals.hpp"
#include "relsol/groundstate.hpp"
#include "relsol/grid.hpp"
#include "relsol/spectral.hpp"

namespace relsol {

struct EvolutionState {
  double t = 0.0;
  Field u;
};

struct IntegratorConfig {
  double dt = 1e-3;
  double T = 1.0;
  int sample_stride = 100;  ///< steps between recorded samples
  int snapshot_stride = 0;  ///< samples between field snapshots, 0 = none

  void validate() const {
    if (!(dt > 0.0) || !(T > 0.0)) throw UsageError("integrator needs dt > 0 and T > 0");
    if (sample_stride < 1) throw UsageError("sample_stride must be >= 1");
    if (snapshot_stride < 0) throw UsageError("snapshot_stride must be >= 0");
  }
};

/// Precomputed half-step multiplier exp(-i dt/2 sigma_c(xi)).
class StrangStepper {
 public:
  StrangStepper(const ModelParams& params, const Grid& grid, double dt) : p_(params.p), dt_(dt), half_(grid.size()) {
    if (!params.relativistic()) throw UsageError("evolution requires finite c");
    for (std::size_t k = 0; k < grid.size(); ++k) half_[k] = std::polar(1.0, -0.5 * dt * hc_symbol(grid.frequency(k), params.c));
  }

  double dt() const noexcept { return dt_; }

  void linear_half(Field& u) const {
    auto s = spectrum(u);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] *= half_[k];
    u = from_spectrum(u.grid(), s);
  }

  void nonlinear(Field& u) const {
    for (std::size_t j = 0; j < u.size(); ++j) u[j] *= std::polar(1.0, dt_ * std::pow(std::abs(u[j]), p_ - 1.0));
  }

  void step(Field& u) const {
    linear_half(u);
    nonlinear(u);
    linear_half(u);
  }

 private:
  double p_;
  double dt_;
  std::vector<cplx> half_;
};

inline EvolutionState step_strang(const EvolutionState& s, const ModelParams& params, double dt) {
  EvolutionState out = s;
  StrangStepper(params, s.u.grid(), dt).step(out.u);
  out.t += dt;
  return out;
}

struct ModulationResult {
  double distance = 0.0;
  double x1 = 0.0;
  double theta1 = 0.0;
};

/// inf over (x1, theta1) of ||sqrt(1 + H_c)(e^{i theta1} u(. - x1) - Q)||.
/// x1, theta1 are the minimizers.
inline ModulationResult modulation_distance(const Field& u, const Field& Q, double c) {
  const Alignment al = align(u, Q, [c](double xi) { return 1.0 + hc_symbol(xi, c); });
  return {al.distance(), al.shift, al.phase};
}

inline ModulationResult modulation_distance(const Field& u, const GroundState& gs) {
  return modulation_distance(u, gs.Q, gs.params.c);
}

struct EvolutionSample {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double kinetic_norm = 0.0;  ///< ||sqrt(H_c) u||
  std::optional<ModulationResult> modulation;
};

struct Trajectory {
  std::vector<EvolutionSample> samples;
  std::vector<EvolutionState> snapshots;
  EvolutionState final_state;
  bool blow_up = false;
  std::string blow_up_reason;
  long steps = 0;
};

using SampleObserver = std::function<void(const EvolutionSample&, const EvolutionState&)>;

/// Evolves u0 to time T in steps of dt (one shorter final step if needed).
/// Samples every `sample_stride` steps and at T. Stops and flags blow-up on
/// non-finite values or amplitude above 1e6 times the initial maximum,
/// keeping the last finite state.
inline Trajectory evolve(const Field& u0, const ModelParams& params, const IntegratorConfig& cfg,
                         const GroundState* reference = nullptr, const SampleObserver& observer = {}) {
  cfg.validate();
  params.validate();
  const Grid& g = u0.grid();
  const long full = static_cast<long>(std::floor(cfg.T / cfg.dt * (1.0 + 1e-14)));
  const double rest = cfg.T - static_cast<double>(full) * cfg.dt;
  const bool tail = rest > 1e-12 * cfg.T;
  const StrangStepper stepper(params, g, cfg.dt);
  const double amp0 = std::max(u0.max_abs(), 1e-300);

  Trajectory tr;
  EvolutionState st{0.0, u0};
  int sample_count = 0;
  auto record = [&]() {
    EvolutionSample s;
    s.t = st.t;
    s.mass = mass(st.u);
    s.energy = energy_c(st.u, params);
    s.kinetic_norm = std::sqrt(kinetic_c(st.u, params.c));
    if (reference) s.modulation = modulation_distance(st.u, *reference);
    tr.samples.push_back(s);
    if (cfg.snapshot_stride > 0 && sample_count % cfg.snapshot_stride == 0) tr.snapshots.push_back(st);
    ++sample_count;
    if (observer) observer(s, st);
  };
  record();

  const long total = full + (tail ? 1 : 0);
  for (long n = 1; n <= total; ++n) {
    EvolutionState next = st;
    if (n <= full) {
      stepper.step(next.u);
      next.t = static_cast<double>(n) * cfg.dt;
    } else {
      StrangStepper(params, g, rest).step(next.u);
      next.t = cfg.T;
    }
    if (!next.u.all_finite() || next.u.max_abs() > 1e6 * amp0) {
      tr.blow_up = true;
      tr.blow_up_reason = next.u.all_finite() ? "amplitude exceeded 1e6 x initial maximum" : "non-finite samples";
      break;
    }
    st = std::move(next);
    tr.steps = n;
    if (n % cfg.sample_stride == 0 || n == total) record();
  }
  tr.final_state = st;
  return tr;
}

struct ConservationReport {
  double mass_drift = 0.0;    ///< max |M(t) - M(0)| / M(0)
  double energy_drift = 0.0;  ///< max |E(t) - E(0)| / |E(0)|
};

inline ConservationReport conserved_report(const Trajectory& tr) {
  if (tr.samples.empty()) throw UsageError("conserved_report: empty trajectory");
  const auto& s0 = tr.samples.front();
  ConservationReport r;
  for (const auto& s : tr.samples) {
    r.mass_drift = std::max(r.mass_drift, std::abs(s.mass - s0.mass) / s0.mass);
    r.energy_drift = std::max(r.energy_drift, std::abs(s.energy - s0.energy) / std::abs(s0.energy));
  }
  return r;
}

struct GwpReport {
  bool hypotheses_met = false;
  std::string status;       ///< "ok", "violated" or "hypotheses unmet: ..."
  double bound = 0.0;       ///< alpha^{2/(5-p)} M^{(p+3)/(2(5-p))}
  double worst_margin = 0.0;  ///< min over samples of bound - ||sqrt(H_c) u(t)||
  double sup_kinetic = 0.0;
  bool holds = false;
};

/// Kinetic bound along a trajectory, under the negative-energy hypotheses.
inline GwpReport gwp_monitor(const Trajectory& tr, const ModelParams& params, const Constants& consts) {
  GwpReport r;
  r.bound = refined_radius(params.p, params.M, consts.alpha);
  if (tr.samples.empty()) {
    r.status = "hypotheses unmet: empty trajectory";
    return r;
  }
  const auto& s0 = tr.samples.front();
  std::string why;
  if (!(s0.energy < 0.0)) why += "initial energy is not negative; ";
  if (std::abs(s0.mass - params.M) > 1e-10 * params.M) why += "initial mass differs from M; ";
  if (s0.kinetic_norm > kinetic_radius(params.p, params.c)) why += "initial kinetic norm exceeds c^((p+3)/(2(p-1))); ";
  if (!why.empty()) {
    r.status = "hypotheses unmet: " + why;
    return r;
  }
  r.hypotheses_met = true;
  r.worst_margin = kInfinity;
  for (const auto& s : tr.samples) {
    r.sup_kinetic = std::max(r.sup_kinetic, s.kinetic_norm);
    r.worst_margin = std::min(r.worst_margin, r.bound - s.kinetic_norm);
  }
  r.holds = r.worst_margin >= 0.0;
  r.status = r.holds ? "ok" : "violated";
  return r;
}

/// Smooth even perturbation: random normal coefficients on cos(xi_k x),
/// k = 0..modes-1, normalized to ||sqrt(1 + H_c) w|| = 1.
inline Field even_perturbation(const Grid& g, double c, std::uint64_t seed, int modes = 32) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(modes));
  for (auto& v : a) v = nd(rng);
  Field w = Field::sample(g, [&](double x) {
    double s = 0.0;
    for (int k = 0; k < modes; ++k) s += a[static_cast<std::size_t>(k)] * std::cos(2.0 * std::numbers::pi * k * x / g.length());
    return s;
  });
  const double nw = std::sqrt(weighted_norm_sq(w, [c](double xi) { return 1.0 + hc_symbol(xi, c); }));
  w *= 1.0 / nw;
  return w;
}

inline constexpr std::uint64_t kDefaultPerturbationSeed = 0x5EED;

struct StabilityReport {
  double delta = 0.0;
  std::uint64_t seed = kDefaultPerturbationSeed;
  double initial_distance = 0.0;
  double sup_distance = 0.0;
  std::vector<double> times;
  std::vector<double> distances;
  ConservationReport conservation;
  GwpReport gwp;
  bool blow_up = false;
  Trajectory trajectory;
};

/// u0 = (Q + delta w) sqrt(M / mass(Q + delta w)), evolved to cfg.T.
inline StabilityReport stability_experiment(const GroundState& gs, double delta, const IntegratorConfig& cfg,
                                            const Constants& consts,
                                            std::uint64_t seed = kDefaultPerturbationSeed,
                                            const SampleObserver& observer = {}) {
  if (!(delta >= 0.0)) throw UsageError("perturbation scale must be nonnegative");
  const double M = gs.params.M;
  Field u0 = gs.Q;
  if (delta > 0.0) u0.axpy(delta, even_perturbation(gs.Q.grid(), gs.params.c, seed));
  u0 *= std::sqrt(M / mass(u0));

  StabilityReport rep;
  rep.delta = delta;
  rep.seed = seed;
  rep.trajectory = evolve(u0, gs.params, cfg, &gs, observer);
  for (const auto& s : rep.trajectory.samples) {
    rep.times.push_back(s.t);
    rep.distances.push_back(s.modulation->distance);
    rep.sup_distance = std::max(rep.sup_distance, s.modulation->distance);
  }
  rep.initial_distance = rep.distances.front();
  rep.conservation = conserved_report(rep.trajectory);
  rep.gwp = gwp_monitor(rep.trajectory, gs.params, consts);
  rep.blow_up = rep.trajectory.blow_up;
  return rep;
}

}  // namespace relsol
