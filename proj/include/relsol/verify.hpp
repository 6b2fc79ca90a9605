#pragma once

// Named invariant checks at one (p, M, c) and the report that collects them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "relsol/constants.hpp"
#include "relsol/evolution.hpp"
#include "relsol/functionals.hpp"
#include "relsol/groundstate.hpp"
#include "relsol/io.hpp"
#include "relsol/linops.hpp"
#include "relsol/random_fields.hpp"
#include "relsol/spectral.hpp"

namespace relsol {

inline std::string fmt_g(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct CheckResult {
  std::string name;
  std::string anchor;  ///< the statement being checked
  double measured = std::nan("");
  double target = std::nan("");
  double margin = std::nan("");  ///< positive when passing
  bool applicable = true;        ///< false when the hypotheses on c are unmet; measured anyway
  bool pass = false;
  bool errored = false;
  std::string message;
};

inline CheckResult upper_check(double measured, double bound, std::string message = {}) {
  CheckResult r;
  r.measured = measured;
  r.target = bound;
  r.margin = bound - measured;
  r.pass = measured <= bound;
  r.message = std::move(message);
  return r;
}

inline CheckResult lower_check(double measured, double bound, std::string message = {}) {
  CheckResult r = upper_check(-measured, -bound, std::move(message));
  r.measured = measured;
  r.target = bound;
  return r;
}

struct VerifyReport {
  ModelParams params;
  std::vector<CheckResult> checks;
  std::string timestamp;  ///< excluded from the deterministic payload

  bool no_checks_run() const noexcept { return checks.empty(); }

  bool aggregate_pass() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass && !c.errored; });
  }

  std::vector<std::string> failed_names() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.pass || c.errored) out.push_back(c.name);
    return out;
  }

  /// Deterministic payload (no timestamp).
  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
      arr.push_back({{"name", c.name},
                     {"anchor", c.anchor},
                     {"measured", number_or_inf(c.measured)},
                     {"target", number_or_inf(c.target)},
                     {"margin", number_or_inf(c.margin)},
                     {"applicable", c.applicable},
                     {"pass", c.pass},
                     {"errored", c.errored},
                     {"message", c.message}});
    }
    nlohmann::json j = {{"schema_version", 1},
                        {"params", {{"p", params.p}, {"c", number_or_inf(params.c)}, {"M", params.M}}},
                        {"checks", arr},
                        {"aggregate_pass", aggregate_pass()}};
    if (no_checks_run()) j["note"] = "no checks run";
    return j;
  }
};

/// Shared, read-only inputs of the checks.
struct VerifyContext {
  ModelParams params;
  Grid grid;
  Constants consts;
  std::uint64_t seed = 0x5EED;
  std::shared_ptr<const GroundState> ground_state;  ///< null when the solve failed
  std::string solve_error;

  const GroundState& gs() const {
    if (!ground_state) throw SolverError("ground state unavailable: " + solve_error, {});
    return *ground_state;
  }
};

struct CheckSpec {
  std::string name;
  std::string anchor;
  std::function<CheckResult(const VerifyContext&)> run;
};

namespace verify_detail {

/// Mass-M fields near the soliton: dilations and amplitude distortions of Q_inf.
inline std::vector<Field> perturbed_solitons(const VerifyContext& ctx, int count) {
  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> dil(0.6, 1.6), bump(-0.3, 0.3);
  const double mu = mu_inf_of_mass(ctx.params.p, ctx.params.M);
  std::vector<Field> out;
  for (int i = 0; i < count; ++i) {
    const double s = dil(rng), b = bump(rng);
    const double w = 1.0 / std::sqrt(mu);
    Field u = Field::sample(ctx.grid, [&](double x) {
      return soliton_profile(ctx.params.p, mu, s * x) * (1.0 + b * std::exp(-x * x / (w * w)));
    });
    u *= std::sqrt(ctx.params.M / mass(u));
    out.push_back(std::move(u));
  }
  return out;
}

inline bool negative_branch(const Field& u, const ModelParams& params) {
  return energy_c(u, params) < 0.0 && std::sqrt(kinetic_c(u, params.c)) <= kinetic_radius(params.p, params.c);
}

}  // namespace verify_detail

inline std::vector<CheckSpec> default_checks() {
  std::vector<CheckSpec> v;

  v.push_back({"symbol_bounds", "symbol bounds for the pseudo-relativistic operator", [](const VerifyContext& ctx) {
                 const double c = ctx.params.c;
                 std::vector<double> xi;
                 for (int i = -20000; i <= 20000; ++i) xi.push_back(10.0 * c * i / 20000.0);
                 std::size_t violations = 0;
                 double worst = kInfinity;
                 for (double d : {0.25, 0.5, 1.0}) {
                   const auto rep = symbol_bounds_check(c, d, xi);
                   violations += rep.violations.size();
                   worst = std::min({worst, rep.worst_low_margin, rep.worst_high_margin, rep.worst_upper_margin,
                                     rep.worst_gap_margin});
                 }
                 CheckResult r = upper_check(static_cast<double>(violations), 0.0,
                                             "violations over delta in {1/4, 1/2, 1}; worst margin " + fmt_g(worst));
                 return r;
               }});

  v.push_back({"modified_gn", "modified Gagliardo-Nirenberg inequality", [](const VerifyContext& ctx) {
                 const Constants& k = ctx.consts;
                 // The inequality is evaluated with the C_GN implied by alpha, so a
                 // corrupted alpha propagates; the constants must also be coherent.
                 Constants eff = k;
                 eff.c_gn = k.alpha * (k.p + 1.0) / 4.0;
                 const Grid g(64.0, 1024);
                 std::mt19937_64 rng(ctx.seed);
                 double worst = 0.0;
                 for (int i = 0; i < 200; ++i) {
                   const Field u = random_band_limited(g, rng);
                   const double lhs = potential_norm(u, ctx.params.p);
                   for (double d : {0.25, 0.5, 1.0}) {
                     const double rhs = gn_modified_rhs(u, d, ctx.params, eff);
                     worst = std::max(worst, lhs / rhs);
                   }
                 }
                 CheckResult r = upper_check(worst, 1.0, "max ||u||_{p+1}^{p+1} / rhs over 200 random fields");
                 const Constants fresh = Constants::assemble(k.p, k.c1, k.c_half);
                 const double rel = std::abs(k.alpha - fresh.alpha) / fresh.alpha;
                 if (!k.consistent() || rel > 1e-14) {
                   r.pass = false;
                   r.message = "alpha = " + fmt_g(k.alpha) + " disagrees with 4 C_GN/(p+1) = " +
                               fmt_g(fresh.alpha) + " from C_1, C_half";
                 }
                 return r;
               }});

  v.push_back({"negative_energy_separation", "separation of the negative energy function space",
               [](const VerifyContext& ctx) {
                 const double bound = refined_radius(ctx.params.p, ctx.params.M, ctx.consts.alpha);
                 auto fields = verify_detail::perturbed_solitons(ctx, 24);
                 fields.push_back(ctx.gs().Q);
                 double worst = 0.0;
                 int used = 0;
                 for (const auto& u : fields) {
                   if (!verify_detail::negative_branch(u, ctx.params)) continue;
                   ++used;
                   worst = std::max(worst, std::sqrt(kinetic_c(u, ctx.params.c)));
                 }
                 CheckResult r = upper_check(worst, bound, std::to_string(used) + " negative-energy fields in the kinetic ball");
                 r.applicable = ctx.params.c >= thresholds(ctx.params, ctx.consts).c_min_existence;
                 if (!r.applicable) r.message += "; c below the existence threshold, bound measured only";
                 return r;
               }});

  v.push_back({"energy_lower_bound_chain", "energy lower-bound chain of the separation argument",
               [](const VerifyContext& ctx) {
                 const auto th = thresholds(ctx.params, ctx.consts);
                 const bool chain = ctx.params.c >= th.c_alpha;
                 auto fields = verify_detail::perturbed_solitons(ctx, 24);
                 fields.push_back(ctx.gs().Q);
                 double worst = kInfinity;
                 for (const auto& u : fields) {
                   if (!verify_detail::negative_branch(u, ctx.params)) continue;
                   const auto b = energy_lower_bounds(u, ctx.params, ctx.consts);
                   const double scale = std::max(std::abs(b.energy), 1e-300);
                   worst = std::min(worst, (b.energy - b.b0) / scale);
                   if (chain) worst = std::min({worst, (b.b0 - b.b1) / scale, (b.b1 - b.b2) / scale});
                 }
                 CheckResult r = lower_check(worst, -1e-12,
                                             chain ? "E >= b0 >= b1 >= b2 (relative slack)"
                                                   : "E >= b0 only; c below (alpha M)^((p-1)/(5-p)) so later steps do not apply");
                 r.applicable = chain;
                 return r;
               }});

  v.push_back({"nonrel_pohozaev", "non-relativistic Pohozaev identities", [](const VerifyContext& ctx) {
                 const double mu = mu_inf_of_mass(ctx.params.p, ctx.params.M, ctx.consts);
                 const auto s = soliton_inf(ctx.params.p, mu, ctx.grid);
                 return upper_check(s.pohozaev_residual, 1e-9);
               }});

  v.push_back({"nonrel_min_energy", "non-relativistic minimum energy", [](const VerifyContext& ctx) {
                 const double p = ctx.params.p, M = ctx.params.M;
                 const double mu = mu_inf_of_mass(p, M, ctx.consts);
                 const auto s = soliton_inf(p, mu, ctx.grid);
                 const double J = min_energy_inf_from_c1(p, M, ctx.consts.c1);
                 return upper_check(std::abs(energy_inf(s.Q, p) - J) / std::abs(J), 1e-9);
               }});

  v.push_back({"energy_comparison", "comparison between the relativistic and non-relativistic minimum energies",
               [](const VerifyContext& ctx) {
                 const auto& gs = ctx.gs();
                 const double p = ctx.params.p, M = ctx.params.M;
                 const double mu = mu_inf_of_mass(p, M, ctx.consts);
                 const auto s = soliton_inf(p, mu, ctx.grid);
                 const double ec = energy_c(gs.Q, ctx.params);
                 const double eq = energy_c(s.Q, ctx.params);
                 const double J = min_energy_inf(p, M, mu);
                 const double tol = 1e-12 * std::abs(J);
                 const double margin = std::min({eq - ec, J - eq, -J}) + tol;
                 CheckResult r = lower_check(margin, 0.0, "E_c(Q_c) <= E_c(Q_inf) <= J_inf(M) < 0");
                 return r;
               }});

  v.push_back({"refined_constraint", "refined constraint minimization", [](const VerifyContext& ctx) {
                 const double bound = refined_radius(ctx.params.p, ctx.params.M, ctx.consts.alpha);
                 const auto gf = solve_gradient_flow(ctx.params, ctx.grid, {}, &ctx.consts);
                 const auto& tr = gf.log.kinetic_trace;
                 // After the transient: the second half of the flow.
                 const double worst = *std::max_element(tr.begin() + static_cast<long>(tr.size() / 2), tr.end());
                 CheckResult r = upper_check(std::max(worst, std::sqrt(kinetic_c(ctx.gs().Q, ctx.params.c))), bound);
                 const double d = h_half_distance_centered(gf.Q, ctx.gs().Q);
                 r.message = "gradient flow vs Petviashvili H^1/2 distance " + fmt_g(d);
                 if (d > 1e-7) r.pass = false;
                 r.applicable = ctx.params.c >= thresholds(ctx.params, ctx.consts).c_min_existence;
                 return r;
               }});

  v.push_back({"relativistic_pohozaev", "relativistic Pohozaev identity", [](const VerifyContext& ctx) {
                 const auto& gs = ctx.gs();
                 const auto t = pohozaev_terms(gs.Q, gs.mu, gs.params.p, gs.params.c);
                 return upper_check(t.identity_residual, 1e-8,
                                    "nehari " + fmt_g(t.nehari_residual) + ", multiplier form " +
                                        fmt_g(t.multiplier_form_residual));
               }});

  v.push_back({"ground_state_property", "energy minimizer as a ground state", [](const VerifyContext& ctx) {
                 const auto& gs = ctx.gs();
                 const double p = ctx.params.p, c = ctx.params.c, M = ctx.params.M;
                 const double E = energy_c(gs.Q, ctx.params);
                 const double floor = ground_state_energy_floor(kinetic_c(gs.Q, c), M, p, c);
                 CheckResult r = lower_check(std::min(-E, E - floor), 0.0, "0 > J_c(M) >= floor");
                 r.measured = E;
                 r.target = floor;
                 return r;
               }});

  v.push_back({"kinetic_energy_comparison", "kinetic energy comparison", [](const VerifyContext& ctx) {
                 const auto& gs = ctx.gs();
                 const double c = ctx.params.c;
                 const double gap = kinetic_inf(gs.Q) - kinetic_c(gs.Q, c);
                 const double bound = h2_seminorm_sq(gs.Q) / (c * c);
                 CheckResult r = upper_check(gap, bound * (1.0 + 1e-12));
                 if (gap < 0.0) {
                   r.pass = false;
                   r.message = "negative kinetic gap";
                 }
                 return r;
               }});

  v.push_back({"h2_bound", "uniform H^2 bound for ground states", [](const VerifyContext& ctx) {
                 const auto& gs = ctx.gs();
                 const double mu = mu_inf_of_mass(ctx.params.p, ctx.params.M, ctx.consts);
                 const double ref = std::sqrt(hs_norm_sq(soliton_inf(ctx.params.p, mu, ctx.grid).Q, 2.0));
                 double worst = std::sqrt(hs_norm_sq(gs.Q, 2.0)) / ref;
                 for (double f : {2.0, 4.0}) {
                   ModelParams q = ctx.params;
                   q.c *= f;
                   worst = std::max(worst, std::sqrt(hs_norm_sq(solve_petviashvili(q, ctx.grid).Q, 2.0)) / ref);
                 }
                 return upper_check(worst, 2.0, "max ||Q_c||_{H^2} / ||Q_inf||_{H^2} over c, 2c, 4c");
               }});

  v.push_back({"weinstein_coercivity", "coercivity of the non-relativistic linearization",
               [](const VerifyContext& ctx) {
                 const double mu = mu_inf_of_mass(ctx.params.p, ctx.params.M, ctx.consts);
                 const auto op = make_linearized(soliton_inf(ctx.params.p, mu, ctx.grid));
                 const auto e = min_eig_constrained(op);
                 return lower_check(e.lambda_min, 1e-3 * mu, "lambda_min of L_inf on even, orthogonal-to-Q");
               }});

  v.push_back({"uniform_coercivity", "uniform coercivity of the relativistic linearization",
               [](const VerifyContext& ctx) {
                 const auto& gs = ctx.gs();
                 const auto op = make_linearized(gs);
                 const auto e = min_eig_constrained(op);
                 const double ratio = coercivity_ratio(op, MultiplierSpec::weight_1_plus_hc(ctx.params.c));
                 CheckResult r = lower_check(e.lambda_min, 1e-3 * gs.mu,
                                             "coercivity ratio " + fmt_g(ratio) + ", stationarity " +
                                                 fmt_g(stationarity_residual(op, e)));
                 if (!(ratio > 0.0)) r.pass = false;
                 return r;
               }});

  v.push_back({"gwp_kinetic_bound", "global well-posedness kinetic bound", [](const VerifyContext& ctx) {
                 const auto& gs = ctx.gs();
                 const auto rep = stability_experiment(gs, 1e-3, IntegratorConfig{1e-2, 10.0, 10, 0}, ctx.consts, ctx.seed);
                 CheckResult r = upper_check(rep.gwp.sup_kinetic, rep.gwp.bound, rep.gwp.status);
                 if (!rep.gwp.hypotheses_met || rep.blow_up) r.pass = false;
                 return r;
               }});

  v.push_back({"orbital_stability", "orbital stability of the ground state", [](const VerifyContext& ctx) {
                 const auto& gs = ctx.gs();
                 const auto rep = stability_experiment(gs, 1e-3, IntegratorConfig{1e-2, 10.0, 10, 0}, ctx.consts, ctx.seed);
                 CheckResult r = upper_check(rep.sup_distance, 1e-2, "delta = 1e-3, T = 10");
                 if (rep.blow_up) r.pass = false;
                 return r;
               }});

  return v;
}

struct VerifyOptions {
  ModelParams params;
  std::optional<Grid> grid;
  std::optional<Constants> constants_override;
  std::vector<std::string> only;  ///< names to run; empty runs every check
  bool run_none = false;          ///< run an empty check list
  unsigned workers = 0;           ///< 0 = hardware concurrency
  std::uint64_t seed = 0x5EED;
};

inline VerifyReport run_verify(const VerifyOptions& opt, const std::vector<CheckSpec>& all = default_checks()) {
  opt.params.validate();
  std::vector<const CheckSpec*> selected;
  if (!opt.run_none) {
    for (const auto& c : all)
      if (opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), c.name) != opt.only.end())
        selected.push_back(&c);
    for (const auto& n : opt.only)
      if (std::none_of(all.begin(), all.end(), [&](const CheckSpec& c) { return c.name == n; }))
        throw UsageError("unknown check '" + n + "'");
  }

  VerifyReport rep;
  rep.params = opt.params;
  if (selected.empty()) return rep;

  VerifyContext ctx{opt.params, opt.grid.value_or(default_grid(opt.params.p, opt.params.M)),
                    opt.constants_override.value_or(constants_for(opt.params.p)), opt.seed, nullptr, {}};
  try {
    ctx.ground_state = std::make_shared<const GroundState>(solve_petviashvili(ctx.params, ctx.grid, {}, &ctx.consts));
  } catch (const std::exception& e) {
    ctx.solve_error = e.what();
  }

  auto run_one = [&ctx](const CheckSpec* spec) {
    CheckResult r;
    try {
      r = spec->run(ctx);
    } catch (const std::exception& e) {
      r = CheckResult{};
      r.errored = true;
      r.message = e.what();
    }
    r.name = spec->name;
    r.anchor = spec->anchor;
    return r;
  };

  unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
  rep.checks.resize(selected.size());
  for (std::size_t start = 0; start < selected.size(); start += workers) {
    std::vector<std::future<CheckResult>> batch;
    const std::size_t end = std::min(selected.size(), start + workers);
    for (std::size_t i = start; i < end; ++i) batch.push_back(std::async(std::launch::async, run_one, selected[i]));
    for (std::size_t i = start; i < end; ++i) rep.checks[i] = batch[i - start].get();
  }
  return rep;
}

}  // namespace relsol
