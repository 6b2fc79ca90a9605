// relsol: command-line driver. One command per process; results go to
// stdout (JSON) and to the output directory with a manifest.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "relsol/relsol.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace relsol;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void emit(const RunConfig& cfg, const std::string& name, const json& j) {
  fs::create_directories(cfg.out_dir);
  std::ofstream(fs::path(cfg.out_dir) / name) << j.dump(2) << '\n';
  std::cout << j.dump(2) << '\n';
}

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions o;
  o.tol_residual = cfg.tol;
  o.gamma = cfg.gamma;
  return o;
}

GroundState solve(const RunConfig& cfg, const Constants& consts) {
  const Grid g = cfg.grid();
  if (!cfg.params.relativistic()) {
    GroundState gs = soliton_inf(cfg.params.p, mu_inf_of_mass(cfg.params.p, cfg.params.M, consts), g);
    gs.params = cfg.params;
    return gs;
  }
  if (cfg.method == "gradient_flow") return solve_gradient_flow(cfg.params, g, solve_options(cfg), &consts);
  return solve_petviashvili(cfg.params, g, solve_options(cfg), &consts);
}

json ground_state_json(const GroundState& gs) {
  return {{"method", to_string(gs.method)},
          {"mu", gs.mu},
          {"mass", mass(gs.Q)},
          {"energy", energy(gs.Q, gs.params)},
          {"kinetic_norm", gs.params.relativistic() ? std::sqrt(kinetic_c(gs.Q, gs.params.c))
                                                    : std::sqrt(kinetic_inf(gs.Q))},
          {"el_residual", gs.el_residual},
          {"pohozaev_residual", gs.pohozaev_residual},
          {"admissible", gs.admissible},
          {"outer_iterations", gs.log.outer_iterations},
          {"inner_iterations", gs.log.inner_iterations}};
}

SnapshotMeta meta(const RunConfig& cfg, const std::string& kind) {
  return {cfg.params.p, cfg.params.c, cfg.params.M, kind};
}

int cmd_solve(const RunConfig& cfg, const Constants& consts) {
  const GroundState gs = solve(cfg, consts);
  write_snapshot(fs::path(cfg.out_dir) / "ground_state", gs.Q, meta(cfg, "ground_state"));
  const json j = ground_state_json(gs);
  emit(cfg, "solve.json", j);
  write_manifest(cfg, j);
  return kExitPass;
}

int cmd_limit(const RunConfig& cfg, const Constants& consts) {
  const LimitStudy st =
      nonrel_limit_study(cfg.params.p, cfg.params.M, cfg.c_list, cfg.grid(), solve_options(cfg), &consts);
  json rows = json::array();
  for (const auto& r : st.rows)
    rows.push_back({{"c", r.c},
                    {"mu", r.mu},
                    {"h1_distance", r.h1_distance},
                    {"mu_gap", r.mu_gap},
                    {"kinetic_gap", r.kinetic_gap},
                    {"gap_bound", r.gap_bound},
                    {"gap_bound_holds", r.gap_bound_holds},
                    {"h2_norm", r.h2_norm},
                    {"el_residual", r.el_residual},
                    {"admissible", r.admissible}});
  const json j = {{"p", st.p},
                  {"M", st.M},
                  {"mu_inf", st.mu_inf},
                  {"rows", rows},
                  {"mu_rate_exponent", st.mu_rate_exponent},
                  {"h1_rate_exponent", st.h1_rate_exponent}};
  emit(cfg, "limit.json", j);
  write_manifest(cfg, j);
  return kExitPass;
}

int cmd_spectrum(const RunConfig& cfg, const Constants& consts) {
  const GroundState gs = solve(cfg, consts);
  const auto op = make_linearized(gs);
  EigOptions eo;
  eo.seed = cfg.seed;
  const EigResult e = min_eig_constrained(op, {}, eo);
  const EigResult w = coercivity_eig(op, MultiplierSpec::weight_1_plus_hc(cfg.params.c), {}, eo);
  write_snapshot(fs::path(cfg.out_dir) / "eigenvector", e.vector, meta(cfg, "eigenvector"));
  const json j = {{"operator", to_string(op.kind)},
                  {"constraints", e.constraints},
                  {"mu", gs.mu},
                  {"lambda_min", e.lambda_min},
                  {"residual", e.residual},
                  {"stationarity_residual", stationarity_residual(op, e)},
                  {"lanczos_iterations", e.iterations},
                  {"coercivity_ratio", w.lambda_min},
                  {"coercive", e.lambda_min > 0.0}};
  emit(cfg, "spectrum.json", j);
  write_manifest(cfg, j);
  return kExitPass;
}

json sample_json(const EvolutionSample& s) {
  json j = {{"t", s.t}, {"mass", s.mass}, {"energy", s.energy}, {"kinetic_norm", s.kinetic_norm}};
  if (s.modulation) {
    j["mod_distance"] = s.modulation->distance;
    j["x1"] = s.modulation->x1;
    j["theta1"] = s.modulation->theta1;
  }
  return j;
}

/// Streams samples to samples.jsonl and snapshots to snapshots/.
class SampleSink {
 public:
  explicit SampleSink(const RunConfig& cfg) : cfg_(cfg) {
    fs::create_directories(cfg.out_dir);
    out_.open(fs::path(cfg.out_dir) / "samples.jsonl");
    if (cfg.integrator.snapshot_stride > 0) fs::create_directories(fs::path(cfg.out_dir) / "snapshots");
  }

  void operator()(const EvolutionSample& s, const EvolutionState& st) {
    out_ << sample_json(s).dump() << '\n';
    if (cfg_.integrator.snapshot_stride > 0 && count_ % cfg_.integrator.snapshot_stride == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "sample_%06d", count_);
      write_snapshot(fs::path(cfg_.out_dir) / "snapshots" / name, st.u, meta(cfg_, "evolution"));
    }
    ++count_;
  }

 private:
  const RunConfig& cfg_;
  std::ofstream out_;
  int count_ = 0;
};

int cmd_evolve(const RunConfig& cfg, const Constants& consts) {
  const GroundState gs = solve(cfg, consts);
  SampleSink sink(cfg);
  const Trajectory tr = evolve(gs.Q, cfg.params, cfg.integrator, &gs,
                               [&sink](const EvolutionSample& s, const EvolutionState& st) { sink(s, st); });
  const auto cons = conserved_report(tr);
  const json j = {{"steps", tr.steps},
                  {"final_time", tr.final_state.t},
                  {"mass_drift", cons.mass_drift},
                  {"energy_drift", cons.energy_drift},
                  {"blow_up", tr.blow_up},
                  {"blow_up_reason", tr.blow_up_reason}};
  emit(cfg, "evolve.json", j);
  write_manifest(cfg, j);
  return tr.blow_up ? kExitSolver : kExitPass;
}

int cmd_stability(const RunConfig& cfg, const Constants& consts) {
  const GroundState gs = solve(cfg, consts);
  SampleSink sink(cfg);
  const StabilityReport rep = stability_experiment(
      gs, cfg.delta, cfg.integrator, consts, cfg.seed,
      [&sink](const EvolutionSample& s, const EvolutionState& st) { sink(s, st); });
  const json j = {{"delta", rep.delta},
                  {"seed", rep.seed},
                  {"initial_distance", rep.initial_distance},
                  {"sup_distance", rep.sup_distance},
                  {"mass_drift", rep.conservation.mass_drift},
                  {"energy_drift", rep.conservation.energy_drift},
                  {"kinetic_bound",
                   {{"status", rep.gwp.status},
                    {"bound", rep.gwp.bound},
                    {"sup_kinetic", rep.gwp.sup_kinetic},
                    {"worst_margin", rep.gwp.hypotheses_met ? json(rep.gwp.worst_margin) : json(nullptr)}}},
                  {"blow_up", rep.blow_up}};
  emit(cfg, "stability.json", j);
  write_manifest(cfg, j);
  return rep.blow_up ? kExitSolver : kExitPass;
}

int cmd_verify(const RunConfig& cfg, const Constants& consts) {
  VerifyOptions vo;
  vo.params = cfg.params;
  if (cfg.L > 0.0) vo.grid = cfg.grid();
  vo.constants_override = consts;
  vo.only = cfg.checks;
  vo.run_none = cfg.no_checks;
  vo.workers = cfg.workers;
  vo.seed = cfg.seed;
  VerifyReport rep = run_verify(vo);
  rep.timestamp = utc_timestamp();
  const json j = rep.to_json();
  emit(cfg, "verify.json", j);
  std::ofstream(fs::path(cfg.out_dir) / "verify.timestamp.json") << json{{"timestamp", rep.timestamp}}.dump() << '\n';
  write_manifest(cfg, {{"aggregate_pass", rep.aggregate_pass()}});
  for (const auto& name : rep.failed_names()) std::cerr << "check failed: " << name << '\n';
  return rep.aggregate_pass() ? kExitPass : kExitCheckFailure;
}

int cmd_constants(const RunConfig& cfg) {
  const Constants k = constants_for(cfg.params.p);
  const json j = {{"p", k.p},
                  {"C1", k.c1},
                  {"Chalf", k.c_half},
                  {"CGN", k.c_gn},
                  {"alpha", k.alpha},
                  {"provenance", {{"C1", to_string(k.c1_provenance)}, {"Chalf", to_string(k.c_half_provenance)}}}};
  if (!cfg.constants_file.empty()) ConstantsCache::global().save_file(cfg.constants_file);
  emit(cfg, "constants.json", j);
  write_manifest(cfg, j);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    cfg = parse_config(argc, argv);
  } catch (const HelpRequested& h) {
    std::cout << h.text;
    return kExitPass;
  } catch (const Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';

  try {
    const Constants consts = constants_for(cfg.params.p);
    if (cfg.command == "solve") return cmd_solve(cfg, consts);
    if (cfg.command == "limit") return cmd_limit(cfg, consts);
    if (cfg.command == "spectrum") return cmd_spectrum(cfg, consts);
    if (cfg.command == "evolve") return cmd_evolve(cfg, consts);
    if (cfg.command == "stability") return cmd_stability(cfg, consts);
    if (cfg.command == "verify") return cmd_verify(cfg, consts);
    return cmd_constants(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}
