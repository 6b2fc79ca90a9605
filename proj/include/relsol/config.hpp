#pragma once

// Run configuration: command-line and TOML-file parsing, admissibility gating,
// canonical JSON and a rerunnable config file.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relsol/constants.hpp"
#include "relsol/error.hpp"
#include "relsol/evolution.hpp"
#include "relsol/functionals.hpp"
#include "relsol/groundstate.hpp"
#include "relsol/io.hpp"

namespace relsol {

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> k{"solve", "limit", "spectrum", "evolve", "stability", "verify", "constants"};
  return k;
}

enum ExitCode : int { kExitPass = 0, kExitCheckFailure = 1, kExitUsage = 2, kExitSolver = 3 };

/// Thrown by parse_config for --help; carries the help text.
struct HelpRequested {
  std::string text;
};

struct RunConfig {
  std::string command;
  ModelParams params;
  double L = 0.0;  ///< 0 picks default_grid(p, M)
  std::size_t N = 4096;
  std::string method = "petviashvili";
  double tol = 1e-10;
  std::optional<double> gamma;
  IntegratorConfig integrator;
  double delta = 1e-3;
  std::string out_dir;
  std::uint64_t seed = 0x5EED;
  std::vector<double> c_list{8.0, 16.0, 32.0, 64.0};
  std::string constants_file;
  bool allow_inadmissible = false;
  std::vector<std::string> checks;  ///< empty runs every check
  bool no_checks = false;
  unsigned workers = 0;
  std::vector<std::string> warnings;  ///< not part of the canonical form

  Grid grid() const { return L > 0.0 ? Grid(L, N) : default_grid(params.p, params.M, N); }

  /// Every resolved value, including defaults. Grid length is written resolved.
  nlohmann::json to_json() const {
    nlohmann::json cl = nlohmann::json::array();
    for (double c : c_list) cl.push_back(number_or_inf(c));
    return {{"command", command},
            {"p", params.p},
            {"c", number_or_inf(params.c)},
            {"M", params.M},
            {"L", grid().length()},
            {"N", N},
            {"method", method},
            {"tol", tol},
            {"gamma", gamma ? nlohmann::json(*gamma) : nlohmann::json(nullptr)},
            {"dt", integrator.dt},
            {"T", integrator.T},
            {"sample_stride", integrator.sample_stride},
            {"snapshot_stride", integrator.snapshot_stride},
            {"delta", delta},
            {"out", out_dir},
            {"seed", seed},
            {"c_list", cl},
            {"constants_file", constants_file},
            {"allow_inadmissible", allow_inadmissible},
            {"checks", checks},
            {"no_checks", no_checks},
            {"workers", workers}};
  }

  /// TOML accepted back by --config; reproduces to_json() exactly.
  std::string to_config_text() const {
    std::ostringstream os;
    os << std::setprecision(17);
    auto num = [&](double v) -> std::string {
      if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
      std::ostringstream t;
      t << std::setprecision(17) << v;
      return t.str();
    };
    auto str = [](const std::string& s) { return nlohmann::json(s).dump(); };
    os << "command = " << str(command) << '\n';
    os << "p = " << num(params.p) << '\n';
    os << "c = " << num(params.c) << '\n';
    os << "M = " << num(params.M) << '\n';
    os << "L = " << num(grid().length()) << '\n';
    os << "N = " << N << '\n';
    os << "method = " << str(method) << '\n';
    os << "tol = " << num(tol) << '\n';
    if (gamma) os << "gamma = " << num(*gamma) << '\n';
    os << "dt = " << num(integrator.dt) << '\n';
    os << "T = " << num(integrator.T) << '\n';
    os << "sample_stride = " << integrator.sample_stride << '\n';
    os << "snapshot_stride = " << integrator.snapshot_stride << '\n';
    os << "delta = " << num(delta) << '\n';
    os << "out = " << str(out_dir) << '\n';
    os << "seed = " << seed << '\n';
    os << "c_list = [";
    for (std::size_t i = 0; i < c_list.size(); ++i) os << (i ? ", " : "") << num(c_list[i]);
    os << "]\n";
    if (!constants_file.empty()) os << "constants_file = " << str(constants_file) << '\n';
    os << "allow_inadmissible = " << (allow_inadmissible ? "true" : "false") << '\n';
    if (!checks.empty()) {
      os << "checks = [";
      for (std::size_t i = 0; i < checks.size(); ++i) os << (i ? ", " : "") << str(checks[i]);
      os << "]\n";
    }
    os << "no_checks = " << (no_checks ? "true" : "false") << '\n';
    os << "workers = " << workers << '\n';
    return os.str();
  }
};

inline double parse_c_value(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInfinity;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("c must be a number or 'inf', got '" + s + "'");
  }
  if (pos != s.size()) throw UsageError("c must be a number or 'inf', got '" + s + "'");
  return v;
}

/// Rejects c below the kinetic-ball threshold; warns below the full existence threshold.
inline void gate_c(double c, const ModelParams& base, const Constants& consts, bool allow, std::vector<std::string>& warnings) {
  if (!std::isfinite(c)) return;
  ModelParams q = base;
  q.c = c;
  const auto th = thresholds(q, consts);
  if (c < th.c_kinetic && !allow)
    throw UsageError("inadmissible c = " + std::to_string(c) + ": " + th.violation_message(c) +
                     " (pass --allow-inadmissible to run anyway)");
  if (c < th.c_min_existence) warnings.push_back(th.violation_message(c));
}

inline RunConfig parse_config(std::vector<std::string> args) {
  RunConfig cfg;
  CLI::App app{"Pseudo-relativistic NLS ground states, limits, spectra, evolution and checks", "relsol"};
  app.allow_config_extras(false);
  app.set_config("--config", "", "TOML configuration file (flags override it)");

  std::string c_text = "8";
  std::vector<std::string> c_list_text;
  std::optional<double> gamma;
  app.add_option("command", cfg.command, "solve | limit | spectrum | evolve | stability | verify | constants")
      ->required()
      ->check(CLI::IsMember(known_commands()));
  app.add_option("--p", cfg.params.p, "nonlinearity power, 3 <= p < 5");
  app.add_option("--c", c_text, "speed of light (number or 'inf')");
  app.add_option("--M", cfg.params.M, "mass");
  app.add_option("--L", cfg.L, "domain length (default: 64 decay lengths rounded up to a power of two)");
  app.add_option("--N", cfg.N, "grid points");
  app.add_option("--method", cfg.method, "ground-state solver")
      ->check(CLI::IsMember({"petviashvili", "gradient_flow"}));
  app.add_option("--tol", cfg.tol, "Euler-Lagrange residual tolerance");
  app.add_option("--gamma", gamma, "Petviashvili exponent (default p/(p-1))");
  app.add_option("--dt", cfg.integrator.dt, "time step");
  app.add_option("--T", cfg.integrator.T, "final time");
  app.add_option("--sample_stride", cfg.integrator.sample_stride, "steps between samples");
  app.add_option("--snapshot_stride", cfg.integrator.snapshot_stride, "samples between field snapshots (0: none)");
  app.add_option("--delta", cfg.delta, "perturbation size for stability runs");
  auto* out_opt = app.add_option("--out", cfg.out_dir, "output directory (overrides RELSOL_OUT)");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--c_list", c_list_text, "c values for the limit study")->delimiter(',');
  app.add_option("--constants_file", cfg.constants_file, "JSON constants cache to load and update");
  app.add_flag("--allow-inadmissible,--allow_inadmissible", cfg.allow_inadmissible,
               "run below the admissibility threshold on c");
  app.add_option("--checks", cfg.checks, "verify: names of checks to run")->delimiter(',');
  app.add_flag("--no_checks", cfg.no_checks, "verify: run an empty check list");
  app.add_option("--workers", cfg.workers, "verify: worker threads (0: hardware concurrency)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cfg.params.c = parse_c_value(c_text);
  cfg.gamma = gamma;
  if (!c_list_text.empty()) {
    cfg.c_list.clear();
    for (const auto& s : c_list_text) cfg.c_list.push_back(parse_c_value(s));
  }
  if (!(cfg.params.p >= 3.0 && cfg.params.p < 5.0))
    throw UsageError("p must lie in [3, 5), got " + std::to_string(cfg.params.p));
  cfg.params.validate();
  cfg.integrator.validate();
  if (!(cfg.tol > 0.0)) throw UsageError("tol must be positive");
  if (cfg.L < 0.0) throw UsageError("L must be positive");
  if (cfg.N < 16 || (cfg.N & (cfg.N - 1)) != 0) throw UsageError("N must be a power of two >= 16");
  if (!(cfg.delta >= 0.0)) throw UsageError("delta must be nonnegative");

  if (out_opt->count() == 0) {
    const char* env = std::getenv("RELSOL_OUT");
    cfg.out_dir = env && *env ? env : "relsol_out";
  }

  if (!cfg.constants_file.empty() && std::filesystem::exists(cfg.constants_file))
    ConstantsCache::global().load_file(cfg.constants_file);

  if (cfg.command != "constants") {
    const Constants consts = constants_for(cfg.params.p);
    if (cfg.command == "limit") {
      for (double c : cfg.c_list) gate_c(c, cfg.params, consts, cfg.allow_inadmissible, cfg.warnings);
    } else {
      if (!cfg.params.relativistic() && cfg.command != "solve")
        throw UsageError("command '" + cfg.command + "' requires finite c");
      gate_c(cfg.params.c, cfg.params, consts, cfg.allow_inadmissible, cfg.warnings);
    }
  }
  return cfg;
}

inline RunConfig parse_config(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return parse_config(std::move(args));
}

/// manifest.json (canonical config) plus config.toml, rerunnable with
/// `relsol <command> --config config.toml`.
inline void write_manifest(const RunConfig& cfg, const nlohmann::json& extra = nlohmann::json::object()) {
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  nlohmann::json m = {{"schema_version", 1},
                      {"config", cfg.to_json()},
                      {"rerun", "relsol " + cfg.command + " --config " + (dir / "config.toml").string()}};
  if (!extra.empty()) m["results"] = extra;
  std::ofstream(dir / "manifest.json") << m.dump(2) << '\n';
  std::ofstream(dir / "config.toml") << cfg.to_config_text();
}

}  // namespace relsol
