#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "relsol/config.hpp"
#include "relsol/io.hpp"
#include "relsol/verify.hpp"

using namespace relsol;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("relsol_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig parse(std::vector<std::string> a) { return parse_config(std::move(a)); }

}  // namespace

TEST(Config, DefaultsAreResolved) {
  const RunConfig cfg = parse({"solve", "--p", "3", "--M", "1", "--c", "8", "--out", "x"});
  EXPECT_EQ(cfg.grid().length(), 256.0);
  EXPECT_EQ(cfg.grid().size(), 4096u);
  const auto j = cfg.to_json();
  for (const char* k : {"p", "c", "M", "L", "N", "method", "tol", "dt", "T", "seed", "out"})
    EXPECT_TRUE(j.contains(k)) << k;
}

TEST(Config, InadmissibleSpeedNamesThreshold) {
  try {
    parse({"solve", "--p", "3", "--M", "1", "--c", "0.5"});
    FAIL() << "expected a usage error";
  } catch (const UsageError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("(alpha M)^((p-1)/(5-p))"), std::string::npos) << msg;
    EXPECT_NE(msg.find("12.959"), std::string::npos) << msg;
  }
  EXPECT_NO_THROW(parse({"solve", "--c", "0.5", "--allow-inadmissible"}));
}

TEST(Config, RejectsBadPowerAndUnknownKeys) {
  EXPECT_THROW(parse({"solve", "--p", "5"}), UsageError);
  EXPECT_THROW(parse({"solve", "--p", "2.5"}), UsageError);
  EXPECT_THROW(parse({"bogus"}), UsageError);
  const fs::path dir = scratch("unknown");
  std::ofstream(dir / "c.toml") << "c = 8\nfoo = 1\n";
  EXPECT_THROW(parse({"solve", "--config", (dir / "c.toml").string()}), UsageError);
}

TEST(Config, FlagsOverrideFile) {
  const fs::path dir = scratch("precedence");
  std::ofstream(dir / "c.toml") << "c = 8\nM = 1\n";
  EXPECT_EQ(parse({"solve", "--config", (dir / "c.toml").string()}).params.c, 8.0);
  EXPECT_EQ(parse({"solve", "--config", (dir / "c.toml").string(), "--c", "16"}).params.c, 16.0);
}

TEST(Config, OutputDirectoryPrecedence) {
  ::setenv("RELSOL_OUT", "from_env", 1);
  EXPECT_EQ(parse({"solve"}).out_dir, "from_env");
  EXPECT_EQ(parse({"solve", "--out", "from_flag"}).out_dir, "from_flag");
  ::unsetenv("RELSOL_OUT");
  EXPECT_EQ(parse({"solve"}).out_dir, "relsol_out");
}

TEST(Config, CanonicalFormRoundTrips) {
  const fs::path dir = scratch("roundtrip");
  const RunConfig a = parse({"stability", "--c", "16", "--delta", "0.002", "--T", "3.5", "--gamma", "1.4",
                             "--c_list", "8,16,inf", "--checks", "modified_gn,symbol_bounds", "--seed", "99",
                             "--out", (dir / "o").string()});
  std::ofstream(dir / "a.toml") << a.to_config_text();
  const RunConfig b = parse({"stability", "--config", (dir / "a.toml").string()});
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  write_manifest(b);
  EXPECT_TRUE(fs::exists(dir / "o" / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir / "o" / "config.toml"));
}

TEST(Snapshot, BinaryRoundTripIsExact) {
  const fs::path dir = scratch("snap");
  const Grid g(12.5, 64);
  const Field u = Field::sample(g, [](double x) { return std::exp(-x * x) * 1.0000000000000002; });
  Field v = u;
  v *= std::polar(1.0, 0.3);
  write_snapshot(dir / "s", v, {3.0, kInfinity, 1.0, "test"});
  EXPECT_EQ(fs::file_size(dir / "s.bin"), 64u * 16u);
  const Snapshot s = read_snapshot(dir / "s");
  EXPECT_EQ(s.u.grid(), g);
  EXPECT_TRUE(std::isinf(s.meta.c));
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(s.u[j], v[j]);
  fs::resize_file(dir / "s.bin", 64u * 16u - 8u);
  EXPECT_THROW(read_snapshot(dir / "s"), UsageError);
}

TEST(Verify, EmptyCheckListPassesVacuously) {
  VerifyOptions o;
  o.run_none = true;
  const VerifyReport r = run_verify(o);
  EXPECT_TRUE(r.no_checks_run());
  EXPECT_TRUE(r.aggregate_pass());
  EXPECT_EQ(r.to_json().at("note"), "no checks run");
}

TEST(Verify, HalvedAlphaFailsGnCheck) {
  VerifyOptions o;
  o.only = {"modified_gn"};
  Constants k = constants_for(3.0);
  k.alpha *= 0.5;
  o.constants_override = k;
  const VerifyReport r = run_verify(o);
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_FALSE(r.checks[0].pass);
  EXPECT_EQ(r.checks[0].anchor, "modified Gagliardo-Nirenberg inequality");
  EXPECT_FALSE(r.aggregate_pass());

  o.constants_override.reset();
  EXPECT_TRUE(run_verify(o).aggregate_pass());
}

TEST(Verify, ErroredCheckFailsAggregate) {
  std::vector<CheckSpec> specs{
      {"fine", "always holds", [](const VerifyContext&) { return upper_check(0.0, 1.0); }},
      {"broken", "throws", [](const VerifyContext&) -> CheckResult { throw SolverError("boom"); }}};
  VerifyOptions o;
  o.grid = Grid(256.0, 512);
  const VerifyReport r = run_verify(o, specs);
  ASSERT_EQ(r.checks.size(), 2u);
  EXPECT_TRUE(r.checks[0].pass);
  EXPECT_TRUE(r.checks[1].errored);
  EXPECT_EQ(r.checks[1].message, "boom");
  EXPECT_FALSE(r.aggregate_pass());
}

TEST(Verify, UnknownCheckIsUsageError) {
  VerifyOptions o;
  o.only = {"no_such_check"};
  EXPECT_THROW(run_verify(o), UsageError);
}

TEST(Verify, ReportIsDeterministic) {
  VerifyOptions o;
  o.only = {"symbol_bounds", "modified_gn", "relativistic_pohozaev", "uniform_coercivity"};
  o.grid = Grid(256.0, 1024);
  o.workers = 2;
  const std::string a = run_verify(o).to_json().dump();
  o.workers = 1;
  const std::string b = run_verify(o).to_json().dump();
  EXPECT_EQ(a, b);
}

TEST(Verify, EveryCheckNamesAnAnchor) {
  for (const auto& c : default_checks()) {
    EXPECT_FALSE(c.anchor.empty()) << c.name;
    EXPECT_FALSE(c.name.empty());
  }
}
