#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "haus/io.hpp"
#include "haus/verify.hpp"

namespace haus::cli {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation haus(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Invocation r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("haus_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

double row_value(const CsvTable& t, const std::string& xcol, double x, const std::string& ycol) {
  const auto& xs = t.column(xcol);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - x) < 1e-12) return t.column(ycol)[i];
  }
  ADD_FAILURE() << "no row with " << xcol << " = " << x;
  return NAN;
}

double rel_l2(const SampledSignal& a, const SampledSignal& b) { return lp_norm(a.minus(b), 2.0) / lp_norm(b, 2.0); }

TEST_F(Cli, CheckPassesForPowerTail) {
  const Invocation r = haus({"check", "--weight", R"({"family":"power-tail","p":2})"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_NEAR(j["integral_phi"].get<double>(), 1.0, 1e-10);
}

TEST_F(Cli, CheckRejectsParameterOutOfRange) {
  const Invocation r = haus({"check", "--weight", R"({"family":"power-bump","p":0.6})"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("p < 1/2"), std::string::npos) << r.err;
}

TEST_F(Cli, CheckNotesDivergenceForRiemannLiouville) {
  const Invocation r = haus({"check", "--weight", R"({"family":"riemann-liouville","alpha":1})", "--out", path("rl.json")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(read_text(path("rl.json")));
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_TRUE(j["l1_phi_a"].is_null());
  EXPECT_TRUE(std::isfinite(j["l1_phi_sqrt_a"].get<double>()));
  bool noted = false;
  for (const auto& n : j["notes"]) noted = noted || n.get<std::string>().find("diverges") != std::string::npos;
  EXPECT_TRUE(noted);
}

TEST_F(Cli, WeightByFamilyName) {
  EXPECT_EQ(haus({"check", "--weight", "riemann-liouville", "--alpha", "0.5"}).code, kExitOk);
  EXPECT_EQ(haus({"check", "--weight", "cauchy"}).code, kExitConfig);
}

TEST_F(Cli, MultiplierTable) {
  const Invocation r = haus({"multiplier", "--weight", "power-tail", "--p", "2", "--xmin", "-2", "--xmax", "2", "--points", "401",
                      "--out", path("m.csv"), "--svg", path("m.svg")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const CsvTable t = read_csv(path("m.csv"));
  EXPECT_EQ(t.header, (std::vector<std::string>{"x", "khat"}));
  EXPECT_EQ(t.rows(), 401u);
  EXPECT_NEAR(row_value(t, "x", 0.0, "khat"), 1.0, 1e-12);
  EXPECT_NEAR(row_value(t, "x", 0.5, "khat"), 0.5, 1e-12);
  EXPECT_NEAR(row_value(t, "x", 1.5, "khat"), 0.0, 1e-12);
  EXPECT_TRUE(fs::exists(path("m.svg")));
}

TEST_F(Cli, MultiplierAdjointHardy) {
  ASSERT_EQ(haus({"multiplier", "--weight", "adjoint-hardy", "--xmin", "0", "--xmax", "4", "--points", "9", "--out", path("a.csv")}).code,
            kExitOk);
  EXPECT_NEAR(row_value(read_csv(path("a.csv")), "x", 2.0, "khat"), 0.5, 1e-12);
}

TEST_F(Cli, MultiplierSinglePoint) {
  ASSERT_EQ(haus({"multiplier", "--weight", "power-tail", "--p", "2", "--xmin", "0", "--xmax", "0", "--points", "1", "--out",
                  path("one.csv")})
                .code,
            kExitOk);
  EXPECT_EQ(read_text(path("one.csv")), "x,khat\n0,1\n");
}

TEST_F(Cli, MultiplierUnwritableOutputIsIoError) {
  EXPECT_EQ(haus({"multiplier", "--weight", "power-tail", "--p", "2", "--out", "/nonexistent-dir/m.csv"}).code, kExitIo);
}

TEST_F(Cli, KernelTable) {
  ASSERT_EQ(haus({"kernel", "--weight", "power-tail", "--p", "2", "--smin", "0", "--smax", "4", "--points", "5", "--out",
                  path("k.csv")})
                .code,
            kExitOk);
  const CsvTable t = read_csv(path("k.csv"));
  EXPECT_NEAR(row_value(t, "s", 0.0, "k"), 1.0 / (2.0 * std::acos(-1.0)), 1e-10);
  EXPECT_NEAR(row_value(t, "s", 2.0, "k"), (1.0 - std::cos(2.0)) / (4.0 * std::acos(-1.0)), 1e-10);
}

TEST_F(Cli, ApplyZeroInput) {
  write_signal_csv(path("zero.csv"), SampledSignal::zeros(Grid::centered(1.0 / 16.0, 256)));
  ASSERT_EQ(haus({"apply", "--weight", "power-tail", "--p", "2", "--eps", "0.5", "--in", path("zero.csv"), "--out", path("out.csv")})
                .code,
            kExitOk);
  const SampledSignal g = read_signal_csv(path("out.csv"));
  for (double v : g.values()) EXPECT_EQ(v, 0.0);
}

TEST_F(Cli, ApplyReproducesBandLimitedInput) {
  const SampledSignal f = make_bandlimited(4.0, Grid::centered(1.0 / 16.0, 4096));
  write_signal_csv(path("bl.csv"), f);
  ASSERT_EQ(haus({"apply", "--weight", R"({"family":"riemann-liouville","alpha":1})", "--eps", "0.1", "--in", path("bl.csv"),
                  "--out", path("F.csv")})
                .code,
            kExitOk);
  EXPECT_LE(rel_l2(read_signal_csv(path("F.csv")), f), 1e-6);
}

TEST_F(Cli, ApplyPathsAgree) {
  write_signal_csv(path("bl.csv"), make_bandlimited(4.0, Grid::centered(1.0 / 16.0, 4096)));
  const std::vector<std::string> base{"apply", "--weight", "power-tail", "--p", "2", "--eps", "0.5", "--in", path("bl.csv")};
  auto spectral = base;
  spectral.insert(spectral.end(), {"--out", path("s.csv")});
  auto conv = base;
  conv.insert(conv.end(), {"--out", path("c.csv"), "--path", "convolution"});
  ASSERT_EQ(haus(spectral).code, kExitOk);
  ASSERT_EQ(haus(conv).code, kExitOk);
  EXPECT_LE(rel_l2(read_signal_csv(path("c.csv")), read_signal_csv(path("s.csv"))), 1e-3);

  auto direct = base;
  direct.insert(direct.end(), {"--out", path("d.csv"), "--path", "direct", "--points", "40"});
  EXPECT_EQ(haus(direct).code, kExitConfig);
}

TEST_F(Cli, ApplyMalformedCsv) {
  write_text(path("bad.csv"), "x,value\n0,1\n1\n");
  EXPECT_EQ(haus({"apply", "--weight", "power-tail", "--p", "2", "--in", path("bad.csv"), "--out", path("o.csv")}).code,
            kExitConfig);
  EXPECT_EQ(haus({"apply", "--weight", "power-tail", "--p", "2", "--in", path("missing.csv"), "--out", path("o.csv")}).code,
            kExitIo);
}

TEST_F(Cli, SweepConvergence) {
  const Invocation r = haus({"sweep", "--kind", "convergence", "--weight", "power-tail", "--p", "2", "--sigma", "1", "--eps",
                      "1,0.5,0.25,0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625", "--json", path("c.json"), "--csv",
                      path("c.csv"), "--svg", path("c.svg")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(read_text(path("c.json")));
  EXPECT_TRUE(j["passed"].get<bool>());
  const CsvTable t = read_csv(path("c.csv"));
  const auto& rate = t.column("fitted_rate");
  ASSERT_EQ(rate.size(), 9u);
  EXPECT_NEAR(rate.front(), 1.0, 0.1);
}

TEST_F(Cli, SweepHormander) {
  const Invocation r = haus({"sweep", "--kind", "hormander", "--weight", "power-tail", "--p", "2", "--json", path("h.json")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(read_text(path("h.json")));
  EXPECT_LE(j["summary"]["sup_as_written"].get<double>(), 3.0 / std::acos(-1.0) + 0.05);
}

TEST_F(Cli, SweepRateConditionsToStdout) {
  const Invocation r = haus({"sweep", "--kind", "rate-conditions", "--weight", "power-tail", "--p", "2", "--sigma", "2"});
  EXPECT_EQ(r.code, kExitFailed);
  EXPECT_FALSE(nlohmann::json::parse(r.out)["passed"].get<bool>());
}

TEST_F(Cli, SweepUnknownKind) {
  EXPECT_EQ(haus({"sweep", "--kind", "spectral-gap", "--weight", "power-tail", "--p", "2"}).code, kExitConfig);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(haus({}).code, kExitConfig);
  EXPECT_EQ(haus({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(haus({"multiplier", "--weight", "power-tail", "--p", "2"}).code, kExitConfig);  // --out missing
  const Invocation v = haus({"--version"});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_NE(v.out.find(kReportVersion), std::string::npos);
}

TEST_F(Cli, H1NormOfAnAtom) {
  const SampledSignal f = make_atom({0.0, 4.0, AtomShape::DifferenceOfBumps}, Grid::centered(1.0 / 16.0, 1024));
  write_signal_csv(path("atom.csv"), f);
  const Invocation r = haus({"h1norm", "--in", path("atom.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["h1_estimate"].get<double>(), h1_norm_estimate(f, MaximalConfig::for_signal(f)).value, 1e-12);
  EXPECT_TRUE(j["warnings"].empty());
  EXPECT_EQ(haus({"h1norm", "--in", path("atom.csv"), "--scale-min", "2", "--scale-max", "1"}).code, kExitConfig);
}

TEST_F(Cli, ConfigFileOverridesFlags) {
  write_text(path("cfg.json"), R"({"command":"multiplier","weight":"power-tail","p":2,"points":3,"xmin":-1,"xmax":1,"out":")" +
                                   path("cfg.csv") + "\"}");
  ASSERT_EQ(haus({"--config", path("cfg.json"), "--points", "7"}).code, kExitOk);
  EXPECT_EQ(read_csv(path("cfg.csv")).rows(), 3u);

  const std::vector<std::string> expanded = expand_config({"check", "--config=" + path("cfg.json")});
  EXPECT_EQ(expanded.front(), "check");
  EXPECT_EQ(haus({"--config", path("missing.json")}).code, kExitIo);
  write_text(path("bad.json"), "[1, 2]");
  EXPECT_EQ(haus({"--config", path("bad.json")}).code, kExitConfig);
}

TEST(Bundle, ExampleDirectories) {
  EXPECT_EQ(example_directories(), (std::vector<std::string>{"power-tail", "power-bump", "adjoint-hardy", "riemann-liouville"}));
}

}  // namespace
}  // namespace haus::cli
