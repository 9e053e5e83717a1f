#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "dcres_tools/cli.hpp"
#include "dcres_tools/output.hpp"
#include "dcres_tools/verify.hpp"

using namespace dcres::tools;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "dcres");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path tmpdir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dcres_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  return {std::istreambuf_iterator<char>(is), {}};
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const char* kSmallConfig = R"({
  "Z": 0.2, "kappa": -1, "mu": 0.5, "dr": 0.1, "t_final": 30,
  "data": {"center": 1.0, "half_width": 0.6, "amp_plus": 1.0, "amp_minus": [0.0, 0.5]},
  "record_radii": [5, 10, 15, 20],
  "window": [2, 8]
})";

}  // namespace

TEST(Cli, Poles) {
  const auto dir = tmpdir("poles");
  const auto r = run({"poles", "--Z", "0.3", "--kappa", "1", "--m-max", "2", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(dir / "poles.json"));
  ASSERT_EQ(j["poles"].size(), 3u);
  EXPECT_NEAR(j["poles"][0]["re"].get<double>(), -0.3, 1e-15);
  EXPECT_NEAR(j["poles"][0]["im"].get<double>(), -1.95394, 1e-5);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir / "run_time.json"));
}

TEST(Cli, PolesAtZeroChargeIsEmptyWithNote) {
  const auto dir = tmpdir("poles0");
  const auto r = run({"poles", "--Z", "0", "--kappa", "1", "--out", dir.string()});
  EXPECT_EQ(r.code, 0);
  const auto j = json::parse(slurp(dir / "poles.json"));
  EXPECT_TRUE(j["poles"].empty());
  EXPECT_FALSE(j["note"].get<std::string>().empty());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"poles", "--Z", "0.7", "--kappa", "1", "--out", tmpdir("u1").string()}).code, kExitUsage);
  EXPECT_EQ(run({"poles", "--Z", "0.1", "--kappa", "0", "--out", tmpdir("u2").string()}).code, kExitUsage);
  EXPECT_EQ(run({"poles", "--kappa", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "nonsense"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, OutputDirFromEnvironment) {
  const auto dir = tmpdir("envdir");
  ::setenv("DCRES_OUTPUT_DIR", dir.c_str(), 1);
  const auto r = run({"poles", "--Z", "0.1", "--kappa", "2"});
  ::unsetenv("DCRES_OUTPUT_DIR");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(dir / "poles.json"));
}

TEST(Cli, EvolveSmallRunIsDeterministic) {
  const auto base = tmpdir("evolve");
  fs::create_directories(base);
  write(base / "cfg.json", kSmallConfig);
  const auto a = run({"evolve", "--config", (base / "cfg.json").string(), "--out", (base / "a").string()});
  const auto b = run({"evolve", "--config", (base / "cfg.json").string(), "--out", (base / "b").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  for (const char* f : {"radiation.csv", "snapshots.csv", "norm.csv", "fit.json", "manifest.json"})
    EXPECT_EQ(slurp(base / "a" / f), slurp(base / "b" / f)) << f;
  const auto m = json::parse(slurp(base / "a" / "manifest.json"));
  EXPECT_EQ(m["command"], "evolve");
  for (const auto& o : m["outputs"])
    EXPECT_EQ(o["sha256"].get<std::string>(), sha256_file(base / "a" / o["file"].get<std::string>()));
  EXPECT_FALSE(slurp(base / "a" / "manifest.json").find("utc") != std::string::npos);
}

TEST(Cli, EvolveCsvRoundTrips) {
  const auto base = tmpdir("roundtrip");
  fs::create_directories(base);
  write(base / "cfg.json", kSmallConfig);
  ASSERT_EQ(run({"evolve", "--config", (base / "cfg.json").string(), "--out", base.string()}).code, 0);
  std::ifstream is(base / "radiation.csv");
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "s,component,re,im");
  int rows = 0;
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const double v = std::stod(cell);
      EXPECT_EQ(format_double(v), cell);
    }
    ++rows;
  }
  EXPECT_GT(rows, 0);
  const auto fit = json::parse(slurp(base / "fit.json"));
  EXPECT_EQ(json::parse(fit.dump()), fit);
}

TEST(Cli, EvolveMissingFieldNamesIt) {
  const auto base = tmpdir("missing");
  fs::create_directories(base);
  write(base / "cfg.json", R"({"Z": 0.1, "kappa": 1, "mu": 0.5, "dr": 0.1, "t_final": 5,
                                "data": {"center": 1.0, "amp_plus": 1.0, "amp_minus": 0.0}})");
  const auto r = run({"evolve", "--config", (base / "cfg.json").string(), "--out", base.string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("data.half_width"), std::string::npos) << r.err;
}

TEST(Cli, EvolveDomainAndCflErrors) {
  const auto base = tmpdir("domain");
  fs::create_directories(base);
  write(base / "cfg.json", kSmallConfig);
  const auto d = run({"evolve", "--config", (base / "cfg.json").string(), "--grid-n", "100", "--out", base.string()});
  EXPECT_EQ(d.code, kExitNumerical);
  EXPECT_NE(d.err.find("cells"), std::string::npos) << d.err;
  EXPECT_FALSE(fs::exists(base / "radiation.csv"));
  const auto c = run({"evolve", "--config", (base / "cfg.json").string(), "--dt", "0.2", "--out", base.string()});
  EXPECT_EQ(c.code, kExitNumerical);
  EXPECT_NE(c.err.find("dt"), std::string::npos);
}

TEST(Cli, BundledConfigParses) {
  std::ifstream is(std::string(DCRES_CONFIG_DIR) + "/evolve_z03_k1.json");
  ASSERT_TRUE(is.good());
  const auto j = json::parse(is);
  EXPECT_EQ(j["Z"].get<double>(), 0.3);
  EXPECT_EQ(j["kappa"].get<int>(), 1);
}

TEST(Cli, VerifyClifford) {
  const auto r = run({"verify", "clifford"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("clifford/gamma_anticommutation"), std::string::npos);
  EXPECT_EQ(r.out, run({"verify", "clifford"}).out);
}

TEST(Cli, VerifyWronskian) {
  const auto checks = run_suite("wronskian");
  ASSERT_EQ(checks.size(), 1u);
  EXPECT_TRUE(checks[0].passed);
  EXPECT_LT(checks[0].deviation, 1e-8);
}

TEST(Output, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Output, Sha256) {
  const auto p = tmpdir("sha") ;
  fs::create_directories(p);
  write(p / "abc.txt", "abc");
  EXPECT_EQ(sha256_file(p / "abc.txt"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
