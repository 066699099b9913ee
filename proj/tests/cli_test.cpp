#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "covert/scenario_io.hpp"
#include "json.hpp"

namespace covert::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

TEST(Cli, VerifyPresetPasses) {
  const Result r = invoke({"verify", "--preset", "example_sec4"});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_EQ(r.out.rfind("check,status,detail\n", 0), 0u);
  EXPECT_NE(r.out.find("oracle_equivalence,pass"), std::string::npos);
  EXPECT_NE(r.out.find("threshold_single_crossing,pass"), std::string::npos);
}

TEST(Cli, VerifyVerdictStableUnderWiderSeedSweep) {
  const Result narrow = invoke({"verify", "--preset", "example_sec4"});
  const Result wide = invoke({"verify", "--preset", "example_sec4", "--seeds", "100"});
  EXPECT_EQ(narrow.code, wide.code);
}

TEST(Cli, VerifyNamesTheViolatedAssumption) {
  auto doc = nlohmann::json::parse(preset_document("example_sec4"));
  // x no longer depends on the action.
  doc["system_map"] = {{0, 0, 0}, {0, 1, 0}, {1, 0, 1}, {1, 1, 1}};
  const std::string path = write_temp("covert_cli_unobservable.json", doc.dump());
  const Result r = invoke({"verify", "--scenario", path});
  EXPECT_EQ(r.code, kExitCheckFailed);
  EXPECT_NE(r.out.find("input_observability"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({"run"}).code, kExitUsage);
  EXPECT_EQ(invoke({"run", "--preset", "nope"}).code, kExitUsage);
  EXPECT_EQ(invoke({"run", "--preset", "example_sec4", "--scenario", "x.json"}).code, kExitUsage);
  EXPECT_EQ(invoke({"montecarlo", "--preset", "example_sec4", "--trials", "0"}).code, kExitUsage);
}

TEST(Cli, SchemaErrorIsUsageError) {
  const std::string path = write_temp("covert_cli_broken.json", "{\"alphabets\": {}}");
  const Result r = invoke({"run", "--scenario", path});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("alphabets"), std::string::npos);
}

TEST(Cli, RunIsDeterministic) {
  const Result a = invoke({"run", "--preset", "example_sec4", "--seed", "42"});
  const Result b = invoke({"run", "--preset", "example_sec4", "--seed", "42"});
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("k,u,action,x,y,pi_true_m,pi_hat_m,reaction,fixed_point\n", 0), 0u);
}

TEST(Cli, HorizonOverride) {
  const Result r = invoke({"run", "--preset", "example_sec4", "--horizon", "3"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
}

TEST(Cli, MonteCarloSummary) {
  const Result r =
      invoke({"montecarlo", "--preset", "example_sec4", "--horizon", "5", "--trials", "3"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("k,pi_hat_m,emp_mean_pi_true_m,emp_var\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);
}

TEST(Cli, OracleAgreesWithRecursion) {
  const Result r = invoke({"oracle", "--preset", "example_sec4", "--actions", "1,1,0,1",
                           "--inputs", "0,1,1,0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("\n4,"), std::string::npos);
  EXPECT_LE(std::stod(r.out.substr(r.out.rfind(',') + 1)), 1e-12);
}

TEST(Cli, OutWritesFile) {
  const auto path = (std::filesystem::temp_directory_path() / "covert_cli_out.csv").string();
  const Result r = invoke({"run", "--preset", "example_sec4", "--horizon", "2", "--out", path});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

}  // namespace
}  // namespace covert::cli
