#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lehmer::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, CountJson) {
  const auto r = invoke({"count", "--q", "5", "--k", "1,-1", "--m", "2,2", "--a", "1,1", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc.at("N"), 1);
  EXPECT_EQ(doc.at("main"), 1.0);
  EXPECT_EQ(doc.at("error"), 0.0);
}

TEST(Cli, NegativeLeadingComponent) {
  const auto r = invoke({"count", "--q", "7", "--k", "-1,1", "--m", "2,2", "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("7,-1;1,2;2,0;0,3,"), std::string::npos) << r.out;
}

TEST(Cli, ZeroExponentIsValidationError) {
  const auto r = invoke({"count", "--q", "5", "--k", "1,0", "--m", "2,2", "--a", "0,0"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("zero component"), std::string::npos);
  EXPECT_NE(r.err.find("--k"), std::string::npos);
}

TEST(Cli, ValidationMessagesNameTheFlag) {
  auto r = invoke({"count", "--q", "5", "--k", "1,x", "--m", "2,2"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("--k"), std::string::npos);
  r = invoke({"count", "--q", "5", "--k", "1,1", "--m", "2,0"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("--m"), std::string::npos);
  r = invoke({"count", "--q", "5", "--k", "1,1", "--m", "2"});
  EXPECT_EQ(r.code, kExitValidation);
  r = invoke({"count", "--q", "1", "--k", "1", "--m", "2"});
  EXPECT_EQ(r.code, kExitValidation);
  r = invoke({"count", "--q", "5", "--k", "1", "--m", "2", "--format", "xml"});
  EXPECT_EQ(r.code, kExitValidation);
  r = invoke({"parity", "--q", "10"});
  EXPECT_EQ(r.code, kExitValidation);
  r = invoke({"frobnicate"});
  EXPECT_EQ(r.code, kExitValidation);
}

TEST(Cli, CheckIdentities) {
  const auto r = invoke({"check", "--identities", "--l-max", "50"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("orthogonality: 50/50 pass"), std::string::npos) << r.out;
}

TEST(Cli, CheckBoundsAndWeil) {
  const auto r = invoke({"check", "--bounds", "--weil", "--l-max", "500", "--q-max", "200"});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_NE(r.out.find("geometric bounds"), std::string::npos);
  EXPECT_NE(r.out.find("weil: "), std::string::npos);
}

TEST(Cli, WorkBudgetRefusal) {
  auto r = invoke({"scan", "--family", "all", "--q-min", "2", "--q-max", "100000", "--k", "1,-1", "--m",
                   "1,1", "--work-budget", "1000"});
  EXPECT_EQ(r.code, kExitBudget);
  r = invoke({"count", "--q", "1000003", "--k", "1", "--m", "2", "--work-budget", "100"});
  EXPECT_EQ(r.code, kExitBudget);
}

TEST(Cli, JobsDoNotChangeOutput) {
  const std::vector<std::string> scan{"scan", "--family", "odd", "--q-min", "3", "--q-max", "2001",
                                      "--k", "2,-1", "--m", "2,3", "--a", "1,2", "--samples", "2",
                                      "--format", "csv"};
  auto one = scan;
  one.insert(one.end(), {"--jobs", "1"});
  auto eight = scan;
  eight.insert(eight.end(), {"--jobs", "8"});
  const auto a = invoke(one);
  const auto b = invoke(eight);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);

  const std::vector<std::string> es{"expsum", "--q", "300007", "--k", "1,-1,3", "--lambda", "5,7,-11",
                                    "--format", "json"};
  auto es1 = es;
  es1.insert(es1.end(), {"--jobs", "1"});
  auto es8 = es;
  es8.insert(es8.end(), {"--jobs", "8"});
  EXPECT_EQ(invoke(es1).out, invoke(es8).out);
}

TEST(Cli, SeedFromEnvironment) {
  const std::vector<std::string> args{"scan", "--family", "prime", "--q-min", "5", "--q-max", "60",
                                      "--k", "1,-1", "--m", "2,2", "--samples", "3", "--format", "json"};
  ::setenv("LEHMER_LAB_SEED", "99", 1);
  const auto env = invoke(args);
  ::unsetenv("LEHMER_LAB_SEED");
  auto explicit_args = args;
  explicit_args.insert(explicit_args.end(), {"--seed", "99"});
  const auto flag = invoke(explicit_args);
  const auto fallback = invoke(args);
  ASSERT_EQ(env.code, kExitOk) << env.err;
  EXPECT_EQ(env.out, flag.out);
  EXPECT_NE(env.out, fallback.out);
  EXPECT_EQ(nlohmann::json::parse(fallback.out).at("meta").at("seed"), 0xC0FFEE);
}

TEST(Cli, ScanFitPipelineThroughFile) {
  const auto path = std::filesystem::temp_directory_path() / "lehmer_cli_scan.csv";
  auto r = invoke({"parity", "--family", "prime", "--q-min", "1000", "--q-max", "5000", "--k", "1",
                   "--format", "csv", "--out", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  r = invoke({"fit", "--in", path.string(), "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto fit = nlohmann::json::parse(r.out);
  EXPECT_GT(fit.at("n_points").get<int>(), 100);
  EXPECT_LT(fit.at("slope").get<double>(), 1.0);
  std::filesystem::remove(path);
}

TEST(Cli, ExpsumAndParityPretty) {
  auto r = invoke({"expsum", "--q", "5", "--k", "1,-1", "--lambda", "1,1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("0.38196601125"), std::string::npos) << r.out;
  r = invoke({"parity", "--q", "5", "--k", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("same parity   2"), std::string::npos) << r.out;
}

TEST(Cli, HelpExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("leading minus"), std::string::npos);
}

}  // namespace
}  // namespace lehmer::cli
