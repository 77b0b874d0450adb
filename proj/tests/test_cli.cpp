#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scalesense/analysis_io.hpp"
#include "scalesense/cli.hpp"

namespace fs = std::filesystem;
using scalesense::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("scalesense_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, AnalyzeWritesFullReport) {
  std::ofstream(path("cohort.csv")) << "score,outcome\n0.1,0\n0.4,0\n0.2,0\n0.9,1\n0.7,1\n0.3,1\n0.8,0\n1.2,1\n";
  const auto r = invoke({"analyze", "--input", path("cohort.csv"), "--k", "4", "--criterion", "youden", "--out",
                         path("report.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
  const auto doc = scalesense::parse_report_json(slurp(path("report.json")));
  const auto& result = std::get<scalesense::AnalysisResult>(doc.payload);
  EXPECT_EQ(result.partition.k(), 4u);
  EXPECT_EQ(result.pmf1.k(), 4u);
  EXPECT_EQ(result.pmf0.k(), 4u);
  EXPECT_EQ(result.roc.size(), 5u);
  EXPECT_GE(result.summary.c, 1u);
  EXPECT_FALSE(doc.provenance.seed.has_value());
}

TEST_F(CliTest, AnalyzeDomainErrorsExitOne) {
  std::ofstream(path("bad.csv")) << "score,outcome\n1,0\n2,1\n3,2\n";
  auto r = invoke({"analyze", "--input", path("bad.csv"), "--k", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("parse-error"), std::string::npos);
  EXPECT_NE(r.err.find("row 3"), std::string::npos);

  std::ofstream(path("ok.csv")) << "score,outcome\n1,0\n2,1\n";
  r = invoke({"analyze", "--input", path("ok.csv"), "--k", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("insufficient-samples"), std::string::npos);

  r = invoke({"analyze", "--input", path("ok.csv"), "--k", "2", "--score-column", "risk"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("schema-error"), std::string::npos);
}

TEST_F(CliTest, SimulateThenAnalyze) {
  auto r = invoke({"simulate", "--seed", "9", "--n", "300", "--out", path("sim.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto first = slurp(path("sim.csv"));
  r = invoke({"simulate", "--seed", "9", "--n", "300", "--out", path("sim.csv")});
  EXPECT_EQ(slurp(path("sim.csv")), first);
  EXPECT_EQ(scalesense::load_cohort(path("sim.csv")), scalesense::generate_cohort({300, 0.3, 0, 1, 1, 9}));

  r = invoke({"analyze", "--input", path("sim.csv"), "--k", "5", "--out", path("a.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("a.csv")).substr(0, 37), "k,mean_se,sd_se,mean_sp,sd_sp,mean_c\n");
}

TEST_F(CliTest, SweepIsDeterministic) {
  const std::vector<std::string> args{"sweep", "--seed", "42", "--n", "500", "--prevalence", "0.3", "--mu0", "0",
                                      "--mu1", "1", "--sigma", "1", "--k-list", "2,3,4,10", "--reps", "20", "--out"};
  auto a_args = args, b_args = args;
  a_args.push_back(path("a.csv"));
  b_args.push_back(path("b.csv"));
  const auto a = invoke(a_args);
  const auto b = invoke(b_args);
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  std::istringstream lines(slurp(path("a.csv")));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 5);

  auto json_args = args;
  json_args.push_back(path("a.json"));
  ASSERT_EQ(invoke(json_args).code, 0);
  json_args.back() = path("b.json");
  ASSERT_EQ(invoke(json_args).code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  const auto doc = scalesense::parse_report_json(slurp(path("a.json")));
  EXPECT_EQ(doc.provenance.seed, 42u);
}

TEST_F(CliTest, SweepRequiresSeed) {
  const auto r = invoke({"sweep", "--out", path("x.csv")});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, SweepDomainErrors) {
  const auto r = invoke({"sweep", "--seed", "1", "--n", "50", "--k-list", "2,60", "--reps", "2", "--out", path("x.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("invalid-class-count"), std::string::npos);
  const auto bad = invoke({"sweep", "--seed", "1", "--mu0", "1", "--mu1", "1", "--out", path("x.csv")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("spec-validation-error"), std::string::npos);
}

TEST(Cli, RefineCheckVerdicts) {
  auto r = invoke({"refine-check", "--base", "0.6,0.4", "--deltas", "0.1,0.2", "--c", "1", "--c-prime", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("assumption_failed", 0), 0u) << r.out;

  r = invoke({"refine-check", "--base", "0.4,0.6", "--deltas", "0.1,0", "--c", "2", "--c-prime", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("holds", 0), 0u) << r.out;

  r = invoke({"refine-check", "--base", "0.2,0.8", "--deltas", "-0.3,0.5", "--c", "2", "--c-prime", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("invalid_deltas", 0), 0u) << r.out;

  r = invoke({"refine-check", "--base", "0.6,0.4", "--deltas", "0.7,0", "--c", "1", "--c-prime", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("negative-probability"), std::string::npos);
}

TEST(Cli, Counterexample) {
  auto r = invoke({"counterexample", "--k", "2", "--grid-step", "0.1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("none", 0), 0u) << r.out;

  r = invoke({"counterexample", "--k", "2", "--grid-step", "0.05", "--allow-negative", "--no-assumption"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("found", 0), 0u) << r.out;

  r = invoke({"counterexample", "--grid-step", "0.3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("empty-grid"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"refine-check", "--base", "1", "--bogus"}).code, 2);
  EXPECT_EQ(invoke({"analyze", "--input", "/definitely/not/here.csv", "--k", "2"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--seed", "1", "--criterion", "auc", "--out", "x.csv"}).code, 2);
}

TEST(Cli, HelpOnEverySubcommand) {
  const std::map<std::string, std::vector<std::string>> flags{
      {"analyze", {"--input", "--k", "--criterion", "--out", "--format", "--score-column", "--outcome-column",
                   "--delimiter", "--no-header", "--timestamp"}},
      {"simulate", {"--seed", "--n", "--prevalence", "--mu0", "--mu1", "--sigma", "--out"}},
      {"sweep", {"--seed", "--n", "--prevalence", "--mu0", "--mu1", "--sigma", "--k-list", "--reps", "--criterion",
                 "--out", "--format", "--threads", "--timestamp"}},
      {"refine-check", {"--base", "--deltas", "--c", "--c-prime"}},
      {"counterexample", {"--k", "--grid-step", "--allow-negative", "--no-assumption"}}};
  for (const auto& [sub, names] : flags) {
    const auto r = invoke({sub, "--help"});
    EXPECT_EQ(r.code, 0) << sub;
    for (const auto& name : names) {
      EXPECT_NE(r.out.find(name), std::string::npos) << sub << " " << name;
    }
  }
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, BinaryExitCodes) {
  const std::string tool = SCALESENSE_TOOL_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((tool + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  EXPECT_EQ(status("refine-check --base 0.6,0.4 --deltas 0.1,0.2 --c 1 --c-prime 2"), 1);
  EXPECT_EQ(status("refine-check --help"), 0);
  EXPECT_EQ(status("nope"), 2);
}
