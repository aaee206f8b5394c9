#include "bimmdf/io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = 0;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(BIMMDF_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
  r.status = pclose(pipe);
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bimmdf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }

  fs::path dir_;
};

const char* kSpec = R"({
  "rho": 0.5, "P": [[1, 0.2], [0.3, 0.8]],
  "Pi_r": [[1, 0], [0, 1], [0.5, 0.5], [0.2, 0.8], [1, 0]],
  "Pi_c": [[1, 0], [0, 1], [0.3, 0.7], [0, 1]],
  "distribution": {"name": "poisson"}})";

}  // namespace

TEST_F(Cli, SampleFitEvalOnExpectation) {
  write("spec.json", kSpec);
  auto r = run("sample --spec " + path("spec.json") + " --seed 3 --out " + path("a.csv") +
               " --omega-out " + path("omega.csv"));
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(bimmdf::io::load_csv(path("a.csv")).rows(), 5);

  r = run("fit " + path("omega.csv") + " -k 2 --prefix " + path("fit_"));
  ASSERT_EQ(r.status, 0) << r.out;
  const auto summary = bimmdf::io::json::parse(r.out);
  EXPECT_EQ(summary.at("K"), 2);
  EXPECT_EQ(summary.at("pure_rows").size(), 2u);

  const auto spec = bimmdf::io::json::parse(kSpec);
  bimmdf::io::save_csv(path("truth_r.csv"), bimmdf::io::matrix_from_json(spec.at("Pi_r"), "Pi_r"));
  bimmdf::io::save_csv(path("truth_c.csv"), bimmdf::io::matrix_from_json(spec.at("Pi_c"), "Pi_c"));
  r = run("eval --estimate-r " + path("fit_Pi_r.csv") + " --truth-r " + path("truth_r.csv") +
          " --estimate-c " + path("fit_Pi_c.csv") + " --truth-c " + path("truth_c.csv"));
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_LE(bimmdf::io::json::parse(r.out).at("error_rate").get<double>(), 1e-8);
}

TEST_F(Cli, SampleIsSeedDeterministic) {
  write("spec.json", kSpec);
  ASSERT_EQ(run("sample --spec " + path("spec.json") + " --seed 9 --out " + path("x.csv")).status, 0);
  ASSERT_EQ(run("sample --spec " + path("spec.json") + " --seed 9 --out " + path("y.csv")).status, 0);
  EXPECT_EQ(slurp(path("x.csv")), slurp(path("y.csv")));
}

TEST_F(Cli, EstimateK) {
  write("spec.json", kSpec);
  ASSERT_EQ(run("sample --spec " + path("spec.json") + " --out " + path("a.csv") + " --omega-out " +
                path("omega.csv"))
                .status,
            0);
  const auto r = run("estimate-k " + path("omega.csv") + " --k-max 3");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out.rfind("index,singular_value\n", 0), 0u);
  EXPECT_NE(r.out.find("ratio,2"), std::string::npos);
}

TEST_F(Cli, SweepOutputIsIndependentOfThreads) {
  const std::string base = "sweep --scenario setup2 --seed 7 --replicates 20 --out ";
  ASSERT_EQ(run(base + path("one.csv") + " --threads 1").status, 0);
  ASSERT_EQ(run(base + path("four.csv") + " --threads 4").status, 0);
  const auto text = slurp(path("one.csv"));
  EXPECT_EQ(text, slurp(path("four.csv")));
  EXPECT_EQ(text.rfind("scenario,rho,mean_error,std_error,replicates,skipped,seed\nsetup2,60,", 0), 0u);
}

TEST_F(Cli, SweepFromConfig) {
  write("plan.json", R"({"scenario": "sim1a", "grid": [1.0], "replicates": 2, "master_seed": 1})");
  const auto r = run("sweep --config " + path("plan.json"));
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("sim1a,1,"), std::string::npos);
}

TEST_F(Cli, Ingest) {
  write("net.tsv", "% comment\na b 1\nb c -1\nc a 1\n");
  const auto r = run("ingest " + path("net.tsv") + " --out " + path("dense.csv"));
  ASSERT_EQ(r.status, 0) << r.out;
  const auto summary = bimmdf::io::json::parse(r.out);
  EXPECT_EQ(summary.at("n"), 3);
  EXPECT_EQ(summary.at("edges"), 3);
  EXPECT_EQ(summary.at("min_weight"), -1.0);
  EXPECT_EQ(bimmdf::io::load_csv(path("dense.csv"))(1, 2), -1.0);
}

TEST_F(Cli, ErrorsExitNonZero) {
  auto r = run("sweep --scenario sim9x");
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.out.find("error:"), std::string::npos);
  write("dup.tsv", "a b 1\na b 1\n");
  EXPECT_NE(run("ingest " + path("dup.tsv")).status, 0);
  EXPECT_EQ(run("ingest " + path("dup.tsv") + " --sum-duplicates").status, 0);
  EXPECT_NE(run("fit " + path("missing.csv") + " -k 2").status, 0);
}
