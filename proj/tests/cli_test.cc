#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>
#include <string>

#include <gtest/gtest.h>
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into a file so stdout stays clean.
CliRun Cli(const std::string& args, const fs::path& err_file = "/dev/null") {
  const std::string cmd = std::string(PLANAR_POSE_CLI) + " " + args + " 2>" + err_file.string();
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("planar_pose_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, SolveExactForwardScene) {
  const CliRun synth = Cli("synth --points 40 --seed 3 --rotation-deg 0");
  ASSERT_EQ(synth.exit_code, 0);
  const fs::path csv = Write("scene.csv", synth.out);
  const CliRun r = Cli("solve " + csv.string());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["alpha_deg"].get<double>(), 0.0, 1e-6);
  EXPECT_NEAR(j["beta_deg"].get<double>(), 90.0, 1e-6);
  EXPECT_EQ(j["essential"].size(), 9u);
  EXPECT_TRUE(j.contains("cost"));
  EXPECT_TRUE(j.contains("candidates_evaluated"));
  EXPECT_TRUE(j.contains("branch"));
}

TEST_F(CliTest, PixelInputWithCalibration) {
  const fs::path calib = dir_ / "calib.json";
  const CliRun synth = Cli("synth --points 40 --seed 4 --rotation-deg 0 --pixels --calib-out " + calib.string());
  ASSERT_EQ(synth.exit_code, 0);
  const fs::path csv = Write("px.csv", synth.out);
  const CliRun r = Cli("solve " + csv.string() + " --calib " + calib.string());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NEAR(json::parse(r.out)["beta_deg"].get<double>(), 90.0, 1e-6);
  EXPECT_EQ(Cli("solve " + csv.string()).exit_code, 2);
}

TEST_F(CliTest, DegenerateInputExitsThree) {
  const fs::path csv = Write("flat.csv", "q1x,q1y,q2x,q2y\n0.1,0,0.2,0\n0.3,0,0.1,0\n-0.2,0,0.4,0\n");
  const fs::path err = dir_ / "err.json";
  const CliRun r = Cli("solve " + csv.string(), err);
  EXPECT_EQ(r.exit_code, 3);
  const json e = json::parse(ReadFile(err));
  EXPECT_EQ(e["error"]["code"], "degenerate_configuration");
}

TEST_F(CliTest, ParseErrorsExitTwo) {
  const fs::path csv = Write("bad.csv", "q1x,q1y,q2x,q2y\n1,2,x,4\n");
  EXPECT_EQ(Cli("solve " + csv.string()).exit_code, 2);
  EXPECT_EQ(Cli("solve " + (dir_ / "missing.csv").string()).exit_code, 2);
  EXPECT_EQ(Cli("solve " + csv.string() + " --method nope").exit_code, 2);
  EXPECT_EQ(Cli("bench nope").exit_code, 2);
}

TEST_F(CliTest, OptimalCostNotAboveLinear) {
  const CliRun synth = Cli("synth --points 60 --sigma 1 --seed 5");
  const fs::path csv = Write("noisy.csv", synth.out);
  const CliRun opt = Cli("solve " + csv.string() + " --method optimal");
  const CliRun lin = Cli("solve " + csv.string() + " --method linear");
  ASSERT_EQ(opt.exit_code, 0);
  ASSERT_EQ(lin.exit_code, 0);
  EXPECT_LE(json::parse(opt.out)["cost"].get<double>(), json::parse(lin.out)["cost"].get<double>());
}

TEST_F(CliTest, RansacReportsInliers) {
  const CliRun synth = Cli("synth --points 150 --sigma 0.5 --outliers 0.2 --seed 6");
  const fs::path csv = Write("out.csv", synth.out);
  const CliRun r = Cli("solve " + csv.string() + " --method ransac --seed 1 --threshold 1.5e-6");
  ASSERT_EQ(r.exit_code, 0);
  const json j = json::parse(r.out);
  EXPECT_GE(j["inliers"].get<int>(), 100);
  EXPECT_EQ(j["inlier_indices"].size(), j["inliers"].get<size_t>());
}

TEST_F(CliTest, RobustFailureExitsFour) {
  const fs::path csv = Write("two.csv", "q1x,q1y,q2x,q2y\n0.1,0.2,0.3,0.1\n-0.2,0.1,0.1,-0.3\n");
  EXPECT_EQ(Cli("solve " + csv.string() + " --method ransac").exit_code, 4);
}

TEST_F(CliTest, BenchIsDeterministic) {
  const CliRun a = Cli("bench stability --trials 200 --seed 7");
  const CliRun b = Cli("bench stability --trials 200 --seed 7");
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "log10_err_lo,log10_err_hi,count");
}

TEST_F(CliTest, BenchNoiseAndHillGrids) {
  const CliRun noise = Cli("bench noise --trials 2 --points 10 --sigmas 0.5,1,2 --seed 1");
  ASSERT_EQ(noise.exit_code, 0);
  int lines = 0;
  for (char c : noise.out) lines += c == '\n';
  EXPECT_EQ(lines, 1 + 3 * 2);
  EXPECT_EQ(noise.out.rfind("method,N,sigma,steepness,trial_count", 0), 0u);

  const CliRun hill = Cli("bench hill --trials 2 --points 10 --steepness 1,3 --seed 1");
  ASSERT_EQ(hill.exit_code, 0);
  EXPECT_NE(hill.out.find(",10,0.5,3,2,"), std::string::npos) << hill.out;
}

TEST_F(CliTest, TrajectoryWithGroundTruth) {
  std::string pairs = "pair";
  for (int k = 0; k < 2; ++k) {
    const CliRun s = Cli("synth --points 50 --seed " + std::to_string(10 + k) + " --rotation-deg 10");
    ASSERT_EQ(s.exit_code, 0);
    std::istringstream in(s.out);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (!header) {
        if (k == 0) pairs = "pair," + line + "\n";
        header = true;
        continue;
      }
      pairs += "p" + std::to_string(k) + "," + line + "\n";
    }
  }
  const fs::path csv = Write("pairs.csv", pairs);
  const fs::path gt = Write("gt.csv", "pair,alpha_deg,beta_deg\np0,10,90\np1,10,90\n");
  const fs::path cdf = dir_ / "cdf.csv";
  const CliRun r = Cli("trajectory " + csv.string() + " --gt " + gt.string() + " --cdf-out " + cdf.string());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const auto at = r.out.find("p1,ok,");
  ASSERT_NE(at, std::string::npos) << r.out;
  std::vector<std::string> fields;
  std::stringstream row(r.out.substr(at, r.out.find('\n', at) - at));
  for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
  ASSERT_GE(fields.size(), 9u);
  // Heading after two 10 degree turns.
  EXPECT_NEAR(std::stod(fields[5]), 20.0, 1e-6);
  EXPECT_LT(std::stod(fields[8]), 1e-6);
  EXPECT_EQ(ReadFile(cdf).rfind("kind,error_deg,cdf\n", 0), 0u);
}

}  // namespace
