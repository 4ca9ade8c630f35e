#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bvg/io.hpp"
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string output;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bvg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  CliRun run(const std::string& args) const {
    const std::string log = path("out.txt");
    const std::string cmd = std::string(BVG_CLI_PATH) + " " + args + " > " + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
  }

  nlohmann::json json(const std::string& name) const {
    std::ifstream in(path(name));
    return nlohmann::json::parse(in);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, VersionAndHelpSucceed) {
  const CliRun v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.output.find("bvg "), std::string::npos);
  const CliRun h = run("--help");
  EXPECT_EQ(h.code, 0);
  for (const char* sub : {"synth", "rof", "decompose", "analyze", "gnorm", "classify", "check",
                          "detect-roads"}) {
    EXPECT_NE(h.output.find(sub), std::string::npos) << sub;
  }
}

TEST_F(Cli, UsageErrorsExitWithOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("no-such-command").code, 1);
  EXPECT_EQ(run("synth --kind hexagon -o " + path("x.bvgf")).code, 1);
  EXPECT_EQ(run("synth --kind disk --grid 32x32 --r -1 -o " + path("x.bvgf")).code, 1);
}

TEST_F(Cli, MissingInputExitsWithTwo) {
  const CliRun r = run("analyze -i " + path("absent.bvgf"));
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.output.empty());
}

TEST_F(Cli, NonZeroMeanIsARuntimeFailure) {
  ASSERT_EQ(run("synth --kind disk --r 0.3 --grid 32x32 --domain -1,-1,1,1 -o " + path("d.bvgf")).code, 0);
  EXPECT_EQ(run("gnorm -i " + path("d.bvgf")).code, 3);
  EXPECT_EQ(run("gnorm -i " + path("d.bvgf") + " --subtract-mean --json " + path("g.json")).code, 0);
  const auto j = json("g.json");
  EXPECT_GT(j["estimate"].get<double>(), 0.0);
  EXPECT_LE(j["certified_lower"].get<double>(), j["certified_upper"].get<double>());
}

TEST_F(Cli, AnalyzeReportsNormsAndManifest) {
  ASSERT_EQ(run("synth --kind bump --r 0.1 --grid 48x48 -o " + path("b.bvgf") + " --oracle " +
                path("o.json")).code, 0);
  ASSERT_EQ(run("analyze -i " + path("b.bvgf") + " --subtract-mean --json " + path("a.json")).code, 0);
  const auto j = json("a.json");
  EXPECT_GT(j["tv"].get<double>(), 0.0);
  EXPECT_TRUE(j.contains("manifest"));
  EXPECT_EQ(j["manifest"]["inputs"].size(), 1u);
  EXPECT_TRUE(fs::exists(path("o.json")));
}

TEST_F(Cli, CheckRejectsMismatchedGrids) {
  ASSERT_EQ(run("synth --kind noise --grid 16x16 -o " + path("a.bvgf")).code, 0);
  ASSERT_EQ(run("synth --kind noise --grid 16x18 --domain 0,0,1,1.125 -o " + path("b.bvgf")).code, 0);
  const std::string a = path("a.bvgf"), b = path("b.bvgf");
  EXPECT_EQ(run("check -u " + a + " -v " + a + " -w " + b + " --lambda 1 --mu 1").code, 2);
}

TEST_F(Cli, DecomposeWritesPartsThatSumToTheInput) {
  ASSERT_EQ(run("synth --kind bar --grid 64x64 --thickness 0.05 -o " + path("f.bvgf")).code, 0);
  ASSERT_EQ(run("--quiet decompose -i " + path("f.bvgf") + " --lambda 200 --mu 2 --out-prefix " +
                path("d")).code, 0);
  const bvg::Image f = bvg::read_bvgf(path("f.bvgf"));
  const bvg::Image u = bvg::read_bvgf(path("d_u.bvgf"));
  const bvg::Image v = bvg::read_bvgf(path("d_v.bvgf"));
  const bvg::Image w = bvg::read_bvgf(path("d_w.bvgf"));
  for (std::size_t k = 0; k < f.size(); ++k) EXPECT_NEAR(u[k] + v[k] + w[k], f[k], 1e-12);
  EXPECT_TRUE(fs::exists(path("d_u.pgm")));
  const auto j = json("d_report.json");
  EXPECT_TRUE(j.contains("case_report"));
  EXPECT_TRUE(j.contains("objective"));
}

TEST_F(Cli, DecomposeIsDeterministic) {
  ASSERT_EQ(run("synth --kind texture --grid 64x64 --side 0.5 --frequency 8 -o " + path("t.bvgf")).code, 0);
  for (const char* p : {"a", "b"}) {
    ASSERT_EQ(run("--quiet decompose -i " + path("t.bvgf") + " --lambda 20 --mu 1 --out-prefix " +
                  path(p)).code, 0);
  }
  for (const char* part : {"_u.bvgf", "_v.bvgf", "_w.bvgf"}) {
    EXPECT_EQ(bvg::read_file(path(std::string("a") + part)), bvg::read_file(path(std::string("b") + part)))
        << part;
  }
}

TEST_F(Cli, DetectRoadsWritesSegments) {
  ASSERT_EQ(run("synth --kind bar --grid 64x64 --thickness 0.05 -o " + path("f.bvgf")).code, 0);
  ASSERT_EQ(run("--quiet detect-roads -i " + path("f.bvgf") + " --no-decompose --segments " +
                path("s.json") + " --csv " + path("s.csv") + " --overlay " + path("o.pgm")).code, 0);
  const auto j = json("s.json");
  EXPECT_GE(j["segments"].size(), 1u);
  std::ifstream csv(path("s.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header.rfind("x1,y1,x2,y2", 0), 0u);
  EXPECT_TRUE(fs::exists(path("o.pgm")));
}
