#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;  // stdout and stderr together
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(CKM_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 512> buf{};
  while (fgets(buf.data(), buf.size(), pipe) != nullptr) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ckm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, GenSolveExactCertify) {
  ASSERT_EQ(run_cli("gen --out " + path("i.json") +
                    " --facilities 8 --clients 10 --capacity 4 --k 3 --seed 4").code, 0);
  ASSERT_EQ(run_cli("solve --instance " + path("i.json") + " --out " + path("s.json") +
                    " --p 2 --epsilon 0.01 --seed 4").code, 0);
  ASSERT_EQ(run_cli("exact --instance " + path("i.json") + " --out " + path("o.json")).code, 0);
  const Result cert = run_cli("certify --instance " + path("i.json") + " --solution " + path("s.json") +
                              " --optimal " + path("o.json") + " --report " + path("r.json"));
  EXPECT_EQ(cert.code, 0) << cert.out;
  EXPECT_NE(cert.out.find("certified: true"), std::string::npos);
  EXPECT_NE(slurp(path("r.json")).find("\"certified\": true"), std::string::npos);
}

TEST_F(Cli, CertificationFailureExitsThree) {
  // Every client sits on facility 0, which the forged solution leaves closed.
  std::ofstream(path("i.json")) << R"({"version":1,"facilities":4,"clients":4,"k":1,"capacity":4,
    "metric":false,"costs":[[0,0,0,0],[100,100,100,100],[100,100,100,100],[100,100,100,100]]})";
  std::ofstream(path("s.json")) << R"({"version":1,"open":[1,2,3],"assign":[1,1,1,1],"cost":400})";
  std::ofstream(path("o.json")) << R"({"version":1,"open":[0],"assign":[0,0,0,0],"cost":0})";
  const Result r = run_cli("certify --instance " + path("i.json") + " --solution " + path("s.json") +
                           " --optimal " + path("o.json") + " --report " + path("r.json"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("certified: false"), std::string::npos);
}

TEST_F(Cli, ValidationErrorsExitOne) {
  ASSERT_EQ(run_cli("gen --out " + path("i.json")).code, 0);
  EXPECT_EQ(run_cli("solve --instance " + path("i.json") + " --out " + path("s.json") + " --p 0").code, 1);
  EXPECT_EQ(run_cli("solve --instance " + path("i.json") + " --out " + path("s.json") +
                    " --epsilon nope").code, 1);
  EXPECT_EQ(run_cli("solve --instance " + path("missing.json") + " --out " + path("s.json")).code, 1);
  EXPECT_EQ(run_cli("frobnicate").code, 1);
  EXPECT_EQ(run_cli("").code, 1);
}

TEST_F(Cli, OracleBudgetExitsTwo) {
  ASSERT_EQ(run_cli("gen --out " + path("i.json") +
                    " --family uniform-random-matrix --facilities 40 --clients 30 --capacity 10 --k 10 --seed 1").code, 0);
  const Result r = run_cli("exact --instance " + path("i.json") + " --out " + path("o.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("oracle budget"), std::string::npos);
}

TEST_F(Cli, InfeasibleGenerationExitsTwo) {
  EXPECT_EQ(run_cli("gen --out " + path("i.json") + " --facilities 4 --clients 50 --capacity 2 --k 1").code, 2);
}

TEST_F(Cli, ByteIdenticalReruns) {
  for (const char* tag : {"a", "b"}) {
    const std::string t = tag;
    ASSERT_EQ(run_cli("gen --out " + path("i" + t + ".json") + " --family clustered --seed 12").code, 0);
    ASSERT_EQ(run_cli("solve --instance " + path("i" + t + ".json") + " --out " + path("s" + t + ".json") +
                      " --seed 12").code, 0);
  }
  EXPECT_EQ(slurp(path("ia.json")), slurp(path("ib.json")));
  EXPECT_EQ(slurp(path("sa.json")), slurp(path("sb.json")));
}

TEST_F(Cli, PenaltyRoundTrip) {
  ASSERT_EQ(run_cli("gen --out " + path("i.json") + " --penalty-min 0 --penalty-max 50 --seed 3").code, 0);
  EXPECT_EQ(run_cli("solve --instance " + path("i.json") + " --out " + path("s.json") + " --penalties").code, 0);
  EXPECT_EQ(run_cli("exact --instance " + path("i.json") + " --out " + path("o.json") + " --penalties").code, 0);
  EXPECT_EQ(run_cli("gen --out " + path("j.json") + " --penalty-min 5").code, 1);
}

TEST_F(Cli, BenchWritesCsv) {
  const Result r = run_cli("bench --suite small --csv " + path("b.csv") + " --p 2 --p 3");
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string csv = slurp(path("b.csv"));
  EXPECT_EQ(csv.rfind("instance_id,seed,p,epsilon,local_cost,exact_cost,ratio,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 24 * 2);
}

}  // namespace
