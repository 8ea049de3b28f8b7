#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(CVQT_CLI_PATH) + " " + args + " 2>/dev/null";
  Result res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return res;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) res.out += buf.data();
  const int status = pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace

TEST(Cli, PointPrintsOneCsvRow) {
  const Result r = run("point --family TMSV --spec 1,0,1,0 --r 0.3867 --T 0.95");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("r,T,F,lambda_min,p_ng,success,unsqueezed,region,flags\n0.3867,0.95,"), std::string::npos);
  EXPECT_NE(r.out.find(",1,1,1,\n"), std::string::npos);
}

TEST(Cli, PointJsonAndPassiveSeed) {
  const Result r = run("point --spec 0,1,0,1 --r 0.5 --T 0.9 --format json --seed 4");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"passive_seed\": \"4\""), std::string::npos);
  EXPECT_NE(r.out.find("\"rows\""), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("point --r 0.5").code, 1);
  EXPECT_EQ(run("point --r 0.5 --T 1.5").code, 1);
  EXPECT_EQ(run("point --family cat --r 0.5 --T 0.9").code, 1);
  EXPECT_EQ(run("sweep --r 0:1").code, 1);
  // Subtraction from the vacuum has zero probability.
  EXPECT_EQ(run("point --spec 0,1,0,1 --r 0 --T 0.9").code, 2);
  EXPECT_EQ(run("verify --alpha-power 1 --grid 6").code, 0);
  EXPECT_EQ(run("verify --grid 6").code, 3);
}

TEST(Cli, SweepWritesFileDeterministically) {
  const auto dir = std::filesystem::temp_directory_path() / "cvqt_cli_test";
  std::filesystem::create_directories(dir);
  const std::string a = (dir / "a.csv").string();
  const std::string b = (dir / "b.csv").string();
  const std::string args = "sweep --family TMST --kappa 1 --spec 1,1,1,1 --r 0.05:1.5:5 --T 0.5:0.99:4 --out ";
  EXPECT_EQ(run(args + a).code, 0);
  EXPECT_EQ(run(args + b).code, 0);
  const auto slurp = [](const std::string& p) {
    std::ifstream f(p);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  };
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_NE(slurp(a).find("# family: TMST\n# spec: 1,1,1,1\n# kappa: 1\n"), std::string::npos);
  EXPECT_EQ(run("sweep --r 0.1:1:3 --T 0.5:0.9:3 --out " + (dir / "no" / "x.csv").string()).code, 1);
  std::filesystem::remove_all(dir);
}

TEST(Cli, OracleCheckTmst) {
  const Result r = run("oracle-check --family TMST");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("TMST,0.3,1,0.9,\"0,1,0,1\""), std::string::npos);
}
