#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(CUBIC_BDP_CLI_PATH) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) {
    return r;
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) {
    r.out.append(buf.data(), n);
  }
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(Cli, EverySubcommandRuns) {
  for (const std::string args :
       {"rates --family p1 --c 1 --nmax 5", "polys --family p2 --c 0.5 --z 1+2i --nmax 4",
        "genfun --family p1 --c 1 --z 0,1+1i", "matrix --family p2 --c 0.5 --z 1+2i",
        "coeffs --family p1 --c 1 --nmax 20 --element C", "growth --family p1 --c 1 --nmax 600 --element D",
        "spectrum --family p1 --c 0.1 --xmax 1e6",
        "transition --family p1 --c 1 --xmax 2e6 --t 0.001,0.01 --states 2"}) {
    const Outcome r = run(args);
    EXPECT_EQ(r.code, 0) << args;
    EXPECT_FALSE(r.out.empty()) << args;
  }
}

TEST(Cli, RatesCsvContent) {
  const Outcome r = run("rates --family p1 --c 1 --nmax 2");
  ASSERT_EQ(r.code, 0);
  std::istringstream is(r.out);
  std::string header;
  std::getline(is, header);
  EXPECT_NE(header.find("lambda"), std::string::npos);
  std::string row;
  std::getline(is, row);
  EXPECT_EQ(row.rfind("0,", 0), 0u);
}

TEST(Cli, Deterministic) {
  const std::string args = "matrix --family p1 --c 1.3 --z 2-1i,-5";
  EXPECT_EQ(run(args).out, run(args).out);
  const std::string json = "coeffs --family p2 --c 0.4 --nmax 30 --format json";
  EXPECT_EQ(run(json).out, run(json).out);
}

TEST(Cli, MatrixJsonElements) {
  const Outcome r = run("matrix --family p2 --c 0.5 --z 1+2i --format json");
  ASSERT_EQ(r.code, 0);
  for (const char* key : {"A_mod", "B_mod", "\"C\"", "\"D\"", "\"A\"", "\"B\""}) {
    EXPECT_NE(r.out.find(key), std::string::npos) << key;
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("rates --bogus").code, 2);
  EXPECT_EQ(run("rates --family p3").code, 2);
  EXPECT_EQ(run("rates --c -1").code, 2);
  EXPECT_EQ(run("polys --z 1+").code, 2);
  EXPECT_EQ(run("matrix --format xml").code, 2);
}

TEST(Cli, VerifyPasses) {
  const Outcome r = run("verify");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find(",false"), std::string::npos);
}

TEST(Cli, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "cubic_bdp_cli_test.csv";
  std::filesystem::remove(path);
  const Outcome r = run("rates --family p2 --c 2 --nmax 3 --out " + path.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), run("rates --family p2 --c 2 --nmax 3").out);
  std::filesystem::remove(path);
}
