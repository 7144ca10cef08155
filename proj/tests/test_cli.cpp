#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code;
  std::string out;
};

Invocation run(const std::string& args) {
  const std::string cmd = std::string(SIBSON_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write_file(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "sibson_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p.string();
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

const std::string kBsc14 = R"({"pxy": [[0.375, 0.125], [0.125, 0.375]]})";

}  // namespace

TEST(Cli, SibsonInBits) {
  const std::string f = write_file("bsc14.json", kBsc14);
  const Invocation r = run("measure sibson --joint " + f + " --alpha 2 --base 2");
  ASSERT_EQ(r.code, 0);
  const auto t = csv(r.out);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0][0], "alpha");
  EXPECT_NEAR(std::stod(t[1][1]), std::log2(1.25), 1e-15);
}

TEST(Cli, BaseTwoIsRescaledBaseE) {
  const std::string f = write_file("bsc14.json", kBsc14);
  const auto e = csv(run("measure sibson --joint " + f + " --sweep 0.5:4:5 --limits 1,inf").out);
  const auto b = csv(run("--base 2 measure sibson --joint " + f + " --sweep 0.5:4:5 --limits 1,inf").out);
  ASSERT_EQ(e.size(), b.size());
  ASSERT_EQ(e.size(), 8u);
  for (std::size_t i = 1; i < e.size(); ++i) {
    EXPECT_EQ(e[i][0], b[i][0]);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", std::stod(e[i][1]) / std::log(2.0));
    EXPECT_EQ(b[i][1], buf);
  }
}

TEST(Cli, BecExample) {
  const Invocation r = run("example bec --delta 0.25 --sweep 0.1:10:100 --limits 0,1,inf");
  ASSERT_EQ(r.code, 0);
  const auto t = csv(r.out);
  ASSERT_EQ(t.size(), 103u);  // header, 100 points (1 among them), limits 0, inf
  for (std::size_t i = 1; i < t.size(); ++i) {
    EXPECT_NEAR(std::stod(t[i][1]), std::stod(t[i][2]), 1e-10);
    EXPECT_NEAR(std::stod(t[i][3]), std::stod(t[i][4]), 1e-10);
  }
  EXPECT_EQ(t.back()[0], "inf");
  EXPECT_NEAR(std::stod(t.back()[1]), std::log(1.75), 1e-15);
}

TEST(Cli, FanoSweep) {
  const std::string f = write_file("bsc3.json", [] {
    // Three uses of BSC(0.3) on a uniform three-bit input.
    std::ostringstream os;
    os << R"({"pxy": [)";
    for (int x = 0; x < 8; ++x) {
      os << (x ? "," : "") << "[";
      for (int y = 0; y < 8; ++y) {
        const int d = __builtin_popcount(unsigned(x ^ y));
        os << (y ? "," : "") << std::pow(0.3, d) * std::pow(0.7, 3 - d) / 8;
      }
      os << "]";
    }
    os << "]}";
    return os.str();
  }());
  const Invocation r = run("fano --joint " + f + " --alpha-sweep 1.1:10:50");
  ASSERT_EQ(r.code, 0);
  const auto t = csv(r.out);
  ASSERT_EQ(t.size(), 51u);
  EXPECT_EQ(t[0][1], "fano_like");
  for (std::size_t i = 1; i < t.size(); ++i) {
    EXPECT_NEAR(std::stod(t[i][5]), 0.343, 1e-12);
    for (int c = 1; c <= 3; ++c) EXPECT_GE(std::stod(t[i][std::size_t(c)]), 0.343 - 1e-12);
  }
  EXPECT_EQ(run("bound fano --joint " + f + " --alpha-sweep 1.1:10:50").out, r.out);
}

TEST(Cli, DsbsExample) {
  const auto t = csv(run("example dsbs --p 0.25").out);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_NEAR(std::stod(t[1][1]), 0.75, 1e-15);
  EXPECT_NEAR(std::stod(t[1][2]), 0.75, 1e-14);
}

TEST(Cli, CapacityAndOutputFile) {
  const std::string ch = write_file("bsc.json", R"({"pygx": [[0.75, 0.25], [0.25, 0.75]]})");
  const std::string out = (fs::temp_directory_path() / "sibson_cli_tests" / "cap.csv").string();
  ASSERT_EQ(run("--out " + out + " capacity sibson --channel " + ch + " --alpha 2").code, 0);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto t = csv(ss.str());
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0][3], "iterations");
  EXPECT_NEAR(std::stod(t[1][1]), std::log(1.25), 1e-10);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("measure sibson --joint /nonexistent.json --alpha 2").code, 1);
  EXPECT_EQ(run("measure sibson --joint " + write_file("bad.json", "{oops") + " --alpha 2").code, 1);
  EXPECT_EQ(run("measure sibson --joint " + write_file("neg.json", R"({"pxy": [[0.7, 0.2]]})") + " --alpha 2").code, 1);
  EXPECT_EQ(run("example nope").code, 1);
  EXPECT_EQ(run("measure sibson --bogus-flag").code, 1);
  EXPECT_EQ(run("variational estimate --joint " + write_file("bsc14.json", kBsc14) + " --alpha 2 --steps 2").code, 2);
}

TEST(Cli, CheckSuites) {
  const Invocation r = run("--threads 4 check ordering --instances 50");
  EXPECT_EQ(r.code, 0);
  const auto t = csv(r.out);
  ASSERT_EQ(t.size(), 5u);
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_EQ(t[i][2], "0");
}
