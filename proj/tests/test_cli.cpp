#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "screlax/cli.hpp"

using namespace screlax;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "screlax");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("screlax_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Cli, BodySingleton) {
  const auto r = run({"body", "--nu", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "# degenerate: P_2 is the single point (0,1,0)\nx1,x2,x3,sheet\n0,1,0,boundary\n");
}

TEST(Cli, BodyCoarseNu4) {
  const auto r = run({"body", "--nu", "4", "--step", "0.25"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::size_t lo = 0, hi = 0, bd = 0;
  while (std::getline(in, line)) {
    const auto cells = io::split(line, ',');
    ASSERT_EQ(cells.size(), 4u);
    const BodyPoint p{io::parse_double(cells[0]), io::parse_double(cells[1]), io::parse_double(cells[2])};
    EXPECT_TRUE(contains(ParameterNu(4), p));
    lo += cells[3] == "lo";
    hi += cells[3] == "hi";
    bd += cells[3] == "boundary";
  }
  // lattice nodes inside the region, counted by rejection over the 0.25 lattice
  std::size_t oracle = 0;
  for (int j = 0; j <= 16; ++j)
    for (int i = -8; i <= 8; ++i) {
      const double x1 = i * 0.25, x2 = j * 0.25, t = std::abs(x1);
      if (t <= 0.5 && x2 >= x1 * x1 + (1 + t) * (1 + t) / 3 - 1e-9 && x2 <= x1 * x1 + 3 * (1 - t) * (1 - t) + 1e-9)
        ++oracle;
    }
  EXPECT_EQ(lo, oracle);
  EXPECT_EQ(hi, oracle);
  EXPECT_EQ(bd, 38u);
}

TEST(Cli, BodyFormats) {
  const auto j = run({"body", "--nu", "3", "--step", "0.2", "--format", "json"});
  ASSERT_EQ(j.code, 0);
  const auto doc = io::Json::parse(j.out);
  EXPECT_EQ(doc["nu"].get<double>(), 3.0);
  EXPECT_EQ(doc.begin().key(), "nu");
  for (const char* nu : {"2.5", "3", "4"}) {
    const auto s = run({"body", "--nu", nu, "--format", "svg"});
    ASSERT_EQ(s.code, 0);
    EXPECT_EQ(s.out.rfind("<svg", 0), 0u);
    EXPECT_NE(s.out.find("upper sheet"), std::string::npos);
  }
  EXPECT_EQ(run({"body", "--nu", "3", "--format", "off"}).code, cli::kUsage);
}

TEST(Cli, Projection) {
  const auto single = run({"projection", "--nu", "2"});
  ASSERT_EQ(single.code, 0);
  EXPECT_EQ(single.out, "series,x1,x2\ncorner,0,1\n");
  const auto four = run({"projection", "--nu", "4"});
  ASSERT_EQ(four.code, 0);
  for (const char* row : {"corner,0,3\n", "corner,-0.5,1\n", "corner,0.5,1\n"}) {
    EXPECT_NE(four.out.find(row), std::string::npos) << row;
  }
  const auto overlay = run({"projection", "--nu", "5.1", "--overlay", "--format", "svg"});
  ASSERT_EQ(overlay.code, 0);
  EXPECT_NE(overlay.out.find("bound arc upper-left"), std::string::npos);
  EXPECT_NE(overlay.out.find("nu' = 6.301"), std::string::npos);
}

TEST(Cli, HullOff) {
  const auto r = run({"hull", "--nu", "3", "--step", "0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("OFF\n", 0), 0u);
  std::istringstream in(r.out.substr(4));
  std::size_t v, f, e;
  in >> v >> f >> e;
  EXPECT_EQ(v + f, e + 2);
  EXPECT_EQ(lines(r.out), 2 + v + f);
  const auto j = run({"hull", "--nu", "3", "--step", "0.05", "--format", "json"});
  EXPECT_EQ(io::Json::parse(j.out)["facets"].size(), f);
}

TEST(Cli, SweepTrivial) {
  const auto r = run({"sweep", "--nu-min", "3", "--nu-max", "3.001", "--count", "2", "--step", "0.048"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out), 3u);
  EXPECT_EQ(r.out.rfind("nu,nu_tilde,lower_bound,argmax_x1,argmax_x2\n3,", 0), 0u);
}

TEST(Cli, SweepRowsDominateBound) {
  const auto r = run({"sweep", "--count", "11", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    const auto c = io::split(line, ',');
    EXPECT_GE(io::parse_double(c[1]), io::parse_double(c[2]) - 0.02) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 11);
}

TEST(Cli, SweepPartialExit2) {
  const auto r = run({"sweep", "--nu-min", "2.1", "--nu-max", "3.6", "--count", "2", "--cap", "4", "--step", "0.05"});
  EXPECT_EQ(r.code, cli::kNumeric);
  EXPECT_EQ(r.out.rfind("# partial: nu=3.6", 0), 0u);
  EXPECT_NE(r.err.find("nu=3.6"), std::string::npos);
}

TEST(Cli, ConvergeSummary) {
  const auto r = run({"converge", "--nu-min", "2.5", "--nu-max", "3.5", "--count", "3", "--format", "json",
                      "--out", (fs::temp_directory_path() / "screlax_conv.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("delta_4s=", 0), 0u);
  EXPECT_NE(r.out.find("\ndelta_2s="), std::string::npos);
  const auto doc = io::Json::parse(slurp(fs::temp_directory_path() / "screlax_conv.json"));
  EXPECT_EQ(doc["curves"].size(), 3u);
  fs::remove(fs::temp_directory_path() / "screlax_conv.json");
  fs::remove(fs::temp_directory_path() / "screlax_conv.json.log");
}

TEST(Cli, CheckVerdicts) {
  EXPECT_EQ(run({"check", "--nu", "2", "--barrier", "symmetric-log"}).code, 0);
  const auto ok = run({"check", "--nu", "3", "--barrier", "weighted-log:3"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "kind,x0,x,condition,residual\n");
  const auto bad = run({"check", "--nu", "2.5", "--barrier", "weighted-log"});
  EXPECT_EQ(bad.code, cli::kVerdict);
  std::set<std::string> xs;
  std::istringstream in(bad.out);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto c = io::split(line, ',');
    if (c[0] == "point") xs.insert(c[2]);
  }
  EXPECT_EQ(xs.size(), 99u);
}

TEST(Cli, UsageErrorsNameField) {
  const auto missing = run({"body"});
  EXPECT_EQ(missing.code, cli::kUsage);
  EXPECT_NE(missing.err.find("--nu"), std::string::npos);
  const auto small = run({"body", "--nu", "1.5"});
  EXPECT_EQ(small.code, cli::kUsage);
  EXPECT_NE(small.err.find("--nu"), std::string::npos);
  const auto fmt = run({"sweep", "--format", "off"});
  EXPECT_EQ(fmt.code, cli::kUsage);
  EXPECT_NE(fmt.err.find("--format"), std::string::npos);
  const auto range = run({"sweep", "--nu-min", "4", "--nu-max", "3"});
  EXPECT_EQ(range.code, cli::kUsage);
  EXPECT_NE(range.err.find("--nu-max"), std::string::npos);
  const auto step = run({"sweep", "--step", "0"});
  EXPECT_NE(step.err.find("--step"), std::string::npos);
  EXPECT_EQ(run({"check", "--nu", "3"}).code, cli::kUsage);
  EXPECT_EQ(run({"check", "--nu", "3", "--barrier", "weighted-log:abc"}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"body", "--nu", "x"}).code, cli::kUsage);
}

TEST_F(CliFiles, TabulatedBarrier) {
  const fs::path good = dir_ / "w3.csv";
  {
    std::ofstream f(good);
    f << "x,p,h,w\n";
    const auto o = weighted_log_barrier(ParameterNu(3));
    for (double x : interior_grid(41)) {
      const auto t = o(x);
      f << io::format_double(x) << ',' << io::format_double(t.p) << ',' << io::format_double(t.h) << ','
        << io::format_double(t.w) << '\n';
    }
  }
  EXPECT_EQ(run({"check", "--nu", "3", "--barrier", good.string()}).code, 0);
  EXPECT_EQ(run({"check", "--nu", "2.5", "--barrier", good.string()}).code, cli::kVerdict);

  const fs::path bad = dir_ / "bad.csv";
  std::ofstream(bad) << "x,p,h,w\n0,0,1,0\n0.5,zz,1,0\n";
  const auto r = run({"check", "--nu", "3", "--barrier", bad.string()});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("bad.csv:3:"), std::string::npos) << r.err;

  const auto missing = run({"check", "--nu", "3", "--barrier", (dir_ / "nope.csv").string()});
  EXPECT_EQ(missing.code, cli::kIo);
}

TEST_F(CliFiles, OutputAndSidecar) {
  const fs::path out = dir_ / "body.csv";
  ASSERT_EQ(run({"body", "--nu", "3", "--step", "0.1", "--out", out.string()}).code, 0);
  EXPECT_EQ(slurp(out), run({"body", "--nu", "3", "--step", "0.1"}).out);
  const std::string log = slurp(out.string() + ".log");
  EXPECT_NE(log.find("timestamp="), std::string::npos);
  EXPECT_NE(log.find("command=body"), std::string::npos);
  EXPECT_EQ(slurp(out).find("timestamp"), std::string::npos);

  const auto unwritable = run({"body", "--nu", "3", "--out", (dir_ / "no" / "such" / "dir.csv").string()});
  EXPECT_EQ(unwritable.code, cli::kIo);
}

TEST_F(CliFiles, ConfigFileOverriddenByFlags) {
  const fs::path cfg = dir_ / "run.cfg";
  std::ofstream(cfg) << "# sweep settings\nnu_min = 2.5\nnu-max = 3.5\ncount = 3\nstep = 0.048\nformat = json\n";
  const auto from_file = run({"sweep", "--config", cfg.string()});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  const auto doc = io::Json::parse(from_file.out);
  EXPECT_EQ(doc["points"].size(), 3u);
  EXPECT_EQ(doc["step"].get<double>(), 0.048);
  const auto flags = run({"sweep", "--config", cfg.string(), "--count", "2", "--format", "csv"});
  ASSERT_EQ(flags.code, 0);
  EXPECT_EQ(lines(flags.out), 3u);
  EXPECT_EQ(flags.out.rfind("nu,nu_tilde", 0), 0u);

  std::ofstream(dir_ / "bad.cfg") << "colour = blue\n";
  const auto bad = run({"sweep", "--config", (dir_ / "bad.cfg").string()});
  EXPECT_EQ(bad.code, cli::kUsage);
  EXPECT_NE(bad.err.find("colour"), std::string::npos);
  EXPECT_EQ(run({"sweep", "--config", (dir_ / "absent.cfg").string()}).code, cli::kIo);
}

TEST_F(CliFiles, DeterministicFiles) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"sweep", "--count", "5", "--step", "0.024"},
        std::vector<std::string>{"hull", "--nu", "4", "--format", "json"},
        std::vector<std::string>{"sweep", "--count", "5", "--step", "0.024", "--format", "svg"}}) {
    std::vector<std::string> a = args, b = args;
    a.insert(a.end(), {"--out", (dir_ / "a").string()});
    b.insert(b.end(), {"--out", (dir_ / "b").string()});
    ASSERT_EQ(run(a).code, 0);
    ASSERT_EQ(run(b).code, 0);
    EXPECT_EQ(slurp(dir_ / "a"), slurp(dir_ / "b"));
    EXPECT_FALSE(slurp(dir_ / "a").empty());
  }
}

TEST(CliBinary, ExitCodesPropagate) {
  const std::string cli = SCRELAX_CLI_PATH;
  const auto status = [&](const std::string& args) {
    const int s = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("check --nu 2 --barrier symmetric-log"), 0);
  EXPECT_EQ(status("check --nu 2.5 --barrier weighted-log:3"), 1);
  EXPECT_EQ(status("body"), 4);
  EXPECT_EQ(status("body --nu 3 --out /nonexistent/dir/x.csv"), 3);
  EXPECT_EQ(status("--help"), 0);
}
