#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "adahuber/cli.hpp"
#include "adahuber/csv_io.hpp"
#include "adahuber/error.hpp"
#include "adahuber/report.hpp"
#include "oracles.hpp"

using namespace adahuber;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("adahuber_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& body = {}) const {
    const std::string p = (path_ / name).string();
    if (!body.empty()) std::ofstream(p) << body;
    return p;
  }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "adahuber");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string field(const std::string& report, const std::string& name) {
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(name + ",", 0) == 0) return line.substr(name.size() + 1);
  return {};
}

}  // namespace

TEST(LoadCsv, Examples) {
  TempDir dir;
  const LoadedDataset l = load_csv(dir.file("a.csv", "y,x1\n1,2\n3,4\n5,6\n"), "y");
  EXPECT_EQ(l.data.n(), 3);
  EXPECT_EQ(l.data.d(), 1);
  EXPECT_EQ(l.data.y(), Eigen::Vector3d(1, 3, 5));
  EXPECT_EQ(l.features, std::vector<std::string>{"x1"});
}

TEST(LoadCsv, MissingResponseNamesColumns) {
  TempDir dir;
  try {
    load_csv(dir.file("a.csv", "a,b\n1,2\n"), "y");
    FAIL();
  } catch (const IoError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("'y'"), std::string::npos) << msg;
    EXPECT_NE(msg.find("available columns: a, b"), std::string::npos) << msg;
  }
}

TEST(LoadCsv, BadCellCitesRowAndColumn) {
  TempDir dir;
  try {
    load_csv(dir.file("a.csv", "y,x1\n1,2\n3,abc\n"), "y");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.column(), "x1");
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
  try {
    load_csv(dir.file("b.csv", "y,x1\n1,\n"), "y");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.column(), "x1");
  }
}

TEST(LoadCsv, DistinctErrors) {
  TempDir dir;
  EXPECT_THROW(load_csv(dir.file("none.csv"), "y"), IoError);
  EXPECT_THROW(load_csv(dir.file("empty.csv", "\n\n"), "y"), IoError);
  EXPECT_THROW(load_csv(dir.file("ragged.csv", "y,x\n1,2,3\n"), "y"), IoError);
}

TEST(LoadCsv, DelimiterAndWhitespace) {
  TempDir dir;
  const LoadedDataset l = load_csv(dir.file("a.tsv", "x1\ty\n 2 \t+1\n4\t3\n"), "y", '\t');
  EXPECT_EQ(l.data.y(), Eigen::Vector2d(1, 3));
  EXPECT_EQ(l.data.design().col(0), Eigen::Vector2d(2, 4));
}

TEST(SaveCsv, RoundTripIsExact) {
  TempDir dir;
  std::mt19937_64 rng(1);
  const Dataset data(oracle::gaussian(rng, 30, 3) * 1e-3, oracle::gaussian(rng, 30) * 1e5);
  const std::string p = dir.file("rt.csv");
  save_csv(p, data, "resp", {"a", "b", "c"});
  const LoadedDataset l = load_csv(p, "resp");
  EXPECT_EQ(l.data.design(), data.design());
  EXPECT_EQ(l.data.y(), data.y());
}

TEST(Report, CsvAndJsonl) {
  Table t{{"a", "b", "c"}, {}};
  t.add({1.5, "x,y", std::nan("")});
  std::ostringstream csv, jl;
  write_table(csv, t, OutputFormat::csv);
  write_table(jl, t, OutputFormat::jsonl);
  EXPECT_EQ(csv.str(), "a,b,c\n1.5,\"x,y\",NA\n");
  EXPECT_EQ(jl.str(), "{\"a\":1.5,\"b\":\"x,y\",\"c\":null}\n");
  EXPECT_EQ(sibling_path("/tmp/out.csv", ".summary", ".csv"), "/tmp/out.summary.csv");
}

TEST(Cli, FitNoiselessSlope) {
  TempDir dir;
  std::ostringstream body;
  body << "y,x\n";
  for (int i = 1; i <= 20; ++i) body << 2.0 * (i - 10) << "," << (i - 10) << "\n";
  const CliRun r = invoke({"fit", "--input", dir.file("d.csv", body.str())});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NEAR(std::stod(field(r.out, "coef.x")), 2.0, 1e-8);
  EXPECT_EQ(field(r.out, "converged"), "true");
}

TEST(Cli, TauFlagEchoedAndMaxIterExit2) {
  TempDir dir;
  const std::string data = dir.file("d.csv");
  ASSERT_EQ(invoke({"simulate", "--experiment", "dataset", "--n", "200", "--d", "5", "--noise", "t:1.5", "--out", data}).code,
            0);
  const CliRun a = invoke({"fit", "--input", data, "--tau", "0.25"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(field(a.out, "tau"), "0.25");
  const CliRun b = invoke({"fit-l1", "--input", data, "--tau", "0.25", "--lambda", "0.01", "--max-iter", "1"});
  EXPECT_EQ(b.code, cli::kExitNotConverged);
  EXPECT_EQ(field(b.out, "converged"), "false");
  const CliRun c = invoke({"fit-truncated", "--input", data, "--varpi", "1.5"});
  EXPECT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(field(c.out, "varpi"), "1.5");
}

TEST(Cli, ErrorsExit1) {
  TempDir dir;
  EXPECT_EQ(invoke({"fit", "--input", dir.file("missing.csv")}).code, cli::kExitError);
  const std::string bad = dir.file("bad.csv", "y,x\n1,2\n3,zz\n");
  const CliRun r = invoke({"fit", "--input", bad});
  EXPECT_EQ(r.code, cli::kExitError);
  EXPECT_NE(r.err.find("row 2"), std::string::npos) << r.err;
  EXPECT_EQ(invoke({"fit", "--input", bad, "--response", "nope"}).code, cli::kExitError);
  EXPECT_EQ(invoke({"fit", "--input", bad, "--delimiter", ";;"}).code, cli::kExitError);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitError);
  EXPECT_EQ(invoke({"tune", "--input", bad, "--method", "magic"}).code, cli::kExitError);
}

TEST(Cli, TuneCvAndLepski) {
  TempDir dir;
  const std::string data = dir.file("d.csv");
  ASSERT_EQ(invoke({"simulate", "--experiment", "dataset", "--n", "120", "--d", "30", "--noise", "t:2", "--out", data}).code,
            0);
  const CliRun cv = invoke({"tune", "--input", data, "--high-dim"});
  EXPECT_EQ(cv.code, 0) << cv.err;
  std::istringstream lines(cv.out);
  std::string line;
  int rows = -1;
  while (std::getline(lines, line) && !line.empty()) ++rows;
  EXPECT_EQ(rows, 9);

  const CliRun forced = invoke({"tune", "--input", data, "--grid", "1"});
  EXPECT_NE(forced.out.find("true,true"), std::string::npos) << forced.out;

  const CliRun lep = invoke({"tune", "--input", data, "--method", "lepski"});
  EXPECT_EQ(lep.code, 0) << lep.err;
  EXPECT_NE(lep.out.find("selected_j"), std::string::npos);
  EXPECT_NE(lep.out.find("max_distance"), std::string::npos);
}

TEST(Cli, DiagnoseFlagsColumns) {
  TempDir dir;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  std::student_t_distribution<double> t5(5.0);
  std::ostringstream body;
  body << "normal,heavy,constant\n";
  for (int i = 0; i < 100000; ++i) body << z(rng) << "," << t5(rng) << ",1\n";
  const CliRun r = invoke({"diagnose", "--input", dir.file("k.csv", body.str())});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header, normal, heavy, constant;
  std::getline(in, header);
  std::getline(in, normal);
  std::getline(in, heavy);
  std::getline(in, constant);
  EXPECT_NE(normal.find(",false,false,false"), std::string::npos) << normal;
  EXPECT_NE(heavy.find(",true,"), std::string::npos) << heavy;
  EXPECT_NE(constant.find("NA,false,false,true"), std::string::npos) << constant;
}

TEST(Cli, SimulateFilesAndDeterminism) {
  TempDir dir;
  const std::string a = dir.file("a.csv"), b = dir.file("b.csv");
  ASSERT_EQ(invoke({"simulate", "--experiment", "table1", "--reps", "2", "--out", a, "--threads", "1"}).code, 0);
  ASSERT_EQ(invoke({"simulate", "--experiment", "table1", "--reps", "2", "--out", b, "--threads", "3"}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(dir.file("a.summary.csv")), slurp(dir.file("b.summary.csv")));
  EXPECT_EQ(slurp(dir.file("a.meta.json")), slurp(dir.file("b.meta.json")));
  std::istringstream in(slurp(a));
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2 * 3 * 2);

  const std::string p = dir.file("p.jsonl");
  ASSERT_EQ(invoke({"simulate", "--experiment", "phase", "--df-grid", "1.5,3.0", "--n-grid", "100,200", "--reps", "2",
                 "--out", p, "--format", "jsonl"})
                .code,
            0);
  std::istringstream pin(slurp(p));
  rows = 0;
  while (std::getline(pin, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Cli, ThreadEnvFallback) {
  EXPECT_EQ(cli::resolve_thread_count(3), 3);
  ::setenv("ADAHUBER_THREADS", "5", 1);
  EXPECT_EQ(cli::resolve_thread_count(0), 5);
  ::unsetenv("ADAHUBER_THREADS");
  EXPECT_EQ(cli::resolve_thread_count(0), 0);
}
