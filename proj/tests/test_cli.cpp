#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "alscan/io.hpp"
#include "alscan/serialize.hpp"
#include "commands.hpp"

using namespace alscan;
using namespace alscan::cli;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("alscan_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Writes a 60 x 128 matrix with one planted segment and returns its path.
  std::string make_data() const {
    RunConfig gen;
    gen.command = Command::gen;
    gen.n = 60;
    gen.T = 128;
    gen.segment.j = 40;
    gen.segment.ell = 20;
    gen.segment.pi = 0.2;
    gen.segment.mu = 5.0;
    gen.seed = 4;
    gen.output = path("data.csv");
    gen.truth_output = path("truth.json");
    run(gen);
    return gen.output;
  }

  std::filesystem::path dir_;
};

}  // namespace

TEST_F(CliTest, GenWritesMatrixAndTruth) {
  const auto data_path = make_data();
  const auto data = read_matrix(data_path);
  EXPECT_EQ(data.rows(), 60u);
  EXPECT_EQ(data.cols(), 128u);
  const auto truth = read_json_file(path("truth.json"));
  EXPECT_FALSE(truth.at("carriers").at(0).empty());
  // Same seed, same bytes.
  const auto first = slurp(data_path);
  make_data();
  EXPECT_EQ(slurp(data_path), first);
}

TEST_F(CliTest, ScanWritesReportsAndIntervalFiles) {
  RunConfig scan;
  scan.command = Command::scan;
  scan.input = make_data();
  scan.stats = {StatKind::phc, StatKind::pbj, StatKind::alr};
  scan.output = path("report.json");
  scan.intervals_prefix = path("win");
  scan.scanset_output = path("set.csv");
  run(scan);
  const auto doc = read_json_file(scan.output);
  ASSERT_EQ(doc.at("reports").size(), 3u);
  // PHC ignores p-values below s/N, so these very strong carriers only move
  // PBJ and ALR.
  EXPECT_EQ(doc.at("reports").at(0).at("statistic"), "phc");
  EXPECT_TRUE(doc.at("reports").at(1).at("reject").get<bool>());
  EXPECT_TRUE(doc.at("reports").at(2).at("reject").get<bool>());

  std::ifstream phc(path("win.phc.csv"));
  std::ifstream pbj(path("win.pbj.csv"));
  const auto a = read_interval_csv(phc);
  const auto b = read_interval_csv(pbj);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].interval, b[i].interval);
  EXPECT_EQ(a.size(), build_scan_set(128).size());
  EXPECT_EQ(slurp(path("set.csv")).substr(0, 9), "r,d,j,ell");
}

TEST_F(CliTest, SingleStatReportIsBare) {
  RunConfig scan;
  scan.command = Command::scan;
  scan.input = make_data();
  scan.threshold = ThresholdSource::parse("value:1e9");
  scan.output = path("r.json");
  run(scan);
  const auto doc = read_json_file(scan.output);
  EXPECT_EQ(doc.at("statistic"), "pbj");
  EXPECT_FALSE(doc.at("reject").get<bool>());
  EXPECT_EQ(doc.at("threshold_source"), "value");
}

TEST_F(CliTest, IdentifyFindsPlantedSegment) {
  RunConfig id;
  id.command = Command::identify;
  id.input = make_data();
  id.output = path("seg.csv");
  run(id);
  std::istringstream lines(slurp(id.output));
  std::string header;
  std::string first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header, "rank,j,ell,score");
  std::stringstream row(first);
  std::string rank, j, ell;
  std::getline(row, rank, ',');
  std::getline(row, j, ',');
  std::getline(row, ell, ',');
  EXPECT_GT(overlap_length({std::stoul(j), std::stoul(ell)}, {40, 20}), 0u);
}

TEST_F(CliTest, BoundaryTable) {
  RunConfig b;
  b.command = Command::boundary;
  b.n = 207;
  b.T = 42075;
  b.ell = 51;
  b.beta_grid = {0.568};
  b.output = path("b.csv");
  run(b);
  const auto text = slurp(b.output);
  EXPECT_NE(text.find("beta,zeta,tau,b_N,branch,b_N_per_sqrt_ell"), std::string::npos);
  EXPECT_NE(text.find("moderate"), std::string::npos);
  EXPECT_NE(text.find("0.2580"), std::string::npos);
}

TEST_F(CliTest, CalibrateThenScanWithFileThreshold) {
  RunConfig cal;
  cal.command = Command::calibrate;
  cal.n = 60;
  cal.T = 128;
  cal.reps = 100;
  cal.output = path("table.json");
  run(cal);
  RunConfig scan;
  scan.command = Command::scan;
  scan.input = make_data();
  scan.threshold = ThresholdSource::parse("file:" + cal.output);
  scan.output = path("r.json");
  run(scan);
  const auto table = quantile_table_from_json(read_json_file(cal.output));
  EXPECT_EQ(read_json_file(scan.output).at("threshold").get<double>(), table.quantile(0.95));

  scan.stats = {StatKind::phc};
  EXPECT_THROW(run(scan), ConfigError);
}

TEST_F(CliTest, ProfileOutputs) {
  RunConfig p;
  p.command = Command::profile;
  p.input = make_data();
  p.ell = 20;
  p.output = path("j.csv");
  p.beta_output = path("beta.csv");
  p.summary_output = path("summary.json");
  run(p);
  const auto summary = read_json_file(p.summary_output);
  EXPECT_LE(std::abs(summary.at("j_hat").get<double>() - 40.0), 3.0);
  EXPECT_EQ(slurp(p.output).substr(0, 9), "j,logL,L\n");
  EXPECT_EQ(slurp(p.beta_output).substr(0, 19), "beta,logL,fraction\n");
}

TEST_F(CliTest, PowerGrid) {
  RunConfig p;
  p.command = Command::power;
  p.T = 64;
  p.n_grid = {20};
  p.mu_grid = {1.0, 2.0};
  p.target_zeta = 0.3;
  p.segment.beta = 0.3;
  p.stats = {StatKind::pbj};
  p.reps = 4;
  p.output = path("power.json");
  p.csv_output = path("power.csv");
  run(p);
  const auto doc = read_json_file(p.output);
  EXPECT_FALSE(doc.empty());
  EXPECT_FALSE(slurp(p.csv_output).empty());
}

TEST_F(CliTest, ErrorsMapToExitCodes) {
  std::ostringstream err;
  RunConfig missing;
  missing.command = Command::scan;
  missing.input = path("nope.csv");
  EXPECT_EQ(run_reporting(missing, err), kExitFormat);
  const auto doc = Json::parse(err.str());
  EXPECT_EQ(doc.at("error").at("kind"), "format");

  std::ostringstream err2;
  RunConfig bad;
  bad.command = Command::profile;
  EXPECT_EQ(run_reporting(bad, err2), kExitConfig);

  EXPECT_THROW(ThresholdSource::parse("value:abc"), ConfigError);
  EXPECT_THROW(ThresholdSource::parse("bogus"), ConfigError);
  EXPECT_THROW(parse_command("frobnicate"), ConfigError);
}

TEST(Grid, ParsesListsAndRanges) {
  EXPECT_EQ(parse_grid("0.1,0.2"), (std::vector<double>{0.1, 0.2}));
  const auto r = parse_grid("0:1:0.25");
  ASSERT_EQ(r.size(), 5u);
  EXPECT_EQ(r.back(), 1.0);
  EXPECT_THROW(parse_grid("1:0:0.1"), ConfigError);
  EXPECT_THROW(parse_grid("a,b"), ConfigError);
}
