#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "emdcor/error.hpp"
#include "emdcor_cli/cli.hpp"

namespace emdcor::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("emdcor_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

const char* kFourPoints = "x,y\n1,4\n2,2\n3,3\n4,1\n";

TEST_F(CliTest, ParseDatasetFourPoints) {
  RunConfig cfg;
  const auto s = parse_dataset(file("e.csv", kFourPoints), cfg);
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.x().points.reals(), (std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(s.y().points.reals(), (std::vector<double>{4, 2, 3, 1}));
  EXPECT_EQ(s.x().metric, MetricSpec::euclidean(1));
}

TEST_F(CliTest, ParseDatasetNamesTheBadCell) {
  RunConfig cfg;
  try {
    parse_dataset(file("e.csv", "x,y\n1,2\n3,oops\n"), cfg);
    FAIL();
  } catch (const Error& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("line 3"), std::string::npos) << what;
    EXPECT_NE(what.find("'y'"), std::string::npos) << what;
    EXPECT_NE(what.find("oops"), std::string::npos) << what;
  }
}

TEST_F(CliTest, ParseDatasetMultiColumnMargin) {
  RunConfig cfg;
  cfg.x_cols = {"x1", "x2"};
  cfg.y_cols = {"y"};
  const auto s = parse_dataset(file("m.csv", "x1,x2,y\n0,0,1\n1,1,2\n2,0,4\n"), cfg);
  EXPECT_EQ(s.x().points.dimension(), 2u);
  EXPECT_EQ(s.x().points.size(), 3u);
  EXPECT_EQ(s.x().metric, MetricSpec::euclidean(2));
}

TEST_F(CliTest, ParseDatasetRejectsMalformedInput) {
  RunConfig cfg;
  EXPECT_THROW(parse_dataset(file("a.csv", ""), cfg), Error);
  EXPECT_THROW(parse_dataset(file("b.csv", "x,y\n"), cfg), Error);
  EXPECT_THROW(parse_dataset(file("c.csv", "x,y\n1,2\n3\n"), cfg), Error);
  EXPECT_THROW(parse_dataset(file("d.csv", "x,y\n1,2\n\n3,4\n"), cfg), Error);
  EXPECT_THROW(parse_dataset(file("e.csv", "x,y\n1,nan\n"), cfg), Error);
  EXPECT_THROW(parse_dataset(dir_ / "missing.csv", cfg), Error);
  cfg.x_cols = {"q"};
  EXPECT_THROW(parse_dataset(file("f.csv", kFourPoints), cfg), Error);
  cfg.x_cols = {"x"};
  cfg.y_cols = {"x"};
  EXPECT_THROW(parse_dataset(file("g.csv", kFourPoints), cfg), Error);
}

TEST_F(CliTest, ParseDatasetKeepsEveryRow) {
  RunConfig cfg;
  const auto s = parse_dataset(file("r.csv", "x,y\r\n1,1\r\n1,1\r\n2, 3 \r\n"), cfg);
  EXPECT_EQ(s.size(), 3u);
}

TEST(ParseMetric, Names) {
  EXPECT_EQ(parse_metric("manhattan", 2), MetricSpec::manhattan(2));
  EXPECT_EQ(parse_metric("discrete", 1), MetricSpec::discrete(1));
  EXPECT_THROW(parse_metric("cosine", 1), Error);
  EXPECT_THROW(parse_metric("matrix:", 1), Error);
}

TEST_F(CliTest, EcorReportsFourPoints) {
  const auto r = invoke({"ecor", "--input", file("e.csv", kFourPoints)});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["ecov"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(j["evar_x"].get<double>(), 1.25);
  EXPECT_EQ(j["evar_y"].get<double>(), 1.25);
  EXPECT_NEAR(j["ecor"].get<double>(), 0.8, 1e-9);
  EXPECT_TRUE(j["evar_z"].is_null());
  EXPECT_FALSE(j["solver"].contains("seconds"));
}

TEST_F(CliTest, EcorDegenerateExitsTwo) {
  const auto r = invoke({"ecor", "--input", file("c.csv", "x,y\n1,5\n2,5\n3,5\n")});
  EXPECT_EQ(r.code, kExitDegenerate);
  EXPECT_EQ(r.err, "eCor undefined: degenerate margin\n");
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, DcorDegenerateExitsTwo) {
  const auto r = invoke({"dcor", "--input", file("c.csv", "x,y\n1,5\n2,5\n3,5\n")});
  EXPECT_EQ(r.code, kExitDegenerate);
  EXPECT_EQ(r.err, "dCor undefined: degenerate margin\n");
}

TEST_F(CliTest, EcorIsByteIdenticalAcrossRuns) {
  const auto path = file("e.csv", "x,y\n0.1,3\n2.7,2\n3.3,3\n4,1.5\n5,9\n");
  const auto a = invoke({"ecor", "--input", path});
  const auto b = invoke({"ecor", "--input", path});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, ReportRoundTripsExactly) {
  const auto path = file("e.csv", "x,y\n0.1,3\n2.7,2\n3.3,3\n4,1.5\n5,9\n");
  const auto r = invoke({"ecor", "--input", path});
  const auto j = Json::parse(r.out);
  RunConfig cfg;
  const auto report = dependence_report(parse_dataset(path, cfg));
  EXPECT_EQ(j["ecov"].get<double>(), report.ecov);
  EXPECT_EQ(j["ecor"].get<double>(), report.ecor);
  EXPECT_EQ(j["evar_x"].get<double>(), report.evar_x);
  EXPECT_EQ(j["dcor"].get<double>(), *report.dcor);
  EXPECT_EQ(j["pearson"].get<double>(), *report.pearson);
  EXPECT_EQ(j["conditional_upper_bound"].get<double>(), *report.conditional_upper_bound);
  EXPECT_EQ(j["lower_bound_remark2"].get<double>(), *report.lower_bound_remark2);
}

TEST_F(CliTest, EcorTrivariateAndPlain) {
  const auto path = file("t.csv", "a,b,c\n0,0,0\n1,1,1\n");
  const auto r = invoke({"ecor", "--input", path, "--x-cols", "a", "--y-cols", "b", "--z-cols",
                         "c", "--format", "plain"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ecov 0.75\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("ecor 1.5\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, EcorWithMatrixMetric) {
  const auto m = file("d.csv", "0,1,2\n1,0,1\n2,1,0\n");
  const auto path = file("p.csv", "i,y\n0,0\n1,1\n2,2\n");
  const auto r = invoke({"ecor", "--input", path, "--metric-x", "matrix:" + m});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["ecor"].get<double>(), 1.0, 1e-12);
  const auto bad = invoke({"ecor", "--input", file("q.csv", "i,y\n0,0\n7,1\n"), "--metric-x",
                           "matrix:" + m});
  EXPECT_EQ(bad.code, kExitUsage);
}

TEST_F(CliTest, Dcor) {
  const auto r = invoke({"dcor", "--input", file("d.csv", "x,y\n0,0\n1,1\n")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["dcov"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["dcor"].get<double>(), 1.0, 1e-12);
}

TEST_F(CliTest, WassersteinSameFileAndSecondFile) {
  auto r = invoke({"wasserstein", "--input", file("w.csv", "a,b\n0,0\n1,2\n")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["wasserstein"].get<double>(), 0.5);
  r = invoke({"wasserstein", "--input", file("u.csv", "a\n0\n"), "--with",
              file("v.csv", "b\n0\n2\n")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["wasserstein"].get<double>(), 1.0);
  EXPECT_EQ(j["n_y"].get<int>(), 2);
}

TEST_F(CliTest, Transport) {
  const auto p = file("p.json",
                      R"({"supplies":[2,2],"demands":[1,1,1,1],"costs":[[0,1,1,2],[2,1,1,0]],"scale":1})");
  const auto r = invoke({"transport", "--input", p});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["cost"].get<double>(), 2.0);
  EXPECT_TRUE(j["certified"].get<bool>());
  std::int64_t units = 0;
  for (const auto& f : j["flows"]) units += f[2].get<std::int64_t>();
  EXPECT_EQ(units, 4);
  const auto bad = invoke({"transport", "--input", file("b.json", R"({"supplies":[2],"demands":[1],"costs":[[1]]})")});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("unbalanced"), std::string::npos);
}

TEST_F(CliTest, TestIndependence) {
  std::string csv = "x,y\n";
  for (int i = 0; i < 20; ++i) csv += std::to_string(i) + "," + std::to_string(i) + "\n";
  const auto path = file("t.csv", csv);
  const auto r = invoke({"test-independence", "--input", path, "--permutations", "199", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_LE(j["p_value"].get<double>(), 0.01);
  EXPECT_EQ(j["permutations"].get<int>(), 199);
  const auto threaded = invoke({"test-independence", "--input", path, "--permutations", "199",
                                "--seed", "3", "--threads", "3"});
  EXPECT_EQ(threaded.out, r.out);
  EXPECT_EQ(invoke({"test-independence", "--input", path, "--permutations", "5"}).code, kExitUsage);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({"ecor"}).code, kExitUsage);
  EXPECT_EQ(invoke({"ecor", "--input", file("e.csv", kFourPoints), "--format", "xml"}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"ecor", "--input", file("e.csv", kFourPoints), "--metric-x", "cosine"}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

}  // namespace
}  // namespace emdcor::cli
