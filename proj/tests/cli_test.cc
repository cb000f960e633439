#include "gcs/cli.h"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>

namespace gcs {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gcs_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  int Run(std::vector<std::string> args) {
    args.insert(args.begin(), "gcs");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return RunCli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  void WriteJson(const std::string& name, const nlohmann::json& j) {
    std::ofstream(Path(name)) << j.dump();
  }

  static std::string Slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

PlanningProblem SingleBox() {
  PlanningProblem p;
  p.regions.push_back(ConvexSet::Box(Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 1)));
  p.spec = MinLengthSpec(2);
  p.spec.q0 = Eigen::Vector2d(0.25, 0.5);
  p.spec.qT = Eigen::Vector2d(1.75, 0.25);
  return p;
}

// Tags nest properly and every attribute value is quoted.
bool WellFormedXml(const std::string& text) {
  std::vector<std::string> open;
  size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const size_t end = text.find('>', pos);
    if (end == std::string::npos) return false;
    const std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag.front() == '?') {
      if (tag.back() != '?') return false;
      continue;
    }
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
    if (tag.front() == '/') {
      if (open.empty() || open.back() != tag.substr(1)) return false;
      open.pop_back();
      continue;
    }
    const std::string name = tag.substr(0, tag.find_first_of(" /"));
    if (tag.back() != '/') open.push_back(name);
  }
  return open.empty();
}

std::vector<double> Numbers(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ' ')) {
    const size_t comma = item.find(',');
    out.push_back(std::stod(item.substr(0, comma)));
    out.push_back(std::stod(item.substr(comma + 1)));
  }
  return out;
}

TEST_F(CliTest, TrivialInstanceSucceeds) {
  WriteJson("one.json", ToJson(SingleBox()));
  EXPECT_EQ(Run({"plan", Path("one.json"), "-o", Path("traj.json")}), 0) << err_.str();
  const nlohmann::json record = nlohmann::json::parse(out_.str());
  EXPECT_EQ(record["status"], "success");
  EXPECT_NEAR(record["c_round"].get<double>(), std::hypot(1.5, 0.25), 1e-6);
  // The written trajectory reloads and satisfies every check.
  const Trajectory traj = TrajectoryFromJson(nlohmann::json::parse(Slurp(Path("traj.json"))));
  EXPECT_TRUE(CheckTrajectory(SingleBox(), traj).empty());
}

TEST_F(CliTest, DisconnectedInstanceExitsTwo) {
  PlanningProblem p = SingleBox();
  p.regions.push_back(ConvexSet::Box(Eigen::Vector2d(5, 5), Eigen::Vector2d(6, 6)));
  p.spec.qT = Eigen::Vector2d(5.5, 5.5);
  WriteJson("apart.json", ToJson(p));
  EXPECT_EQ(Run({"plan", Path("apart.json")}), 2);
  EXPECT_NE(err_.str().find("graph disconnected"), std::string::npos) << err_.str();
}

TEST_F(CliTest, MalformedJsonNamesFileAndElement) {
  std::ofstream(Path("broken.json")) << "{\"regions\": [";
  EXPECT_EQ(Run({"plan", Path("broken.json")}), 1);
  EXPECT_NE(err_.str().find("broken.json"), std::string::npos);

  nlohmann::json j = ToJson(SingleBox());
  j["regions"][0].erase("hi");
  WriteJson("missing.json", j);
  EXPECT_EQ(Run({"plan", Path("missing.json")}), 1);
  EXPECT_NE(err_.str().find("/regions/0"), std::string::npos) << err_.str();
}

TEST_F(CliTest, UnknownFlagIsAnError) {
  EXPECT_EQ(Run({"plan", "--bogus"}), 1);
  EXPECT_EQ(Run({}), 1);
  EXPECT_EQ(Run({"--help"}), 0);
  for (const char* flag : {"--no-preprocess", "--no-two-cycle", "--seed", "--rounding-n",
                           "--rounding-m", "--oracle", "--tol"}) {
    Run({"plan", "--help"});
    EXPECT_NE(out_.str().find(flag), std::string::npos) << flag;
  }
}

TEST_F(CliTest, MazePlanReportsRelaxationGap) {
  ASSERT_EQ(Run({"generate", "maze", "--width", "15", "--height", "15", "--removed", "10",
                 "--seed", "4", "-o", Path("maze.json"), "--ascii", Path("maze.txt")}),
            0)
      << err_.str();
  const std::string art = Slurp(Path("maze.txt"));
  EXPECT_EQ(std::count(art.begin(), art.end(), '\n'), 2 * 15 + 1);
  ASSERT_EQ(Run({"plan", Path("maze.json"), "--record", Path("record.json")}), 0) << err_.str();
  const nlohmann::json record = nlohmann::json::parse(Slurp(Path("record.json")));
  ASSERT_TRUE(record["delta_relax"].is_number());
  EXPECT_LE(std::abs(record["delta_relax"].get<double>()), 1e-4);
  const auto& t = record["timings"];
  const double sum = t["graph"].get<double>() + t["preprocess"].get<double>() +
                     t["relaxation"].get<double>() + t["rounding"].get<double>() +
                     t["reconstruction"].get<double>();
  EXPECT_NEAR(t["total"].get<double>(), sum, 1e-9);
  for (const char* phase : {"graph", "preprocess", "relaxation", "rounding", "reconstruction"}) {
    EXPECT_GE(t[phase].get<double>(), 0.0);
  }
}

TEST_F(CliTest, TogglesReachThePlanner) {
  WriteJson("maze.json", ToJson(MazeProblem(GenerateMaze(4, 4, 2, 1), MinLengthSpec(2))));
  ASSERT_EQ(Run({"plan", Path("maze.json"), "--no-preprocess", "--no-two-cycle",
                 "--rounding-n", "3", "--rounding-m", "7", "--seed", "9", "--tol", "1e-7"}),
            0);
  const nlohmann::json record = nlohmann::json::parse(out_.str());
  EXPECT_EQ(record["preprocess"], false);
  EXPECT_EQ(record["two_cycle"], false);
  EXPECT_EQ(record["edges_removed"], 0);
  EXPECT_EQ(record["rounding_paths"], 3);
  EXPECT_EQ(record["rounding_trials"], 7);
  EXPECT_EQ(record["seed"], 9);
}

TEST_F(CliTest, OracleRefusesLargeGraphs) {
  WriteJson("maze.json", ToJson(MazeProblem(GenerateMaze(5, 5, 8, 2), MinLengthSpec(2))));
  EXPECT_EQ(Run({"plan", Path("maze.json"), "--oracle", "--path-limit", "1"}), 1);
  EXPECT_NE(err_.str().find("oracle refused"), std::string::npos);
  ASSERT_EQ(Run({"plan", Path("maze.json"), "--oracle"}), 0);
  const nlohmann::json record = nlohmann::json::parse(out_.str());
  const double opt = record["c_opt"].get<double>();
  EXPECT_GE(record["c_round"].get<double>(), opt * (1 - 1e-6));
  EXPECT_GE(opt, record["c_relax"].get<double>() * (1 - 1e-6));
  EXPECT_NEAR(record["delta_opt"].get<double>(), (record["c_round"].get<double>() - opt) / opt,
              1e-12);
}

std::vector<nlohmann::json> JsonLines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) out.push_back(nlohmann::json::parse(line));
  return out;
}

TEST_F(CliTest, BenchEightByEightMazes) {
  ASSERT_EQ(Run({"bench", "maze", "--count", "10", "--seed", "100"}), 0) << err_.str();
  const auto lines = JsonLines(out_.str());
  ASSERT_EQ(lines.size(), 11u);
  for (int k = 0; k < 10; ++k) {
    const auto& r = lines[k]["record"];
    EXPECT_EQ(r["seed"], 100 + k);
    ASSERT_EQ(r["status"], "success") << r.dump();
    EXPECT_LE(r["c_relax"].get<double>(), r["c_round"].get<double>() * (1 + 1e-6));
  }
  EXPECT_EQ(lines[10]["summary"]["instances"], 10);
  EXPECT_EQ(lines[10]["summary"]["successes"], 10);
}

TEST_F(CliTest, BenchOracleOnSixBySix) {
  ASSERT_EQ(Run({"bench", "maze", "--width", "6", "--height", "6", "--removed", "5",
                 "--seeds", "3,1,4", "--oracle"}),
            0);
  const auto lines = JsonLines(out_.str());
  ASSERT_EQ(lines.size(), 4u);
  for (int k = 0; k < 3; ++k) {
    const auto& r = lines[k]["record"];
    ASSERT_TRUE(r.contains("delta_opt")) << r.dump();
    EXPECT_GE(r["delta_opt"].get<double>(), -1e-6);
    EXPECT_GE(r["oracle_paths"].get<long>(), 1);
  }
  EXPECT_EQ(lines[3]["summary"]["delta_opt"]["count"], 3);
}

TEST_F(CliTest, BenchOutputDeterministicWithoutTimings) {
  const std::vector<std::string> args = {"bench", "random", "--count", "6", "--seed", "11",
                                         "--oracle", "--no-timings"};
  ASSERT_EQ(Run(args), 0);
  const std::string first = out_.str();
  ASSERT_EQ(Run(args), 0);
  EXPECT_EQ(out_.str(), first);
  EXPECT_EQ(first.find("timings"), std::string::npos);
}

TEST(BenchSummaryTest, PureFunctionOfRecords) {
  std::vector<RunRecord> records(5);
  const double gaps[] = {0.0, 2e-5, 0.3, 5e-9, 1e-3};
  for (int k = 0; k < 5; ++k) {
    records[k].status = PlanStatus::kSuccess;
    records[k].delta_relax = gaps[k];
    records[k].timings.relaxation = k;
  }
  records.push_back(RunRecord{});
  const BenchSummary s = Summarize(records);
  EXPECT_EQ(s.instances, 6);
  EXPECT_EQ(s.successes, 5);
  EXPECT_EQ(s.failures, 1);
  EXPECT_EQ(s.tight, 3);
  // Sorted gaps 0, 5e-9, 2e-5, 1e-3, 0.3: nearest-rank median is the 3rd,
  // the 90th percentile the 5th.
  EXPECT_EQ(s.delta_relax.median, 2e-5);
  EXPECT_EQ(s.delta_relax.p90, 0.3);
  EXPECT_EQ(s.delta_relax.max, 0.3);
  EXPECT_NEAR(s.delta_relax.mean, (0.3 + 1e-3 + 2e-5 + 5e-9) / 5, 1e-15);
  const std::vector<int> counts = {2, 0, 0, 0, 1, 0, 1, 0, 1};
  EXPECT_EQ(s.delta_relax.histogram.counts, counts);
  EXPECT_FALSE(s.delta_opt.has_value());
  EXPECT_EQ(ToJson(s, false).dump(), ToJson(Summarize(records), false).dump());
}

TEST(Polygon2dTest, TriangleVertices) {
  Eigen::MatrixXd A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  const ConvexSet tri = ConvexSet::HPolytope(A, Eigen::Vector3d(0, 0, 2));
  const auto poly = Polygon2d(tri);
  ASSERT_EQ(poly.size(), 3u);
  double area = 0.0;
  for (size_t k = 0; k < poly.size(); ++k) {
    const auto& p = poly[k];
    const auto& q = poly[(k + 1) % poly.size()];
    area += p.x() * q.y() - p.y() * q.x();
    EXPECT_TRUE(tri.Contains(p));
  }
  EXPECT_NEAR(area / 2, 2.0, 1e-12);
}

TEST_F(CliTest, RenderStraightSegment) {
  const PlanningProblem p = SingleBox();
  WriteJson("one.json", ToJson(p));
  ASSERT_EQ(Run({"plan", Path("one.json"), "-o", Path("traj.json")}), 0);
  ASSERT_EQ(Run({"render", Path("one.json"), "-t", Path("traj.json"), "-o", Path("one.svg")}), 0)
      << err_.str();
  const std::string svg = Slurp(Path("one.svg"));
  EXPECT_TRUE(WellFormedXml(svg));
  const std::regex polyline("<polyline class=\"trajectory\"[^>]*points=\"([^\"]*)\"");
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, polyline));
  EXPECT_EQ(std::distance(std::sregex_iterator(svg.begin(), svg.end(), polyline),
                          std::sregex_iterator()),
            1);
  const std::vector<double> pts = Numbers(m[1].str());
  ASSERT_GE(pts.size(), 2u * 101);
  // Pixel coordinates: x = (x - lo) * 80, y = (hi - y) * 80, with a 5% margin
  // on the 2 x 1 bounding box.
  const double margin = 0.1;
  auto px = [&](double x) { return (x + margin) * 80.0; };
  auto py = [&](double y) { return (1.0 + margin - y) * 80.0; };
  EXPECT_NEAR(pts[0], px(p.spec.q0[0]), 1e-3);
  EXPECT_NEAR(pts[1], py(p.spec.q0[1]), 1e-3);
  EXPECT_NEAR(pts[pts.size() - 2], px(p.spec.qT[0]), 1e-3);
  EXPECT_NEAR(pts.back(), py(p.spec.qT[1]), 1e-3);
}

TEST_F(CliTest, RenderMazeCells) {
  ASSERT_EQ(Run({"generate", "maze", "--width", "7", "--height", "5", "-o", Path("maze.json"),
                 "--ascii", Path("maze.txt")}),
            0);
  ASSERT_EQ(Run({"render", Path("maze.json")}), 0);
  const std::string svg = out_.str();
  EXPECT_TRUE(WellFormedXml(svg));
  const std::regex cell("<rect class=\"region\"");
  EXPECT_EQ(std::distance(std::sregex_iterator(svg.begin(), svg.end(), cell),
                          std::sregex_iterator()),
            35);
}

TEST_F(CliTest, RenderRefusesThreeDimensions) {
  ASSERT_EQ(Run({"generate", "building", "--seed", "1", "-o", Path("b.json")}), 0);
  EXPECT_EQ(Run({"render", Path("b.json")}), 1);
  EXPECT_NE(err_.str().find("only 2D"), std::string::npos) << err_.str();
}

TEST_F(CliTest, GeneratorsAreDeterministic) {
  for (const char* gen : {"maze", "building", "random", "fixture2d", "two-route"}) {
    ASSERT_EQ(Run({"generate", gen, "--seed", "5", "--removed", "3"}), 0) << gen;
    const std::string first = out_.str();
    ASSERT_EQ(Run({"generate", gen, "--seed", "5", "--removed", "3"}), 0);
    EXPECT_EQ(out_.str(), first) << gen;
  }
}

TEST_F(CliTest, GraphProblemsPlanToo) {
  WriteJson("random.json", ToJson(RandomGcs(3)));
  ASSERT_EQ(Run({"plan", Path("random.json"), "-o", Path("path.json"), "--oracle"}), 0)
      << err_.str();
  const nlohmann::json path = nlohmann::json::parse(Slurp(Path("path.json")));
  EXPECT_GE(path["path"].size(), 2u);
  const nlohmann::json record = nlohmann::json::parse(out_.str());
  EXPECT_NEAR(record["c_round"].get<double>(), record["c_opt"].get<double>(),
              1e-6 * std::abs(record["c_opt"].get<double>()) + 1e-9);
}

}  // namespace
}  // namespace gcs
