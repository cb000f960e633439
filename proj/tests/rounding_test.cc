#include "gcs/rounding.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_graphs.h"

namespace gcs {
namespace {

using namespace gcs::testing;

TEST(PortableRngTest, MatchesTheStandardEngineSequence) {
  // The 10000th output of a default-seeded mt19937_64 is fixed by the C++
  // standard; Uniform keeps its top 53 bits.
  PortableRng rng(5489);
  double last = 0.0;
  for (int k = 0; k < 10000; ++k) last = rng.Uniform();
  EXPECT_EQ(last, static_cast<double>(9981545732273789042ull >> 11) * 0x1.0p-53);
}

TEST(PortableRngTest, BelowIsInRangeAndRoughlyUniform) {
  PortableRng rng(3);
  std::vector<int> counts(7, 0);
  const int draws = 70000;
  for (int k = 0; k < draws; ++k) {
    const auto x = rng.Below(7);
    ASSERT_LT(x, 7u);
    ++counts[x];
  }
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - draws / 7.0) * (c - draws / 7.0) / (draws / 7.0);
  // 6 degrees of freedom; 22.46 is the 0.999 quantile.
  EXPECT_LT(chi2, 22.46);
}

TEST(SamplePathTest, SingleSupportIsDeterministic) {
  const GcsProblem p = Chain();
  const Eigen::VectorXd phi = Eigen::Vector2d(1.0, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PortableRng rng(seed);
    const auto path = SamplePath(p, phi, rng);
    ASSERT_TRUE(path.has_value());
    EXPECT_EQ(*path, (std::vector<int>{0, 1, 2}));
  }
}

TEST(SamplePathTest, DiamondBranchFrequency) {
  const GcsProblem p = Diamond(0.0);
  const Eigen::VectorXd phi = Eigen::Vector4d(0.5, 0.5, 0.5, 0.5);
  int up = 0;
  const int draws = 10000;
  for (int seed = 0; seed < draws; ++seed) {
    PortableRng rng(seed);
    const auto path = SamplePath(p, phi, rng);
    ASSERT_TRUE(path.has_value());
    if ((*path)[1] == 1) ++up;
  }
  EXPECT_NEAR(static_cast<double>(up) / draws, 0.5, 0.05);
}

TEST(SamplePathTest, UnequalFlowsSetTheOdds) {
  const GcsProblem p = Diamond(0.0);
  const Eigen::VectorXd phi = Eigen::Vector4d(0.8, 0.2, 0.8, 0.2);
  PortableRng rng(11);
  int up = 0;
  const int draws = 20000;
  for (int k = 0; k < draws; ++k) up += (*SamplePath(p, phi, rng))[1] == 1;
  EXPECT_NEAR(static_cast<double>(up) / draws, 0.8, 0.01);
}

TEST(SamplePathTest, BacktracksOutOfDeadEnds) {
  // s -> a -> {d, t}, where d is a spur with positive flow and no exit.
  GcsProblem p;
  const int s = p.AddVertex("s", ConvexSet::Point(V2(0, 0)));
  const int a = p.AddVertex("a", Box2(0, 0, 1, 1));
  const int d = p.AddVertex("d", Box2(1, 1, 2, 2));
  const int t = p.AddVertex("t", ConvexSet::Point(V2(2, 0)));
  p.AddEdge(s, a, Distance2d());
  p.AddEdge(a, d, Distance2d());
  p.AddEdge(a, t, Distance2d());
  p.AddEdge(s, d, Distance2d());
  p.SetSource(s);
  p.SetTarget(t);
  const Eigen::VectorXd phi = Eigen::Vector4d(0.5, 0.9, 0.5, 0.5);
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    PortableRng rng(seed);
    const auto path = SamplePath(p, phi, rng);
    ASSERT_TRUE(path.has_value()) << "seed " << seed;
    EXPECT_EQ(*path, (std::vector<int>{s, a, t}));
  }
}

TEST(SamplePathTest, FlowFloorPrunesSupport) {
  const GcsProblem p = Diamond(0.0);
  const Eigen::VectorXd phi = Eigen::Vector4d(1.0, 1e-7, 1.0, 1e-7);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    PortableRng rng(seed);
    EXPECT_EQ((*SamplePath(p, phi, rng))[1], 1);
  }
  PortableRng rng(0);
  EXPECT_FALSE(SamplePath(p, Eigen::Vector4d(1.0, 0.0, 0.0, 0.0), rng).has_value());
}

TEST(RoundTest, UniquePathStopsEarly) {
  const GcsProblem p = Chain();
  const FlowSolution f = SolveRelaxation(p, BuildRelaxation(p));
  ASSERT_TRUE(f.optimal());
  const RoundingReport r = Round(p, f);
  ASSERT_TRUE(r.found());
  EXPECT_TRUE(r.early_stop);
  EXPECT_EQ(r.trials, 1);
  EXPECT_NEAR(r.best_cost, std::sqrt(13.0), 1e-6);
  EXPECT_NEAR(r.relaxation_gap, 0.0, 1e-6);
  EXPECT_EQ(r.best_values.size(), 3u);
}

TEST(RoundTest, PicksCheaperDiamondBranch) {
  const GcsProblem p = Diamond(0.5);
  const FlowSolution f = SolveRelaxation(p, BuildRelaxation(p));
  ASSERT_TRUE(f.optimal());
  const double up_cost = EvaluatePath(p, {0, 1, 3}).cost;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RoundingConfig config;
    config.seed = seed;
    const RoundingReport r = Round(p, f, config);
    ASSERT_TRUE(r.found());
    EXPECT_EQ(r.paths[r.best].vertices, (std::vector<int>{0, 1, 3}));
    EXPECT_NEAR(r.best_cost, up_cost, 1e-9);
  }
}

TEST(RoundTest, ReportsAreDeterministicAcrossThreadCounts) {
  std::mt19937_64 gen(8);
  const GcsProblem p = RandomInstance(gen, 7, 0.3);
  const FlowSolution f = SolveRelaxation(p, BuildRelaxation(p));
  ASSERT_TRUE(f.optimal()) << f.diagnostics;
  RoundingConfig config;
  config.seed = 1234;
  config.threads = 1;
  const nlohmann::json one = ToJson(Round(p, f, config));
  config.threads = 6;
  EXPECT_EQ(ToJson(Round(p, f, config)), one);
  EXPECT_EQ(ToJson(Round(p, f, config)), one);
}

TEST(RoundTest, PathsAreDistinctAndLimitsHold) {
  std::mt19937_64 gen(21);
  const GcsProblem p = RandomInstance(gen, 8, 0.35);
  const FlowSolution f = SolveRelaxation(p, BuildRelaxation(p));
  ASSERT_TRUE(f.optimal());
  RoundingConfig config;
  config.max_paths = 4;
  config.max_trials = 30;
  config.early_stop_tol = -1.0;  // never stop early
  const RoundingReport r = Round(p, f, config);
  EXPECT_LE(r.paths.size(), 4u);
  EXPECT_LE(r.trials, 30);
  for (size_t i = 0; i < r.paths.size(); ++i) {
    CheckPath(p, r.paths[i].vertices);
    for (size_t j = 0; j < i; ++j) EXPECT_NE(r.paths[i].vertices, r.paths[j].vertices);
  }
}

TEST(RoundTest, SandwichAndOptimalityRateOnRandomInstances) {
  std::mt19937_64 gen(2024);
  int instances = 0;
  int optimal = 0;
  while (instances < 100) {
    const GcsProblem p = RandomInstance(gen, 8, 0.3);
    if (EnumeratePaths(p, 100000).empty()) continue;
    ++instances;
    const FlowSolution f = SolveRelaxation(p, BuildRelaxation(p));
    ASSERT_TRUE(f.optimal()) << f.diagnostics;
    RoundingConfig config;
    config.seed = static_cast<std::uint64_t>(instances);
    const RoundingReport r = Round(p, f, config);
    ASSERT_TRUE(r.found());
    const double opt = BruteForceOptimum(p, 100000).cost;
    const double tol = 1e-6 * (1.0 + opt);
    EXPECT_LE(f.cost, opt + tol);
    EXPECT_LE(opt, r.best_cost + tol);
    EXPECT_GE(r.relaxation_gap, -1e-6);
    if (r.best_cost <= opt + tol) ++optimal;
  }
  EXPECT_GE(optimal, 90);
}

// Three mirrored copies of the short route split their flow three ways, so
// the single detour edge carries the largest flow out of the source. The flow
// below is a hand-built feasible point of the relaxation.
TEST(RoundTest, GreedyFoilMissesTheOptimum) {
  GcsProblem p;
  const int s = p.AddVertex("s", ConvexSet::Point(V2(0, 0)));
  const int t = p.AddVertex("t", ConvexSet::Point(V2(4, 0)));
  Eigen::VectorXd phi(8);
  for (int k = 0; k < 3; ++k) {
    const int a = p.AddVertex("a" + std::to_string(k), Box2(1.5, -0.5, 2.5, 0.5));
    phi[p.AddEdge(s, a, Distance2d())] = 0.2;
    phi[p.AddEdge(a, t, Distance2d())] = 0.2;
  }
  const int b = p.AddVertex("b", Box2(1.5, 3, 2.5, 4));
  phi[p.AddEdge(s, b, Distance2d())] = 0.4;
  phi[p.AddEdge(b, t, Distance2d())] = 0.4;
  p.SetSource(s);
  p.SetTarget(t);

  FlowSolution flows;
  flows.status = SolveStatus::kOptimal;
  flows.phi = phi;
  flows.cost = 0.0;

  const auto greedy = GreedyPath(p, phi);
  ASSERT_TRUE(greedy.has_value());
  EXPECT_EQ(*greedy, (std::vector<int>{s, b, t}));
  const double opt = BruteForceOptimum(p, 100).cost;
  EXPECT_NEAR(opt, 4.0, 1e-6);
  EXPECT_GT(EvaluatePath(p, *greedy).cost, opt + 1.0);

  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RoundingConfig config;
    config.seed = seed;
    hits += Round(p, flows, config).best_cost <= opt + 1e-6;
  }
  EXPECT_GE(hits, 90);

  // A single sample already picks the right decision about 60% of the time.
  int single = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    PortableRng rng(seed);
    single += (*SamplePath(p, phi, rng))[1] != b;
  }
  EXPECT_NEAR(single / 2000.0, 0.6, 0.05);
}

TEST(RoundTest, GapConventions) {
  EXPECT_EQ(RelaxationGap(0.0, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(RelaxationGap(0.0, 1.0)));
  EXPECT_TRUE(std::isinf(RelaxationGap(2.0, std::numeric_limits<double>::infinity())));
  EXPECT_DOUBLE_EQ(RelaxationGap(2.0, 2.5), 0.25);
}

TEST(RoundTest, JsonCarriesPathsAndSeed) {
  const GcsProblem p = Diamond(0.5);
  const FlowSolution f = SolveRelaxation(p, BuildRelaxation(p));
  RoundingConfig config;
  config.seed = 9;
  const nlohmann::json j = ToJson(Round(p, f, config));
  EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 9u);
  EXPECT_EQ(j.at("paths")[0].at("vertices").get<std::vector<int>>(),
            (std::vector<int>{0, 1, 3}));
  EXPECT_TRUE(j.at("relaxation_gap").is_number());
}

}  // namespace
}  // namespace gcs
