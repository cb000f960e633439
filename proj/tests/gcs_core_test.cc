#include "gcs/gcs_core.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_graphs.h"

namespace gcs {
namespace {

using namespace gcs::testing;

TEST(RelaxationTest, SinglePath) {
  const GcsProblem p = Chain();
  const FlowSolution f = SolveRelaxation(p, BuildRelaxation(p));
  ASSERT_TRUE(f.optimal()) << f.diagnostics;
  EXPECT_NEAR(f.phi[0], 1.0, 1e-7);
  EXPECT_NEAR(f.phi[1], 1.0, 1e-7);
  const PathEvaluation path = EvaluatePath(p, {0, 1, 2});
  ASSERT_TRUE(path.feasible());
  // Reflecting (3, 0) across y = 1 straightens the bend: |(3, 2)| = sqrt(13).
  EXPECT_NEAR(path.cost, std::sqrt(13.0), 1e-6);
  EXPECT_NEAR(f.cost, path.cost, 1e-6);
  ExpectFlowInvariants(p, f);
  ASSERT_TRUE(f.vertex_values[1].has_value());
  // The cost is quadratic around the optimum, so the point is only determined
  // to roughly the square root of the solver tolerance.
  EXPECT_LE((*f.vertex_values[1] - V2(1.5, 1)).norm(), 1e-3);
}

TEST(RelaxationTest, SymmetricDiamondSplitsFlow) {
  const GcsProblem p = Diamond(0.0);
  const FlowSolution f = SolveRelaxation(p, BuildRelaxation(p));
  ASSERT_TRUE(f.optimal()) << f.diagnostics;
  // Ties are split by the central path, to the accuracy of the final iterate.
  for (int e = 0; e < 4; ++e) EXPECT_NEAR(f.phi[e], 0.5, 1e-4);
  const double branch = EvaluatePath(p, {0, 1, 3}).cost;
  EXPECT_NEAR(f.cost, branch, 1e-6);
  EXPECT_NEAR(EvaluatePath(p, {0, 2, 3}).cost, branch, 1e-9);
  ExpectFlowInvariants(p, f);
}

TEST(RelaxationTest, LowerBoundsBruteForceOnRandomInstances) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 12; ++trial) {
    const GcsProblem p = RandomInstance(rng, 6, 0.25);
    const FlowSolution f = SolveRelaxation(p, BuildRelaxation(p));
    if (EnumeratePaths(p, 100000).empty()) {
      EXPECT_EQ(f.status, SolveStatus::kInfeasible) << "trial " << trial;
      continue;
    }
    ASSERT_TRUE(f.optimal()) << f.diagnostics;
    ExpectFlowInvariants(p, f);
    const BruteForceResult opt = BruteForceOptimum(p, 100000);
    EXPECT_LE(f.cost, opt.cost + 1e-6 * (1.0 + std::abs(opt.cost))) << "trial " << trial;
  }
}

TEST(RelaxationTest, TreeInstancesAreIntegral) {
  // Inner vertices form a random undirected tree with edges in both
  // directions; source and target attach to one vertex each. A small constant
  // per edge rules out free circulations on reciprocal pairs.
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> pos(0.0, 8.0);
  Eigen::VectorXd unit_cost = Eigen::VectorXd::Zero(4);
  const EdgeLength length =
      EdgeLength::WeightedSum({{1.0, Distance2d()}, {1.0, EdgeLength::Affine(unit_cost, 0.1)}});
  for (int trial = 0; trial < 10; ++trial) {
    GcsProblem p;
    const int s = p.AddVertex("s", ConvexSet::Point(V2(0, 0)));
    const int t = p.AddVertex("t", ConvexSet::Point(V2(8, 8)));
    std::vector<int> ids;
    for (int i = 0; i < 8; ++i) {
      const double x = pos(rng), y = pos(rng);
      ids.push_back(p.AddVertex("v" + std::to_string(i), Box2(x, y, x + 1, y + 1)));
      if (i > 0) {
        const int parent = ids[rng() % i];
        p.AddEdge(parent, ids[i], length);
        p.AddEdge(ids[i], parent, length);
      }
    }
    p.AddEdge(s, ids[rng() % 8], length);
    p.AddEdge(ids[rng() % 8], t, length);
    p.SetSource(s);
    p.SetTarget(t);
    const FlowSolution f = SolveRelaxation(p, BuildRelaxation(p));
    ASSERT_TRUE(f.optimal()) << f.diagnostics;
    for (int e = 0; e < p.num_edges(); ++e) {
      EXPECT_NEAR(f.phi[e], std::round(f.phi[e]), 1e-6) << "trial " << trial;
    }
  }
}

TEST(RelaxationTest, ZeroWeightMatchesZeroLength) {
  GcsProblem zero = Chain();
  GcsProblem weighted;
  const int s = weighted.AddVertex("s", ConvexSet::Point(V2(0, 0)));
  const int a = weighted.AddVertex("a", Box2(1, 1, 2, 2));
  const int t = weighted.AddVertex("t", ConvexSet::Point(V2(3, 0)));
  weighted.AddEdge(s, a, EdgeLength::WeightedSum({{0.0, Distance2d()}}));
  weighted.AddEdge(a, t, Distance2d());
  weighted.SetSource(s);
  weighted.SetTarget(t);
  GcsProblem reference;
  reference.AddVertex("s", ConvexSet::Point(V2(0, 0)));
  reference.AddVertex("a", Box2(1, 1, 2, 2));
  reference.AddVertex("t", ConvexSet::Point(V2(3, 0)));
  reference.AddEdge(0, 1, EdgeLength::Zero());
  reference.AddEdge(1, 2, Distance2d());
  reference.SetSource(0);
  reference.SetTarget(2);
  const Relaxation rw = BuildRelaxation(weighted);
  const Relaxation rr = BuildRelaxation(reference);
  EXPECT_EQ(rw.program.ToCanonicalText(), rr.program.ToCanonicalText());
  const FlowSolution fw = SolveRelaxation(weighted, rw);
  const FlowSolution fr = SolveRelaxation(reference, rr);
  ASSERT_TRUE(fw.optimal() && fr.optimal());
  EXPECT_EQ(fw.cost, fr.cost);
}

TEST(RelaxationTest, RejectsInvalidGraphs) {
  GcsProblem p = Chain();
  EXPECT_THROW(p.AddEdge(1, 1), std::invalid_argument);
  EXPECT_THROW(p.AddEdge(0, 1), std::invalid_argument);
  EXPECT_THROW(p.AddEdge(0, 2, EdgeLength::Affine(Eigen::VectorXd::Ones(3), 0.0)),
               std::invalid_argument);
  p.AddEdge(2, 1);
  EXPECT_THROW(BuildRelaxation(p), std::invalid_argument);
  EXPECT_THROW(EdgeLength::WeightedSum({{-1.0, EdgeLength::Zero()}}),
               std::invalid_argument);
}

TEST(EvaluatePathTest, ZeroLengthsCostNothing) {
  GcsProblem p;
  const int s = p.AddVertex("s", std::nullopt);
  const int a = p.AddVertex("a", Box2(0, 0, 1, 1));
  const int t = p.AddVertex("t", std::nullopt);
  p.AddEdge(s, a);
  p.AddEdge(a, t);
  p.SetSource(s);
  p.SetTarget(t);
  const PathEvaluation r = EvaluatePath(p, {s, a, t});
  ASSERT_TRUE(r.feasible()) << r.diagnostics;
  EXPECT_EQ(r.cost, 0.0);
  EXPECT_EQ(r.values[0].size(), 0);
}

TEST(EvaluatePathTest, ContradictoryConstraintsAreInfeasible) {
  GcsProblem p;
  const int s = p.AddVertex("s", ConvexSet::Point(V2(0, 0)));
  const int a = p.AddVertex("a", Box2(0, 0, 1, 1));
  const int t = p.AddVertex("t", ConvexSet::Point(V2(1, 1)));
  EdgeConstraint c;
  Eigen::MatrixXd E(2, 4);
  E << 0, 0, 1, 0, 0, 0, 0, 1;
  c.AddEquality(E, V2(5, 5));  // head pinned outside its box
  p.AddEdge(s, a, EdgeLength::Zero(), c);
  p.AddEdge(a, t);
  p.SetSource(s);
  p.SetTarget(t);
  EXPECT_EQ(EvaluatePath(p, {s, a, t}).status, SolveStatus::kInfeasible);
}

TEST(EvaluatePathTest, RejectsNonPaths) {
  const GcsProblem p = Diamond(0.0);
  EXPECT_THROW(EvaluatePath(p, {0, 3}), std::invalid_argument);
  EXPECT_THROW(EvaluatePath(p, {0, 1}), std::invalid_argument);
  EXPECT_THROW(EvaluatePath(p, {0, 1, 1, 3}), std::invalid_argument);
}

TEST(BruteForceTest, UniqueAndDiamond) {
  const GcsProblem chain = Chain();
  const BruteForceResult c = BruteForceOptimum(chain, 10);
  EXPECT_EQ(c.path, (std::vector<int>{0, 1, 2}));
  EXPECT_NEAR(c.cost, EvaluatePath(chain, {0, 1, 2}).cost, 1e-12);

  const GcsProblem diamond = Diamond(0.5);
  const BruteForceResult d = BruteForceOptimum(diamond, 10);
  const double up = EvaluatePath(diamond, {0, 1, 3}).cost;
  const double down = EvaluatePath(diamond, {0, 2, 3}).cost;
  EXPECT_LT(up, down);
  EXPECT_EQ(d.path, (std::vector<int>{0, 1, 3}));
  EXPECT_NEAR(d.cost, std::min(up, down), 1e-12);
  EXPECT_THROW(BruteForceOptimum(diamond, 1), std::length_error);
}

TEST(EnumeratePathsTest, CountsCompleteGraph) {
  // Complete digraph on k inner vertices: sum_{j=1..k} k!/(k-j)! simple paths.
  GcsProblem p;
  const int s = p.AddVertex("s", std::nullopt);
  const int t = p.AddVertex("t", std::nullopt);
  const int k = 5;
  for (int i = 0; i < k; ++i) p.AddVertex("v" + std::to_string(i), Box2(0, 0, 1, 1));
  for (int i = 0; i < k; ++i) {
    p.AddEdge(s, 2 + i);
    p.AddEdge(2 + i, t);
    for (int j = 0; j < k; ++j) {
      if (i != j) p.AddEdge(2 + i, 2 + j);
    }
  }
  p.SetSource(s);
  p.SetTarget(t);
  EXPECT_EQ(EnumeratePaths(p, 1000).size(), 5u + 20u + 60u + 120u + 120u);
}

TEST(GcsJsonTest, RoundTripPreservesRelaxation) {
  std::mt19937_64 rng(30);
  const GcsProblem p = RandomInstance(rng, 5, 0.3);
  const GcsProblem q = GcsProblemFromJson(ToJson(p));
  EXPECT_EQ(ToJson(q).dump(), ToJson(p).dump());
  EXPECT_EQ(BuildRelaxation(q).program.ToCanonicalText(),
            BuildRelaxation(p).program.ToCanonicalText());
}

TEST(EdgeLengthTest, EvaluateMatchesDefinition) {
  Eigen::MatrixXd M(1, 2);
  M << 1, 1;
  const EdgeLength q = EdgeLength::QuadOverLinSum({{{M, Eigen::VectorXd::Zero(1)},
                                                    Eigen::Vector2d(0, 1), 0.0}});
  EXPECT_NEAR(q.Evaluate(V2(1, 2)), 9.0 / 2.0, 1e-15);
  EXPECT_TRUE(std::isinf(q.Evaluate(V2(1, 0))));
  EXPECT_EQ(q.Evaluate(V2(0, 0)), 0.0);
  const EdgeLength w = EdgeLength::WeightedSum({{2.0, q}, {0.0, q}});
  EXPECT_NEAR(w.Evaluate(V2(1, 2)), 9.0, 1e-15);
}

}  // namespace
}  // namespace gcs
