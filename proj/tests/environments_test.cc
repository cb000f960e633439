#include "gcs/environments.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <set>

#include <gtest/gtest.h>

namespace gcs {
namespace {

// Simple start-goal paths in the cell graph, counted by plain DFS.
long CountCellPaths(const MazeInstance& maze) {
  std::vector<std::vector<int>> nbrs(maze.num_cells());
  for (auto [a, b] : maze.Adjacency()) {
    nbrs[a].push_back(b);
    nbrs[b].push_back(a);
  }
  std::vector<bool> on_path(maze.num_cells(), false);
  std::function<long(int)> walk = [&](int c) -> long {
    if (c == maze.goal_cell()) return 1;
    on_path[c] = true;
    long total = 0;
    for (int n : nbrs[c]) {
      if (!on_path[n]) total += walk(n);
    }
    on_path[c] = false;
    return total;
  };
  return walk(maze.start_cell());
}

int ReachableCells(const MazeInstance& maze) {
  std::vector<std::vector<int>> nbrs(maze.num_cells());
  for (auto [a, b] : maze.Adjacency()) {
    nbrs[a].push_back(b);
    nbrs[b].push_back(a);
  }
  std::vector<bool> seen(maze.num_cells(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 0;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    ++count;
    for (int n : nbrs[c]) {
      if (!seen[n]) {
        seen[n] = true;
        stack.push_back(n);
      }
    }
  }
  return count;
}

TEST(MazeTest, SmallestMazeIsATree) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MazeInstance maze = GenerateMaze(2, 2, 0, seed);
    EXPECT_EQ(maze.Adjacency().size(), 3u);
    EXPECT_EQ(maze.num_walls(), 1);
    EXPECT_EQ(CountCellPaths(maze), 1);
  }
}

TEST(MazeTest, SpanningTreeOverRandomSizes) {
  PortableRng sizes(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 2 + static_cast<int>(sizes.Below(12));
    const int h = 2 + static_cast<int>(sizes.Below(12));
    const MazeInstance maze = GenerateMaze(w, h, 0, trial);
    EXPECT_EQ(static_cast<int>(maze.Adjacency().size()), w * h - 1);
    EXPECT_EQ(ReachableCells(maze), w * h);
  }
}

TEST(MazeTest, RemovalsKeepConnectivityAndAddCycles) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    long previous = 0;
    for (int removed : {0, 3, 6, 12}) {
      const MazeInstance maze = GenerateMaze(6, 6, removed, seed);
      EXPECT_EQ(ReachableCells(maze), 36);
      EXPECT_EQ(static_cast<int>(maze.Adjacency().size()), 35 + removed);
      EXPECT_EQ(static_cast<int>(maze.removed.size()), removed);
      const long paths = CountCellPaths(maze);
      EXPECT_GE(paths, previous);
      previous = paths;
    }
    EXPECT_GT(previous, 1) << "seed " << seed;
  }
}

TEST(MazeTest, FiftyByFiftyCounts) {
  const MazeInstance maze = GenerateMaze(50, 50, 100, 7);
  const PlanningProblem problem = MazeProblem(maze, MinLengthSpec(2));
  EXPECT_EQ(problem.regions.size(), 2500u);
  EXPECT_EQ(problem.adjacency->size(), 2499u + 100u);
  std::set<MazeWall> unique(maze.removed.begin(), maze.removed.end());
  EXPECT_EQ(unique.size(), 100u);
}

TEST(MazeTest, TooManyRemovalsRejected) {
  // A 3x3 grid has 12 interior walls, 8 of which are carved away.
  EXPECT_NO_THROW(GenerateMaze(3, 3, 4, 1));
  EXPECT_THROW(GenerateMaze(3, 3, 5, 1), std::invalid_argument);
  EXPECT_THROW(GenerateMaze(1, 5, 0, 1), std::invalid_argument);
}

TEST(MazeTest, DeterministicPerSeed) {
  const MazeInstance a = GenerateMaze(10, 10, 5, 42);
  const MazeInstance b = GenerateMaze(10, 10, 5, 42);
  EXPECT_EQ(ToJson(a).dump(), ToJson(b).dump());
  EXPECT_NE(ToJson(a).dump(), ToJson(GenerateMaze(10, 10, 5, 43)).dump());
  // Pinned layout: the generator must not drift across platforms or releases.
  EXPECT_EQ(RenderAscii(GenerateMaze(4, 3, 1, 5)),
            "+--+--+--+--+\n"
            "|     |   G |\n"
            "+  +  +  +  +\n"
            "|  |     |  |\n"
            "+  +--+--+  +\n"
            "|S          |\n"
            "+--+--+--+--+\n");
}

TEST(MazeTest, AsciiRenderingMatchesWalls) {
  const MazeInstance maze = GenerateMaze(5, 4, 2, 9);
  const std::string art = RenderAscii(maze);
  std::vector<std::string> lines;
  size_t start = 0;
  for (size_t end; (end = art.find('\n', start)) != std::string::npos; start = end + 1) {
    lines.push_back(art.substr(start, end - start));
  }
  ASSERT_EQ(lines.size(), 2u * 4 + 1);
  for (const std::string& line : lines) EXPECT_EQ(line.size(), 3u * 5 + 1);
  // Row y of cells is printed on line 2 * (height - 1 - y) + 1.
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x + 1 < 5; ++x) {
      const char c = lines[2 * (3 - y) + 1][3 * (x + 1)];
      EXPECT_EQ(c == '|', maze.HasWall({x, y, false}));
    }
  }
  EXPECT_EQ(lines[7][1], 'S');
  EXPECT_EQ(lines[1][13], 'G');
}

TEST(MazeTest, PlanningProblemAndOptimalRoute) {
  const MazeInstance maze = GenerateMaze(4, 4, 3, 11);
  const PlanningProblem problem = MazeProblem(maze, MinLengthSpec(2));
  for (auto [a, b] : *problem.adjacency) {
    EXPECT_TRUE(Intersects(problem.regions[a], problem.regions[b]));
  }
  EXPECT_TRUE(problem.regions[maze.start_cell()].Contains(problem.spec.q0));
  EXPECT_TRUE(problem.regions[maze.goal_cell()].Contains(problem.spec.qT));
  const PlanResult result = Plan(problem);
  ASSERT_TRUE(result.ok()) << result.diagnostics;
  EXPECT_TRUE(CheckTrajectory(problem, *result.trajectory).empty());
  const BruteForceResult opt = BruteForceOptimum(BuildGraph(problem), 100000);
  EXPECT_NEAR(result.rounding.best_cost, opt.cost, 1e-5 * opt.cost);
}

double LinfGap(const Box3& a, const Box3& b) {
  double gap = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    gap = std::max({gap, b.min()[k] - a.max()[k], a.min()[k] - b.max()[k]});
  }
  return gap;
}

double OverlapVolume(const Box3& a, const Box3& b) {
  double v = 1.0;
  for (int k = 0; k < 3; ++k) {
    v *= std::max(0.0, std::min(a.max()[k], b.max()[k]) - std::max(a.min()[k], b.min()[k]));
  }
  return v;
}

TEST(BuildingTest, GoalIsRoomAndBorderIsGrass) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const BuildingInstance b = GenerateBuilding(seed);
    EXPECT_EQ(b.cell(3, 2), CellKind::kRoom);
    for (int k = 0; k < 5; ++k) {
      EXPECT_EQ(b.cell(k, 0), CellKind::kGrass);
      EXPECT_EQ(b.cell(k, 4), CellKind::kGrass);
      EXPECT_EQ(b.cell(0, k), CellKind::kGrass);
      EXPECT_EQ(b.cell(4, k), CellKind::kGrass);
    }
    const bool opening = std::any_of(b.walls.begin(), b.walls.end(), [](const BuildingWall& w) {
      return w.exterior && w.kind != WallKind::kSolid;
    });
    EXPECT_TRUE(opening);
  }
}

TEST(BuildingTest, BoxesTileTheWorld) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const BuildingInstance b = GenerateBuilding(seed);
    std::vector<Box3> all = b.free_boxes;
    all.insert(all.end(), b.solids.begin(), b.solids.end());
    double volume = 0.0;
    for (size_t i = 0; i < all.size(); ++i) {
      volume += all[i].volume();
      EXPECT_TRUE(b.world().contains(all[i]));
      for (size_t j = i + 1; j < all.size(); ++j) EXPECT_LT(OverlapVolume(all[i], all[j]), 1e-12);
    }
    EXPECT_NEAR(volume, b.world().volume(), 1e-9 * b.world().volume());
  }
}

TEST(BuildingTest, RegionsKeepRobotClearance) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const BuildingInstance b = GenerateBuilding(seed);
    const double r = b.config.robot_radius;
    const Box3 inner(b.world().min().array() + r, b.world().max().array() - r);
    ASSERT_FALSE(b.regions.empty());
    for (const Box3& region : b.regions) {
      EXPECT_TRUE(inner.contains(region));
      EXPECT_GT(region.volume(), 0.0);
      for (const Box3& solid : b.solids) EXPECT_GE(LinfGap(region, solid), r - 1e-9);
    }
  }
}

TEST(BuildingTest, EndpointsConnected) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const BuildingInstance b = GenerateBuilding(seed);
    const PlanningProblem problem = BuildingProblem(b, MinLengthSpec(3));
    const int n = static_cast<int>(problem.regions.size());
    std::vector<std::vector<int>> nbrs(n);
    for (auto [i, j] : *problem.adjacency) {
      nbrs[i].push_back(j);
      nbrs[j].push_back(i);
    }
    std::vector<bool> seen(n, false);
    std::vector<int> stack;
    for (int i = 0; i < n; ++i) {
      if (problem.regions[i].Contains(b.q0)) {
        seen[i] = true;
        stack.push_back(i);
      }
    }
    ASSERT_FALSE(stack.empty()) << "seed " << seed;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (int j : nbrs[i]) {
        if (!seen[j]) {
          seen[j] = true;
          stack.push_back(j);
        }
      }
    }
    bool reached = false;
    for (int i = 0; i < n; ++i) reached = reached || (seen[i] && problem.regions[i].Contains(b.qT));
    EXPECT_TRUE(reached) << "seed " << seed;
  }
}

TEST(BuildingTest, DeterministicPerSeed) {
  EXPECT_EQ(ToJson(GenerateBuilding(5)).dump(), ToJson(GenerateBuilding(5)).dump());
  EXPECT_NE(ToJson(GenerateBuilding(5)).dump(), ToJson(GenerateBuilding(6)).dump());
}

TEST(BuildingTest, MinimumLengthFlight) {
  const BuildingInstance b = GenerateBuilding(2);
  const PlanningProblem problem = BuildingProblem(b, MinLengthSpec(3));
  const PlanResult result = Plan(problem);
  ASSERT_TRUE(result.ok()) << result.diagnostics;
  EXPECT_TRUE(CheckTrajectory(problem, *result.trajectory).empty());
  EXPECT_GE(result.rounding.best_cost, (b.qT - b.q0).norm() - 1e-6);
}

TEST(QuadrotorTest, SmoothFlightAroundACorner) {
  // An L-shaped hallway with a shortcut box that misses the goal.
  PlanningProblem problem;
  problem.regions = {
      ConvexSet::Box(Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(4, 1, 1)),
      ConvexSet::Box(Eigen::Vector3d(3, 0, 0), Eigen::Vector3d(4, 4, 1)),
      ConvexSet::Box(Eigen::Vector3d(0, 0.5, 0), Eigen::Vector3d(2, 3, 1)),
  };
  problem.spec = QuadrotorSpec();
  problem.spec.q0 = Eigen::Vector3d(0.5, 0.25, 0.5);
  problem.spec.qT = Eigen::Vector3d(3.5, 3.5, 0.5);
  const PlanResult result = Plan(problem);
  ASSERT_TRUE(result.ok()) << result.diagnostics;
  const std::vector<int>& path = result.path();
  EXPECT_EQ(std::vector<int>(path.begin() + 1, path.end() - 1), (std::vector<int>{0, 1}));
  for (const std::string& issue : CheckTrajectory(problem, *result.trajectory)) {
    ADD_FAILURE() << issue;
  }
  EXPECT_GT(result.rounding.best_cost, 0.0);
}

std::vector<int> Regions(const PlanResult& result) {
  const std::vector<int>& path = result.path();
  return std::vector<int>(path.begin() + 1, path.end() - 1);
}

PlanningSpec MinTimeSpec() {
  return gcs::MinTimeSpec(ConvexSet::Box(Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1)));
}

TEST(Fixture2dTest, BothRoutesExist) {
  const PlanningProblem problem = Fixture2d(MinLengthSpec(2));
  bool q0_inside = false, qT_inside = false;
  for (const ConvexSet& r : problem.regions) {
    q0_inside = q0_inside || r.Contains(problem.spec.q0);
    qT_inside = qT_inside || r.Contains(problem.spec.qT);
  }
  EXPECT_TRUE(q0_inside);
  EXPECT_TRUE(qT_inside);
  const GcsProblem graph = BuildGraph(problem);
  std::set<FixtureRoute> routes;
  for (const auto& path : EnumeratePaths(graph, 10000)) {
    routes.insert(ClassifyFixtureRoute(std::vector<int>(path.begin() + 1, path.end() - 1)));
  }
  EXPECT_TRUE(routes.count(FixtureRoute::kAbove));
  EXPECT_TRUE(routes.count(FixtureRoute::kBelow));
}

TEST(Fixture2dTest, ObjectivesPickDifferentRoutes) {
  const PlanningProblem shortest = Fixture2d(MinLengthSpec(2));
  const PlanResult length = Plan(shortest);
  ASSERT_TRUE(length.ok()) << length.diagnostics;
  EXPECT_EQ(ClassifyFixtureRoute(Regions(length)), FixtureRoute::kAbove);
  const BruteForceResult opt = BruteForceOptimum(BuildGraph(shortest), 10000);
  EXPECT_NEAR(length.rounding.best_cost, opt.cost, 1e-5 * opt.cost);

  const PlanningProblem fastest = Fixture2d(MinTimeSpec());
  const PlanResult time = Plan(fastest);
  ASSERT_TRUE(time.ok()) << time.diagnostics;
  EXPECT_EQ(ClassifyFixtureRoute(Regions(time)), FixtureRoute::kBelow);
  EXPECT_TRUE(CheckTrajectory(fastest, *time.trajectory).empty());

  const PlanningProblem smooth_problem = Fixture2d(
      SmoothMinTimeSpec(ConvexSet::Box(Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1))));
  const PlanResult smooth = Plan(smooth_problem);
  ASSERT_TRUE(smooth.ok()) << smooth.diagnostics;
  // Smoothing the fastest plan pushes it back over the obstacle.
  EXPECT_EQ(ClassifyFixtureRoute(Regions(smooth)), FixtureRoute::kAbove);
  for (const std::string& issue : CheckTrajectory(smooth_problem, *smooth.trajectory)) {
    ADD_FAILURE() << issue;
  }
}

TEST(TwoRouteFixtureTest, MinimumTimeMovesDiagonally) {
  const PlanningProblem problem = TwoRouteFixture(MinTimeSpec());
  const PlanResult result = Plan(problem);
  ASSERT_TRUE(result.ok()) << result.diagnostics;
  const Trajectory& traj = *result.trajectory;
  double top_speed = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double t = traj.start_time() + traj.duration() * k / 200.0;
    const Eigen::VectorXd v = traj.Velocity(t);
    top_speed = std::max(top_speed, v.norm());
    EXPECT_LE(v.cwiseAbs().maxCoeff(), 1.0 + 1e-6);
  }
  EXPECT_GE(top_speed, 1.35);
  EXPECT_NEAR(traj.duration(), 3.0, 1e-4);
}

TEST(UniqueRouteFixtureTest, SinglePath) {
  const GcsProblem p = UniqueRouteFixture();
  EXPECT_EQ(p.num_vertices(), 10);
  EXPECT_EQ(EnumeratePaths(p, 100).size(), 1u);
}

TEST(RandomGcsTest, SizeBoundsAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const GcsProblem p = RandomGcs(seed);
    EXPECT_LE(p.num_vertices(), 10);
    const auto paths = EnumeratePaths(p, 60);
    EXPECT_GE(paths.size(), 1u);
    EXPECT_EQ(ToJson(p).dump(), ToJson(RandomGcs(seed)).dump());
  }
  EXPECT_NE(ToJson(RandomGcs(1)).dump(), ToJson(RandomGcs(2)).dump());
}

}  // namespace
}  // namespace gcs
