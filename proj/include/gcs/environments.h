#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "gcs/gcs_core.h"
#include "gcs/planner.h"
#include "json.hpp"

namespace gcs {

// ---------------------------------------------------------------------------
// Mazes

/// Interior wall on the east side (`north == false`) or north side of cell
/// (x, y).
struct MazeWall {
  int x = 0;
  int y = 0;
  bool north = false;

  auto operator<=>(const MazeWall&) const = default;
};

/// Grid of width x height unit cells; cell (x, y) has index y * width + x and
/// occupies [x, x+1] x [y, y+1]. The start is cell (0, 0) and the goal cell
/// (width-1, height-1).
struct MazeInstance {
  int width = 0;
  int height = 0;
  std::uint64_t seed = 0;
  /// east_walls[y * (width-1) + x] separates (x, y) from (x+1, y).
  std::vector<bool> east_walls;
  /// north_walls[y * width + x] separates (x, y) from (x, y+1).
  std::vector<bool> north_walls;
  /// Walls knocked down after the spanning tree was carved, in removal order.
  std::vector<MazeWall> removed;

  int num_cells() const { return width * height; }
  int cell(int x, int y) const { return y * width + x; }
  int start_cell() const { return 0; }
  int goal_cell() const { return num_cells() - 1; }
  bool HasWall(const MazeWall& w) const;
  /// Unordered pairs (a < b) of neighboring cells with no wall between them.
  std::vector<std::pair<int, int>> Adjacency() const;
  int num_walls() const;
};

/// Perfect maze carved by a randomized depth-first search from the start cell,
/// after which `removed_walls` of the remaining interior walls are knocked
/// down uniformly without repetition. Throws std::invalid_argument when the
/// size is below 2x2 or fewer walls remain than requested.
MazeInstance GenerateMaze(int width, int height, int removed_walls, std::uint64_t seed);

/// One closed unit box per cell, connectivity from the wall layout, q0 and qT
/// at the start and goal cell centers. Every other field of `spec` is kept.
PlanningProblem MazeProblem(const MazeInstance& maze, PlanningSpec spec);

/// Rows from the top, "+--+" corners and "|" walls.
std::string RenderAscii(const MazeInstance& maze);

nlohmann::json ToJson(const MazeInstance& maze);

/// b = 1, a = c = 0, degree 1, eta 0 in the given dimension (q0, qT zero).
PlanningSpec MinLengthSpec(int dimension);

/// Minimum duration (a = 1, b = 0) under the given velocity set, degree 1.
PlanningSpec MinTimeSpec(const ConvexSet& velocity_set);

/// MinTimeSpec made C^2 at degree 6, starting and ending at rest, with the
/// derivative regularizer at weight 0.1 and hdot_min 0.1.
PlanningSpec SmoothMinTimeSpec(const ConvexSet& velocity_set);

// ---------------------------------------------------------------------------
// Buildings

enum class CellKind { kGrass, kRoom, kTree };
const char* ToString(CellKind kind);

enum class WallKind {
  kSolid,
  kDoorway,
  kWindow,
  kTwoWindows,
  kVerticalHalf,
  kHorizontalHalf,
};
const char* ToString(WallKind kind);

/// A wall on the east (north == false) or north side of grid cell (x, y).
struct BuildingWall {
  int x = 0;
  int y = 0;
  bool north = false;
  WallKind kind = WallKind::kSolid;
  /// For half walls along the edge: the solid half is the one at the larger
  /// coordinate.
  bool high_side = false;
  /// Separates a room from the outside rather than two rooms.
  bool exterior = false;
};

/// Dimensions and probabilities left open by the generator description; every
/// length is in world units.
struct BuildingConfig {
  int grid = 5;
  double cell_side = 5.0;
  double height = 3.0;
  double robot_radius = 0.2;
  double wall_thickness = 0.2;
  double room_probability = 0.5;
  double tree_probability = 0.5;
  double tree_side = 1.0;
  /// Clearance between a tree and the edge of its cell.
  double tree_margin = 1.0;
  double door_width = 1.5;
  double door_height = 2.2;
  double window_width = 1.2;
  double window_bottom = 1.0;
  double window_top = 2.0;
  double hover_height = 1.0;
  int start_x = 0;
  int start_y = 0;
  int goal_x = 3;
  int goal_y = 2;
};

using Box3 = Eigen::AlignedBox3d;

struct BuildingInstance {
  BuildingConfig config;
  std::uint64_t seed = 0;
  /// cells[y * grid + x].
  std::vector<CellKind> cells;
  std::vector<BuildingWall> walls;
  /// Obstacles: wall pieces, corner posts and tree trunks.
  std::vector<Box3> solids;
  /// Non-overlapping boxes that together with `solids` tile the world.
  std::vector<Box3> free_boxes;
  /// Boxes of robot-center positions with clearance robot_radius from every
  /// solid and from the world boundary; regions[k] lies near free_boxes[origin[k]].
  std::vector<Box3> regions;
  std::vector<int> origin;
  Eigen::Vector3d q0;
  Eigen::Vector3d qT;

  CellKind cell(int x, int y) const { return cells[y * config.grid + x]; }
  Box3 world() const;
};

/// Grows the building outward from the goal room over the inner cells,
/// plants trees outside, picks openings for every wall and emits the exact box
/// decomposition. At least one exterior wall always has an opening.
BuildingInstance GenerateBuilding(std::uint64_t seed, const BuildingConfig& config = {});

/// Regions as boxes with adjacency from box overlap; q0 and qT are taken from
/// the building.
PlanningProblem BuildingProblem(const BuildingInstance& building, PlanningSpec spec);

/// Equal time and length weights, degree 7, C^4, velocity box [-10, 10]^3,
/// rest-to-rest with vanishing second and third derivatives, hdot_min 1e-3.
PlanningSpec QuadrotorSpec();

nlohmann::json ToJson(const BuildingInstance& building);

// ---------------------------------------------------------------------------
// Fixtures

/// Hand-built free space of a 5x5 world with q0 = (0.2, 0.2) and
/// qT = (4.8, 4.8). Regions 0..2 (a left column) and 3..5 (a top strip) form
/// the route above the central obstacle; regions 6..10 are narrow diagonal
/// corridors zig-zagging below it. The above route is shorter, the below route
/// is faster under a box velocity limit.
PlanningProblem Fixture2d(PlanningSpec spec);
inline constexpr int kFixtureFirstCorridor = 6;

enum class FixtureRoute { kAbove, kBelow };
const char* ToString(FixtureRoute route);
/// A list of visited Fixture2d regions passes below the obstacle when it
/// enters one of the three middle corridors; the outer two touch the above
/// route near the endpoints.
FixtureRoute ClassifyFixtureRoute(const std::vector<int>& regions);

/// 4x4 world, q0 = (0.5, 0.5), qT = (3.5, 3.5): an L-shaped route along the
/// left and top edges and a diagonal band from corner to corner.
PlanningProblem TwoRouteFixture(PlanningSpec spec);

/// Rectangular corridor of the given width around segment ab, extended by
/// half the width past both ends and clipped to [lo, hi]^2.
ConvexSet Corridor2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double width,
                     double lo, double hi);

/// Eight regions wired so that only one sigma-tau route exists; every other
/// edge lies on no simple path.
GcsProblem UniqueRouteFixture();

struct RandomGcsOptions {
  /// Vertices besides source and target.
  int inner = 6;
  double edge_probability = 0.3;
  /// Instances with more simple paths (or none) are redrawn.
  long max_paths = 60;
};

/// 2D instance with box or triangle sets, point source and target, and
/// Euclidean or squared-Euclidean edge lengths. Pure function of the seed.
GcsProblem RandomGcs(std::uint64_t seed, const RandomGcsOptions& options = {});

}  // namespace gcs
