#include "gcs/environments.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gcs/random.h"

namespace gcs {
namespace {

EdgeLength EuclideanLength(int dim) {
  Eigen::MatrixXd M(dim, 2 * dim);
  M << Eigen::MatrixXd::Identity(dim, dim), -Eigen::MatrixXd::Identity(dim, dim);
  return EdgeLength::L2Sum({{M, Eigen::VectorXd::Zero(dim)}});
}

EdgeLength SquaredEuclideanLength(int dim) {
  Eigen::MatrixXd M(dim, 2 * dim);
  M << Eigen::MatrixXd::Identity(dim, dim), -Eigen::MatrixXd::Identity(dim, dim);
  QuadOverLinTerm term;
  term.numerator = {M, Eigen::VectorXd::Zero(dim)};
  term.a = Eigen::VectorXd::Zero(2 * dim);
  term.a0 = 1.0;
  return EdgeLength::QuadOverLinSum({term});
}

nlohmann::json BoxToJson(const Box3& box) {
  return {{box.min().x(), box.min().y(), box.min().z()},
          {box.max().x(), box.max().y(), box.max().z()}};
}

}  // namespace

// ---------------------------------------------------------------------------
// Mazes

bool MazeInstance::HasWall(const MazeWall& w) const {
  if (w.north) return north_walls.at(w.y * width + w.x);
  return east_walls.at(w.y * (width - 1) + w.x);
}

int MazeInstance::num_walls() const {
  return static_cast<int>(std::count(east_walls.begin(), east_walls.end(), true) +
                          std::count(north_walls.begin(), north_walls.end(), true));
}

std::vector<std::pair<int, int>> MazeInstance::Adjacency() const {
  std::vector<std::pair<int, int>> pairs;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (x + 1 < width && !HasWall({x, y, false})) pairs.push_back({cell(x, y), cell(x + 1, y)});
      if (y + 1 < height && !HasWall({x, y, true})) pairs.push_back({cell(x, y), cell(x, y + 1)});
    }
  }
  return pairs;
}

MazeInstance GenerateMaze(int width, int height, int removed_walls, std::uint64_t seed) {
  if (width < 2 || height < 2) {
    throw std::invalid_argument("GenerateMaze: the maze must be at least 2x2");
  }
  if (removed_walls < 0) throw std::invalid_argument("GenerateMaze: negative removal count");
  MazeInstance maze;
  maze.width = width;
  maze.height = height;
  maze.seed = seed;
  maze.east_walls.assign((width - 1) * height, true);
  maze.north_walls.assign(width * (height - 1), true);

  PortableRng rng(seed);
  auto knock = [&](const MazeWall& w) {
    if (w.north) {
      maze.north_walls[w.y * width + w.x] = false;
    } else {
      maze.east_walls[w.y * (width - 1) + w.x] = false;
    }
  };

  std::vector<bool> visited(maze.num_cells(), false);
  std::vector<int> stack{maze.start_cell()};
  visited[maze.start_cell()] = true;
  struct Step {
    int cell;
    MazeWall wall;
  };
  std::vector<Step> options;
  while (!stack.empty()) {
    const int c = stack.back();
    const int x = c % width;
    const int y = c / width;
    options.clear();
    if (x + 1 < width && !visited[c + 1]) options.push_back({c + 1, {x, y, false}});
    if (y + 1 < height && !visited[c + width]) options.push_back({c + width, {x, y, true}});
    if (x > 0 && !visited[c - 1]) options.push_back({c - 1, {x - 1, y, false}});
    if (y > 0 && !visited[c - width]) options.push_back({c - width, {x, y - 1, true}});
    if (options.empty()) {
      stack.pop_back();
      continue;
    }
    const Step& step = options[rng.Below(options.size())];
    knock(step.wall);
    visited[step.cell] = true;
    stack.push_back(step.cell);
  }

  std::vector<MazeWall> standing;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (x + 1 < width && maze.HasWall({x, y, false})) standing.push_back({x, y, false});
      if (y + 1 < height && maze.HasWall({x, y, true})) standing.push_back({x, y, true});
    }
  }
  if (removed_walls > static_cast<int>(standing.size())) {
    throw std::invalid_argument("GenerateMaze: only " + std::to_string(standing.size()) +
                                " interior walls remain, cannot remove " +
                                std::to_string(removed_walls));
  }
  rng.Shuffle(standing);
  for (int k = 0; k < removed_walls; ++k) {
    knock(standing[k]);
    maze.removed.push_back(standing[k]);
  }
  return maze;
}

PlanningSpec MinLengthSpec(int dimension) {
  PlanningSpec spec;
  spec.a = 0.0;
  spec.b = 1.0;
  spec.c = 0.0;
  spec.degree = 1;
  spec.eta = 0;
  spec.q0 = Eigen::VectorXd::Zero(dimension);
  spec.qT = Eigen::VectorXd::Zero(dimension);
  return spec;
}

PlanningSpec MinTimeSpec(const ConvexSet& velocity_set) {
  PlanningSpec spec = MinLengthSpec(velocity_set.dimension());
  spec.a = 1.0;
  spec.b = 0.0;
  spec.velocity_set = velocity_set;
  return spec;
}

PlanningSpec SmoothMinTimeSpec(const ConvexSet& velocity_set) {
  PlanningSpec spec = MinTimeSpec(velocity_set);
  const int n = velocity_set.dimension();
  spec.eta = 2;
  spec.degree = 6;
  spec.qdot0 = Eigen::VectorXd::Zero(n);
  spec.qdotT = Eigen::VectorXd::Zero(n);
  spec.hdot_min = 0.1;
  spec.eps = 0.1;
  return spec;
}

PlanningProblem MazeProblem(const MazeInstance& maze, PlanningSpec spec) {
  PlanningProblem problem;
  for (int y = 0; y < maze.height; ++y) {
    for (int x = 0; x < maze.width; ++x) {
      problem.regions.push_back(
          ConvexSet::Box(Eigen::Vector2d(x, y), Eigen::Vector2d(x + 1, y + 1)));
    }
  }
  spec.q0 = Eigen::Vector2d(0.5, 0.5);
  spec.qT = Eigen::Vector2d(maze.width - 0.5, maze.height - 0.5);
  problem.spec = std::move(spec);
  problem.adjacency = maze.Adjacency();
  return problem;
}

std::string RenderAscii(const MazeInstance& maze) {
  std::string out;
  auto horizontal = [&](int y) {
    out += '+';
    for (int x = 0; x < maze.width; ++x) {
      const bool wall = y < 0 || y == maze.height - 1 || maze.HasWall({x, y, true});
      out += wall ? "--+" : "  +";
    }
    out += '\n';
  };
  for (int y = maze.height - 1; y >= 0; --y) {
    horizontal(y);
    out += '|';
    for (int x = 0; x < maze.width; ++x) {
      const int c = maze.cell(x, y);
      out += c == maze.start_cell() ? "S " : c == maze.goal_cell() ? "G " : "  ";
      const bool wall = x == maze.width - 1 || maze.HasWall({x, y, false});
      out += wall ? '|' : ' ';
    }
    out += '\n';
  }
  horizontal(-1);
  return out;
}

nlohmann::json ToJson(const MazeInstance& maze) {
  auto bits = [](const std::vector<bool>& v) {
    std::string s;
    for (bool b : v) s += b ? '1' : '0';
    return s;
  };
  nlohmann::json removed = nlohmann::json::array();
  for (const MazeWall& w : maze.removed) {
    removed.push_back({{"x", w.x}, {"y", w.y}, {"side", w.north ? "north" : "east"}});
  }
  return {{"width", maze.width},         {"height", maze.height},
          {"seed", maze.seed},           {"east_walls", bits(maze.east_walls)},
          {"north_walls", bits(maze.north_walls)}, {"removed", removed}};
}

// ---------------------------------------------------------------------------
// Buildings

const char* ToString(CellKind kind) {
  switch (kind) {
    case CellKind::kGrass: return "grass";
    case CellKind::kRoom: return "room";
    case CellKind::kTree: return "tree";
  }
  return "?";
}

const char* ToString(WallKind kind) {
  switch (kind) {
    case WallKind::kSolid: return "solid";
    case WallKind::kDoorway: return "doorway";
    case WallKind::kWindow: return "window";
    case WallKind::kTwoWindows: return "two_windows";
    case WallKind::kVerticalHalf: return "vertical_half";
    case WallKind::kHorizontalHalf: return "horizontal_half";
  }
  return "?";
}

Box3 BuildingInstance::world() const {
  const double side = config.grid * config.cell_side;
  return Box3(Eigen::Vector3d::Zero(), Eigen::Vector3d(side, side, config.height));
}

namespace {

constexpr double kGeomTol = 1e-9;

bool InteriorsOverlap(const Box3& a, const Box3& b) {
  for (int k = 0; k < 3; ++k) {
    if (std::min(a.max()[k], b.max()[k]) - std::max(a.min()[k], b.min()[k]) <= kGeomTol) {
      return false;
    }
  }
  return true;
}

Box3 Grown(const Box3& box, double r) {
  return Box3(box.min().array() - r, box.max().array() + r);
}

// A rectangle in the (lateral, z) plane of a wall slot.
struct Opening {
  double l0, l1, z0, z1;
};

std::vector<Opening> Openings(const BuildingWall& wall, const BuildingConfig& c, double a,
                              double b) {
  const double mid = 0.5 * (a + b);
  switch (wall.kind) {
    case WallKind::kSolid:
      return {};
    case WallKind::kDoorway:
      return {{mid - 0.5 * c.door_width, mid + 0.5 * c.door_width, 0.0, c.door_height}};
    case WallKind::kWindow:
      return {{mid - 0.5 * c.window_width, mid + 0.5 * c.window_width, c.window_bottom,
               c.window_top}};
    case WallKind::kTwoWindows: {
      std::vector<Opening> out;
      for (double center : {a + (b - a) / 3.0, a + 2.0 * (b - a) / 3.0}) {
        out.push_back({center - 0.5 * c.window_width, center + 0.5 * c.window_width,
                       c.window_bottom, c.window_top});
      }
      return out;
    }
    case WallKind::kVerticalHalf:
      return wall.high_side ? std::vector<Opening>{{a, mid, 0.0, c.height}}
                            : std::vector<Opening>{{mid, b, 0.0, c.height}};
    case WallKind::kHorizontalHalf:
      return {{a, b, 0.5 * c.height, c.height}};
  }
  return {};
}

class Decomposer {
 public:
  explicit Decomposer(BuildingInstance* building) : b_(*building), c_(building->config) {}

  void Run(PortableRng& rng) {
    const int g = c_.grid;
    for (int y = 0; y < g; ++y) {
      for (int x = 0; x < g; ++x) Cell(x, y, rng);
    }
    for (int y = 0; y < g; ++y) {
      for (int x = 0; x < g; ++x) {
        if (x + 1 < g) Slot(x, y, false);
        if (y + 1 < g) Slot(x, y, true);
      }
    }
    for (int y = 1; y < g; ++y) {
      for (int x = 1; x < g; ++x) Post(x, y);
    }
    for (int k = 0; k < static_cast<int>(b_.free_boxes.size()); ++k) Region(k);
  }

 private:
  double half() const { return 0.5 * c_.wall_thickness; }
  double lo(int i) const { return i * c_.cell_side + (i > 0 ? half() : 0.0); }
  double hi(int i) const { return (i + 1) * c_.cell_side - (i + 1 < c_.grid ? half() : 0.0); }

  Box3 Make(double x0, double x1, double y0, double y1, double z0, double z1) const {
    return Box3(Eigen::Vector3d(x0, y0, z0), Eigen::Vector3d(x1, y1, z1));
  }

  const BuildingWall* WallAt(int x, int y, bool north) const {
    for (const BuildingWall& w : b_.walls) {
      if (w.x == x && w.y == y && w.north == north) return &w;
    }
    return nullptr;
  }

  void Cell(int x, int y, PortableRng& rng) {
    const double x0 = lo(x), x1 = hi(x), y0 = lo(y), y1 = hi(y), h = c_.height;
    if (b_.cell(x, y) != CellKind::kTree) {
      b_.free_boxes.push_back(Make(x0, x1, y0, y1, 0, h));
      return;
    }
    const double s = c_.tree_side, m = c_.tree_margin;
    const double tx0 = x0 + m + rng.Uniform() * (x1 - x0 - 2 * m - s);
    const double ty0 = y0 + m + rng.Uniform() * (y1 - y0 - 2 * m - s);
    const double tx1 = tx0 + s, ty1 = ty0 + s;
    b_.solids.push_back(Make(tx0, tx1, ty0, ty1, 0, h));
    b_.free_boxes.push_back(Make(x0, tx0, y0, y1, 0, h));
    b_.free_boxes.push_back(Make(tx1, x1, y0, y1, 0, h));
    b_.free_boxes.push_back(Make(tx0, tx1, y0, ty0, 0, h));
    b_.free_boxes.push_back(Make(tx0, tx1, ty1, y1, 0, h));
  }

  // The strip of thickness wall_thickness along the east or north edge of
  // cell (x, y), split into solid pieces and openings when a wall stands
  // there.
  void Slot(int x, int y, bool north) {
    const double e = (north ? y + 1 : x + 1) * c_.cell_side;
    const int along = north ? x : y;
    const double a = lo(along), b = hi(along), h = c_.height;
    auto piece = [&](double l0, double l1, double z0, double z1) {
      return north ? Make(l0, l1, e - half(), e + half(), z0, z1)
                   : Make(e - half(), e + half(), l0, l1, z0, z1);
    };
    const BuildingWall* wall = WallAt(x, y, north);
    if (!wall) {
      b_.free_boxes.push_back(piece(a, b, 0, h));
      return;
    }
    const std::vector<Opening> openings = Openings(*wall, c_, a, b);
    std::vector<double> ls{a, b}, zs{0.0, h};
    for (const Opening& o : openings) {
      ls.insert(ls.end(), {o.l0, o.l1});
      zs.insert(zs.end(), {o.z0, o.z1});
      b_.free_boxes.push_back(piece(o.l0, o.l1, o.z0, o.z1));
    }
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    auto open = [&](double l, double z) {
      for (const Opening& o : openings) {
        if (o.l0 < l && l < o.l1 && o.z0 < z && z < o.z1) return true;
      }
      return false;
    };
    // Solid cells of the compressed grid, merged vertically per column.
    for (size_t i = 0; i + 1 < ls.size(); ++i) {
      const double lm = 0.5 * (ls[i] + ls[i + 1]);
      size_t k = 0;
      while (k + 1 < zs.size()) {
        if (open(lm, 0.5 * (zs[k] + zs[k + 1]))) {
          ++k;
          continue;
        }
        size_t top = k + 1;
        while (top + 1 < zs.size() && !open(lm, 0.5 * (zs[top] + zs[top + 1]))) ++top;
        b_.solids.push_back(piece(ls[i], ls[i + 1], zs[k], zs[top]));
        k = top;
      }
    }
  }

  // Post at the grid vertex (x * side, y * side); solid when a wall meets it.
  void Post(int x, int y) {
    const double px = x * c_.cell_side, py = y * c_.cell_side;
    const Box3 box = Make(px - half(), px + half(), py - half(), py + half(), 0, c_.height);
    const bool solid = WallAt(x - 1, y - 1, false) || WallAt(x - 1, y, false) ||
                       WallAt(x - 1, y - 1, true) || WallAt(x, y - 1, true);
    (solid ? b_.solids : b_.free_boxes).push_back(box);
  }

  // Clearance box for free box k: faces within reach of a solid or on the
  // world boundary are pulled in by the robot radius, then every face is
  // pushed out again as far as the inflated solids allow, up to twice the
  // radius beyond the free box, so that neighbors overlap.
  void Region(int k) {
    const Box3 free = b_.free_boxes[k];
    const Box3 world = b_.world();
    const double r = c_.robot_radius;
    Box3 core = free;
    for (int axis = 0; axis < 3; ++axis) {
      for (int side = 0; side < 2; ++side) {
        const double face = side ? free.max()[axis] : free.min()[axis];
        const bool boundary = side ? face >= world.max()[axis] - kGeomTol
                                   : face <= world.min()[axis] + kGeomTol;
        Box3 slab = Grown(free, r);
        if (side) {
          slab.min()[axis] = face;
        } else {
          slab.max()[axis] = face;
        }
        bool blocked = boundary;
        for (const Box3& s : b_.solids) blocked = blocked || InteriorsOverlap(slab, s);
        if (!blocked) continue;
        if (side) {
          core.max()[axis] -= r;
        } else {
          core.min()[axis] += r;
        }
      }
    }
    for (int axis = 0; axis < 3; ++axis) {
      if (core.max()[axis] - core.min()[axis] <= kGeomTol) return;
    }
    const Box3 allowed(world.min().array() + r, world.max().array() - r);
    for (int axis = 0; axis < 3; ++axis) {
      for (int side = 0; side < 2; ++side) {
        if (side) {
          double limit = std::min(free.max()[axis] + 2 * r, allowed.max()[axis]);
          for (const Box3& s : b_.solids) {
            const Box3 inflated = Grown(s, r);
            Box3 reach = core;
            reach.max()[axis] = limit;
            if (InteriorsOverlap(reach, inflated)) {
              limit = std::min(limit, inflated.min()[axis]);
            }
          }
          core.max()[axis] = std::max(core.max()[axis], limit);
        } else {
          double limit = std::max(free.min()[axis] - 2 * r, allowed.min()[axis]);
          for (const Box3& s : b_.solids) {
            const Box3 inflated = Grown(s, r);
            Box3 reach = core;
            reach.min()[axis] = limit;
            if (InteriorsOverlap(reach, inflated)) {
              limit = std::max(limit, inflated.max()[axis]);
            }
          }
          core.min()[axis] = std::min(core.min()[axis], limit);
        }
      }
    }
    b_.regions.push_back(core);
    b_.origin.push_back(k);
  }

  BuildingInstance& b_;
  const BuildingConfig& c_;
};

}  // namespace

BuildingInstance GenerateBuilding(std::uint64_t seed, const BuildingConfig& config) {
  const int g = config.grid;
  auto inner = [&](int x, int y) { return x > 0 && y > 0 && x + 1 < g && y + 1 < g; };
  if (g < 3 || !inner(config.goal_x, config.goal_y)) {
    throw std::invalid_argument("GenerateBuilding: the goal cell must be an inner cell");
  }
  BuildingInstance b;
  b.config = config;
  b.seed = seed;
  b.cells.assign(g * g, CellKind::kGrass);
  PortableRng rng(seed);

  std::vector<bool> marked(g * g, false);
  std::vector<int> queue{config.goal_y * g + config.goal_x};
  marked[queue.front()] = true;
  b.cells[queue.front()] = CellKind::kRoom;
  for (size_t head = 0; head < queue.size(); ++head) {
    const int x = queue[head] % g, y = queue[head] / g;
    const int nx[] = {x + 1, x, x - 1, x};
    const int ny[] = {y, y + 1, y, y - 1};
    for (int k = 0; k < 4; ++k) {
      if (!inner(nx[k], ny[k]) || marked[ny[k] * g + nx[k]]) continue;
      const int c = ny[k] * g + nx[k];
      marked[c] = true;
      if (rng.Uniform() < config.room_probability) {
        b.cells[c] = CellKind::kRoom;
        queue.push_back(c);
      }
    }
  }
  for (int y = 1; y + 1 < g; ++y) {
    for (int x = 1; x + 1 < g; ++x) {
      if (b.cell(x, y) != CellKind::kRoom && rng.Uniform() < config.tree_probability) {
        b.cells[y * g + x] = CellKind::kTree;
      }
    }
  }

  constexpr WallKind kExterior[] = {WallKind::kDoorway, WallKind::kWindow,
                                    WallKind::kTwoWindows, WallKind::kSolid};
  for (int y = 0; y < g; ++y) {
    for (int x = 0; x < g; ++x) {
      for (bool north : {false, true}) {
        const int ox = north ? x : x + 1, oy = north ? y + 1 : y;
        if (ox >= g || oy >= g) continue;
        const bool here = b.cell(x, y) == CellKind::kRoom;
        const bool there = b.cell(ox, oy) == CellKind::kRoom;
        if (!here && !there) continue;
        BuildingWall wall{x, y, north};
        if (here && there) {
          const int pick = static_cast<int>(rng.Below(4));
          if (pick == 3) continue;
          wall.kind = pick == 0   ? WallKind::kDoorway
                      : pick == 1 ? WallKind::kVerticalHalf
                                  : WallKind::kHorizontalHalf;
          wall.high_side = rng.Below(2) == 1;
        } else {
          wall.exterior = true;
          wall.kind = kExterior[rng.Below(4)];
        }
        b.walls.push_back(wall);
      }
    }
  }
  const bool sealed = std::none_of(b.walls.begin(), b.walls.end(), [](const BuildingWall& w) {
    return w.exterior && w.kind != WallKind::kSolid;
  });
  if (sealed) {
    for (BuildingWall& w : b.walls) {
      if (w.exterior) {
        w.kind = WallKind::kDoorway;
        break;
      }
    }
  }

  Decomposer(&b).Run(rng);
  const double side = config.cell_side;
  b.q0 = Eigen::Vector3d((config.start_x + 0.5) * side, (config.start_y + 0.5) * side,
                         config.hover_height);
  b.qT = Eigen::Vector3d((config.goal_x + 0.5) * side, (config.goal_y + 0.5) * side,
                         config.hover_height);
  return b;
}

PlanningProblem BuildingProblem(const BuildingInstance& building, PlanningSpec spec) {
  PlanningProblem problem;
  const auto& regions = building.regions;
  for (const Box3& box : regions) {
    problem.regions.push_back(ConvexSet::Box(box.min(), box.max()));
  }
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < static_cast<int>(regions.size()); ++i) {
    for (int j = i + 1; j < static_cast<int>(regions.size()); ++j) {
      const Box3 overlap = regions[i].intersection(regions[j]);
      if ((overlap.max() - overlap.min()).minCoeff() >= -kGeomTol) pairs.push_back({i, j});
    }
  }
  problem.adjacency = std::move(pairs);
  spec.q0 = building.q0;
  spec.qT = building.qT;
  problem.spec = std::move(spec);
  return problem;
}

PlanningSpec QuadrotorSpec() {
  PlanningSpec spec;
  spec.a = 1.0;
  spec.b = 1.0;
  spec.c = 0.0;
  spec.degree = 7;
  spec.eta = 4;
  spec.velocity_set =
      ConvexSet::Box(Eigen::Vector3d::Constant(-10.0), Eigen::Vector3d::Constant(10.0));
  spec.q0 = Eigen::Vector3d::Zero();
  spec.qT = Eigen::Vector3d::Zero();
  spec.qdot0 = Eigen::VectorXd(Eigen::Vector3d::Zero());
  spec.qdotT = Eigen::VectorXd(Eigen::Vector3d::Zero());
  spec.zero_derivative_orders = {2, 3};
  spec.hdot_min = 1e-3;
  return spec;
}

nlohmann::json ToJson(const BuildingInstance& b) {
  const BuildingConfig& c = b.config;
  nlohmann::json config = {
      {"grid", c.grid},
      {"cell_side", c.cell_side},
      {"height", c.height},
      {"robot_radius", c.robot_radius},
      {"wall_thickness", c.wall_thickness},
      {"room_probability", c.room_probability},
      {"tree_probability", c.tree_probability},
      {"tree_side", c.tree_side},
      {"tree_margin", c.tree_margin},
      {"door_width", c.door_width},
      {"door_height", c.door_height},
      {"window_width", c.window_width},
      {"window_bottom", c.window_bottom},
      {"window_top", c.window_top},
      {"hover_height", c.hover_height},
      {"start", {c.start_x, c.start_y}},
      {"goal", {c.goal_x, c.goal_y}},
  };
  nlohmann::json cells = nlohmann::json::array();
  for (CellKind k : b.cells) cells.push_back(ToString(k));
  nlohmann::json walls = nlohmann::json::array();
  for (const BuildingWall& w : b.walls) {
    walls.push_back({{"x", w.x},
                     {"y", w.y},
                     {"side", w.north ? "north" : "east"},
                     {"kind", ToString(w.kind)},
                     {"high_side", w.high_side},
                     {"exterior", w.exterior}});
  }
  auto boxes = [](const std::vector<Box3>& list) {
    nlohmann::json out = nlohmann::json::array();
    for (const Box3& box : list) out.push_back(BoxToJson(box));
    return out;
  };
  return {{"seed", b.seed},
          {"config", config},
          {"cells", cells},
          {"walls", walls},
          {"solids", boxes(b.solids)},
          {"free_boxes", boxes(b.free_boxes)},
          {"regions", boxes(b.regions)},
          {"origin", b.origin},
          {"q0", {b.q0.x(), b.q0.y(), b.q0.z()}},
          {"qT", {b.qT.x(), b.qT.y(), b.qT.z()}}};
}

// ---------------------------------------------------------------------------
// Fixtures

ConvexSet Corridor2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double width,
                     double lo, double hi) {
  const Eigen::Vector2d u = (b - a).normalized();
  const Eigen::Vector2d n(-u.y(), u.x());
  const double w = 0.5 * width;
  Eigen::MatrixXd A(8, 2);
  Eigen::VectorXd rhs(8);
  A << n.transpose(), -n.transpose(), u.transpose(), -u.transpose(), 1, 0, -1, 0, 0, 1, 0, -1;
  rhs << n.dot(a) + w, -n.dot(a) + w, u.dot(b) + w, -u.dot(a) + w, hi, -lo, hi, -lo;
  return ConvexSet::HPolytope(A, rhs);
}

PlanningProblem Fixture2d(PlanningSpec spec) {
  PlanningProblem problem;
  // Left column bottom to top, then top strip left to right, in overlapping
  // pieces about as long as the corridors.
  for (int k = 0; k < 3; ++k) {
    problem.regions.push_back(
        ConvexSet::Box(Eigen::Vector2d(0, 1.6 * k), Eigen::Vector2d(0.8, 1.6 * k + 1.8)));
  }
  for (int k = 0; k < 3; ++k) {
    problem.regions.push_back(
        ConvexSet::Box(Eigen::Vector2d(1.6 * k, 4.2), Eigen::Vector2d(1.6 * k + 1.8, 5)));
  }
  const Eigen::Vector2d zigzag[] = {{0.2, 0.2}, {2.0, 2.0}, {3.4, 0.6},
                                    {4.6, 1.8}, {3.0, 3.4}, {4.8, 4.8}};
  for (int k = 0; k + 1 < 6; ++k) {
    problem.regions.push_back(Corridor2d(zigzag[k], zigzag[k + 1], 0.4, 0.0, 5.0));
  }
  spec.q0 = Eigen::Vector2d(0.2, 0.2);
  spec.qT = Eigen::Vector2d(4.8, 4.8);
  problem.spec = std::move(spec);
  return problem;
}

const char* ToString(FixtureRoute route) {
  switch (route) {
    case FixtureRoute::kAbove: return "above";
    case FixtureRoute::kBelow: return "below";
  }
  return "?";
}

FixtureRoute ClassifyFixtureRoute(const std::vector<int>& regions) {
  for (int r : regions) {
    if (r > kFixtureFirstCorridor && r < kFixtureFirstCorridor + 4) return FixtureRoute::kBelow;
  }
  return FixtureRoute::kAbove;
}

PlanningProblem TwoRouteFixture(PlanningSpec spec) {
  PlanningProblem problem;
  problem.regions.push_back(ConvexSet::Box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 4)));
  problem.regions.push_back(ConvexSet::Box(Eigen::Vector2d(0, 3), Eigen::Vector2d(4, 4)));
  problem.regions.push_back(
      Corridor2d(Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(3.5, 3.5), 0.8, 0.0, 4.0));
  spec.q0 = Eigen::Vector2d(0.5, 0.5);
  spec.qT = Eigen::Vector2d(3.5, 3.5);
  problem.spec = std::move(spec);
  return problem;
}

GcsProblem UniqueRouteFixture() {
  GcsProblem p;
  const EdgeLength length = EuclideanLength(2);
  const int s = p.AddVertex("sigma", ConvexSet::Point(Eigen::Vector2d(0, 0)));
  std::vector<int> r(9, -1);
  for (int k = 1; k <= 8; ++k) {
    r[k] = p.AddVertex(std::to_string(k),
                       ConvexSet::Box(Eigen::Vector2d(k, 0), Eigen::Vector2d(k + 1.5, 1)));
  }
  const int t = p.AddVertex("tau", ConvexSet::Point(Eigen::Vector2d(4, 1)));
  // 2 and 3 only meet through 6; everything hanging off 6 besides them is a
  // closed pocket.
  const std::pair<int, int> links[] = {{2, 6}, {6, 3}, {6, 7}, {6, 8}, {7, 8},
                                       {7, 1}, {8, 4}, {1, 4}, {4, 5}, {5, 8}};
  for (auto [a, b] : links) {
    p.AddEdge(r[a], r[b], length);
    p.AddEdge(r[b], r[a], length);
  }
  p.AddEdge(s, r[2], length);
  p.AddEdge(r[3], t, length);
  p.SetSource(s);
  p.SetTarget(t);
  return p;
}

GcsProblem RandomGcs(std::uint64_t seed, const RandomGcsOptions& options) {
  if (options.inner < 1) throw std::invalid_argument("RandomGcs: need an inner vertex");
  PortableRng rng(seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.Uniform(); };
  while (true) {
    GcsProblem p;
    const EdgeLength length =
        rng.Uniform() < 0.3 ? SquaredEuclideanLength(2) : EuclideanLength(2);
    const int s = p.AddVertex(
        "s", ConvexSet::Point(Eigen::Vector2d(uniform(0, 2), uniform(0, 2))));
    const int t = p.AddVertex(
        "t", ConvexSet::Point(Eigen::Vector2d(uniform(8, 10), uniform(8, 10))));
    std::vector<int> ids;
    for (int i = 0; i < options.inner; ++i) {
      const Eigen::Vector2d corner(uniform(0, 9), uniform(0, 9));
      const std::string name = "v" + std::to_string(i);
      if (rng.Uniform() < 0.25) {
        Eigen::Vector2d a = corner, b = corner + Eigen::Vector2d(uniform(0.8, 2), uniform(-0.5, 0.5)),
                        c = corner + Eigen::Vector2d(uniform(-0.5, 0.5), uniform(0.8, 2));
        if ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x() < 0) std::swap(b, c);
        Eigen::MatrixXd A(3, 2);
        Eigen::VectorXd rhs(3);
        const Eigen::Vector2d pts[] = {a, b, c};
        for (int k = 0; k < 3; ++k) {
          const Eigen::Vector2d d = pts[(k + 1) % 3] - pts[k];
          const Eigen::Vector2d n(d.y(), -d.x());
          A.row(k) = n.transpose();
          rhs[k] = n.dot(pts[k]);
        }
        ids.push_back(p.AddVertex(name, ConvexSet::HPolytope(A, rhs)));
      } else {
        const Eigen::Vector2d size(uniform(0.5, 2), uniform(0.5, 2));
        ids.push_back(p.AddVertex(name, ConvexSet::Box(corner, corner + size)));
      }
    }
    for (int i = 0; i < options.inner; ++i) {
      if (i == 0 || rng.Uniform() < 0.4) p.AddEdge(s, ids[i], length);
      if (i + 1 == options.inner || rng.Uniform() < 0.4) p.AddEdge(ids[i], t, length);
      for (int j = 0; j < options.inner; ++j) {
        if (i != j && rng.Uniform() < options.edge_probability) p.AddEdge(ids[i], ids[j], length);
      }
    }
    p.SetSource(s);
    p.SetTarget(t);
    try {
      if (!EnumeratePaths(p, options.max_paths).empty()) return p;
    } catch (const std::length_error&) {
    }
  }
}

}  // namespace gcs
