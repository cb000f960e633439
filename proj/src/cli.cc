#include "gcs/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

namespace gcs {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTightGap = 1e-4;

nlohmann::json Number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

bool Infeasible(PlanStatus status) {
  return status == PlanStatus::kGraphDisconnected ||
         status == PlanStatus::kRelaxationInfeasible ||
         status == PlanStatus::kRoundingInfeasible;
}

std::string Fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", x);
  return buf;
}

}  // namespace

double OptimalityGap(double optimal_cost, double rounded_cost) {
  return RelaxationGap(optimal_cost, rounded_cost);
}

RunRecord MakeRunRecord(std::string instance, std::uint64_t seed, const PlanOptions& options,
                        const PlanResult& result) {
  RunRecord r;
  r.instance = std::move(instance);
  r.seed = seed;
  r.preprocess = options.preprocess;
  r.two_cycle = options.two_cycle;
  r.rounding_paths = options.rounding.max_paths;
  r.rounding_trials = options.rounding.max_trials;
  r.status = result.status;
  r.diagnostics = result.diagnostics;
  r.timings = result.timings;
  r.vertices = result.graph.num_vertices();
  r.edges = result.graph.num_edges();
  r.edges_removed = static_cast<int>(result.preprocess.removed.size());
  r.paths_sampled = static_cast<int>(result.rounding.paths.size());
  r.c_relax = result.flows.optimal() ? result.flows.cost : kNaN;
  r.c_round = result.rounding.found() ? result.rounding.best_cost : kNaN;
  r.delta_relax = result.rounding.found() ? result.rounding.relaxation_gap : kNaN;
  return r;
}

nlohmann::json ToJson(const RunRecord& record, bool timings) {
  nlohmann::json j = {
      {"instance", record.instance},
      {"seed", record.seed},
      {"preprocess", record.preprocess},
      {"two_cycle", record.two_cycle},
      {"rounding_paths", record.rounding_paths},
      {"rounding_trials", record.rounding_trials},
      {"status", ToString(record.status)},
      {"diagnostics", record.diagnostics},
      {"vertices", record.vertices},
      {"edges", record.edges},
      {"edges_removed", record.edges_removed},
      {"paths_sampled", record.paths_sampled},
      {"c_relax", Number(record.c_relax)},
      {"c_round", Number(record.c_round)},
      {"delta_relax", Number(record.delta_relax)},
      {"trajectory_issues", record.trajectory_issues},
  };
  if (record.c_opt) j["c_opt"] = Number(*record.c_opt);
  if (record.delta_opt) j["delta_opt"] = Number(*record.delta_opt);
  if (record.oracle_paths) j["oracle_paths"] = *record.oracle_paths;
  if (timings) {
    const PhaseTimings& t = record.timings;
    j["timings"] = {{"graph", t.graph},
                    {"preprocess", t.preprocess},
                    {"relaxation", t.relaxation},
                    {"rounding", t.rounding},
                    {"reconstruction", t.reconstruction},
                    {"total", t.total()}};
  }
  return j;
}

Histogram GapHistogram(const std::vector<double>& values) {
  Histogram h;
  h.edges.push_back(0.0);
  for (int k = -8; k <= -1; ++k) h.edges.push_back(std::pow(10.0, k));
  h.edges.push_back(std::numeric_limits<double>::infinity());
  h.counts.assign(h.edges.size() - 1, 0);
  for (double v : values) {
    if (std::isnan(v)) continue;
    const auto it = std::upper_bound(h.edges.begin(), h.edges.end(), std::max(v, 0.0));
    const int bin = static_cast<int>(it - h.edges.begin()) - 1;
    ++h.counts[std::clamp(bin, 0, static_cast<int>(h.counts.size()) - 1)];
  }
  return h;
}

Distribution Summarize(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  Distribution d;
  d.histogram = GapHistogram(values);
  d.count = static_cast<int>(values.size());
  if (values.empty()) return d;
  std::sort(values.begin(), values.end());
  auto rank = [&](double q) {
    const int k = static_cast<int>(std::ceil(q * d.count)) - 1;
    return values[std::clamp(k, 0, d.count - 1)];
  };
  double sum = 0.0;
  for (double v : values) sum += v;
  d.mean = sum / d.count;
  d.median = rank(0.5);
  d.p90 = rank(0.9);
  d.max = values.back();
  return d;
}

BenchSummary Summarize(const std::vector<RunRecord>& records) {
  BenchSummary s;
  s.instances = static_cast<int>(records.size());
  std::vector<double> relax, opt, seconds;
  for (const RunRecord& r : records) {
    if (r.status == PlanStatus::kSuccess) {
      ++s.successes;
      relax.push_back(r.delta_relax);
      if (r.delta_relax <= kTightGap) ++s.tight;
      if (r.delta_opt) opt.push_back(*r.delta_opt);
    } else {
      ++s.failures;
    }
    seconds.push_back(r.timings.total());
  }
  s.delta_relax = Summarize(relax);
  if (!opt.empty()) s.delta_opt = Summarize(opt);
  s.total_seconds = Summarize(seconds);
  return s;
}

nlohmann::json ToJson(const Distribution& d) {
  nlohmann::json edges = nlohmann::json::array();
  for (double e : d.histogram.edges) edges.push_back(Number(e));
  return {{"count", d.count},       {"mean", Number(d.mean)},
          {"median", Number(d.median)}, {"p90", Number(d.p90)},
          {"max", Number(d.max)},   {"histogram", {{"edges", edges}, {"counts", d.histogram.counts}}}};
}

nlohmann::json ToJson(const BenchSummary& s, bool timings) {
  nlohmann::json j = {{"instances", s.instances},
                      {"successes", s.successes},
                      {"failures", s.failures},
                      {"tight", s.tight},
                      {"delta_relax", ToJson(s.delta_relax)}};
  if (s.delta_opt) j["delta_opt"] = ToJson(*s.delta_opt);
  if (timings) {
    nlohmann::json t = ToJson(s.total_seconds);
    t.erase("histogram");
    j["total_seconds"] = t;
  }
  return j;
}

std::vector<Eigen::Vector2d> Polygon2d(const ConvexSet& set) {
  if (set.dimension() != 2) throw std::invalid_argument("Polygon2d: set is not 2D");
  if (auto p = set.point()) return {Eigen::Vector2d((*p)[0], (*p)[1])};
  const Eigen::Vector2d lo = set.lower(), hi = set.upper();
  std::vector<Eigen::Vector2d> poly = {lo, {hi[0], lo[1]}, hi, {lo[0], hi[1]}};
  if (set.kind() == ConvexSet::Kind::kBox) return poly;
  // Clip the bounding box by every half plane.
  for (int i = 0; i < set.A().rows() && !poly.empty(); ++i) {
    const Eigen::Vector2d a = set.A().row(i).transpose();
    const double b = set.b()[i];
    std::vector<Eigen::Vector2d> out;
    for (size_t k = 0; k < poly.size(); ++k) {
      const Eigen::Vector2d& p = poly[k];
      const Eigen::Vector2d& q = poly[(k + 1) % poly.size()];
      const double fp = a.dot(p) - b, fq = a.dot(q) - b;
      if (fp <= 0.0) out.push_back(p);
      if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
        out.push_back(p + (q - p) * (fp / (fp - fq)));
      }
    }
    poly = std::move(out);
  }
  return poly;
}

std::string RenderSvg(const PlanningProblem& problem, const Trajectory* trajectory,
                      const SvgOptions& options) {
  if (problem.spec.dimension() != 2) {
    throw std::invalid_argument("render: only 2D problems can be drawn, this one is " +
                                std::to_string(problem.spec.dimension()) + "D");
  }
  Eigen::Vector2d lo = problem.spec.q0, hi = problem.spec.q0;
  auto grow = [&](const Eigen::Vector2d& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  };
  grow(problem.spec.qT);
  for (const ConvexSet& r : problem.regions) {
    grow(r.lower());
    grow(r.upper());
  }
  const double margin = 0.05 * std::max(1e-9, (hi - lo).maxCoeff());
  lo.array() -= margin;
  hi.array() += margin;
  const double scale = options.pixels_per_unit;
  auto X = [&](double x) { return Fmt((x - lo[0]) * scale); };
  auto Y = [&](double y) { return Fmt((hi[1] - y) * scale); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << Fmt((hi[0] - lo[0]) * scale) << "\" height=\"" << Fmt((hi[1] - lo[1]) * scale)
      << "\">\n";
  if (options.shade_obstacles) {
    svg << "<rect class=\"obstacle\" x=\"0\" y=\"0\" width=\"" << Fmt((hi[0] - lo[0]) * scale)
        << "\" height=\"" << Fmt((hi[1] - lo[1]) * scale) << "\" fill=\"#9a9a9a\"/>\n";
  }
  const char* region_style = "fill=\"#cfe6f7\" stroke=\"#5b9bd5\" stroke-width=\"1\"";
  for (const ConvexSet& r : problem.regions) {
    if (r.kind() == ConvexSet::Kind::kBox) {
      svg << "<rect class=\"region\" x=\"" << X(r.lower()[0]) << "\" y=\"" << Y(r.upper()[1])
          << "\" width=\"" << Fmt((r.upper()[0] - r.lower()[0]) * scale) << "\" height=\""
          << Fmt((r.upper()[1] - r.lower()[1]) * scale) << "\" " << region_style << "/>\n";
    } else {
      svg << "<polygon class=\"region\" points=\"";
      const auto poly = Polygon2d(r);
      for (size_t k = 0; k < poly.size(); ++k) {
        svg << (k ? " " : "") << X(poly[k][0]) << "," << Y(poly[k][1]);
      }
      svg << "\" " << region_style << "/>\n";
    }
  }
  if (trajectory) {
    svg << "<polyline class=\"trajectory\" fill=\"none\" stroke=\"#c0392b\" "
           "stroke-width=\"2\" points=\"";
    const int n = std::max(1, options.samples_per_segment);
    bool first = true;
    for (int seg = 0; seg < trajectory->num_segments(); ++seg) {
      for (int k = (seg == 0 ? 0 : 1); k <= n; ++k) {
        const Eigen::VectorXd p = trajectory->ShapeAt(seg + static_cast<double>(k) / n);
        svg << (first ? "" : " ") << X(p[0]) << "," << Y(p[1]);
        first = false;
      }
    }
    svg << "\"/>\n";
    for (const TrajectorySegment& seg : trajectory->segments()) {
      for (int k = 0; k <= seg.r.degree(); ++k) {
        const Eigen::VectorXd p = seg.r.control_point(k);
        svg << "<circle class=\"control-point\" cx=\"" << X(p[0]) << "\" cy=\"" << Y(p[1])
            << "\" r=\"3\" fill=\"#ffffff\" stroke=\"#c0392b\"/>\n";
      }
    }
  }
  for (const auto& [name, q] : {std::pair{"start", problem.spec.q0}, std::pair{"goal", problem.spec.qT}}) {
    svg << "<circle class=\"" << name << "\" cx=\"" << X(q[0]) << "\" cy=\"" << Y(q[1])
        << "\" r=\"5\" fill=\"#222222\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

PlanningSpec ObjectiveSpec(const std::string& objective, int dimension) {
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(dimension);
  const ConvexSet unit_box = ConvexSet::Box(-one, one);
  if (objective.empty() || objective == "length") return MinLengthSpec(dimension);
  if (objective == "time") return MinTimeSpec(unit_box);
  if (objective == "smooth") return SmoothMinTimeSpec(unit_box);
  if (objective == "quadrotor") {
    if (dimension != 3) throw std::invalid_argument("objective quadrotor needs a 3D instance");
    return QuadrotorSpec();
  }
  throw std::invalid_argument("unknown objective '" + objective + "'");
}

BenchInstance Generate(const GeneratorSpec& spec, std::uint64_t seed) {
  BenchInstance inst;
  inst.seed = seed;
  const std::string objective = spec.objective.empty() ? "length" : spec.objective;
  const std::string suffix = ":objective=" + objective + ":seed=" + std::to_string(seed);
  if (spec.name == "maze") {
    const MazeInstance maze = GenerateMaze(spec.width, spec.height, spec.removed, seed);
    inst.problem = MazeProblem(maze, ObjectiveSpec(objective, 2));
    inst.descriptor = "maze:" + std::to_string(spec.width) + "x" + std::to_string(spec.height) +
                      ":removed=" + std::to_string(spec.removed) + suffix;
  } else if (spec.name == "building") {
    inst.problem = BuildingProblem(GenerateBuilding(seed), ObjectiveSpec(objective, 3));
    inst.descriptor = "building" + suffix;
  } else if (spec.name == "fixture2d") {
    inst.problem = Fixture2d(ObjectiveSpec(objective, 2));
    inst.descriptor = "fixture2d" + suffix;
  } else if (spec.name == "two-route") {
    inst.problem = TwoRouteFixture(ObjectiveSpec(objective, 2));
    inst.descriptor = "two-route" + suffix;
  } else if (spec.name == "random") {
    inst.graph = RandomGcs(seed, spec.random);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "random:inner=%d:p=%g:seed=", spec.random.inner,
                  spec.random.edge_probability);
    inst.descriptor = buf + std::to_string(seed);
    return inst;
  } else {
    throw std::invalid_argument("unknown generator '" + spec.name + "'");
  }
  inst.graph = BuildGraph(*inst.problem);
  return inst;
}

InstanceRun RunInstance(const BenchInstance& instance, const RunSettings& settings) {
  InstanceRun run;
  PlanOptions options = settings.options;
  options.rounding.seed = instance.seed;
  try {
    run.result = instance.problem ? Plan(*instance.problem, options)
                                  : SolveGraph(instance.graph, options);
    run.record = MakeRunRecord(instance.descriptor, instance.seed, options, run.result);
    if (instance.problem && run.result.trajectory) {
      const Trajectory reloaded = TrajectoryFromJson(ToJson(*run.result.trajectory));
      run.trajectory_issues = CheckTrajectory(*instance.problem, reloaded);
      run.record.trajectory_issues = static_cast<int>(run.trajectory_issues.size());
    }
  } catch (const std::exception& e) {
    run.record = MakeRunRecord(instance.descriptor, instance.seed, options, run.result);
    run.record.status = PlanStatus::kSolverFailure;
    run.record.diagnostics = std::string("error: ") + e.what();
    return run;
  }
  if (settings.oracle_limit) {
    try {
      const BruteForceResult opt = BruteForceOptimum(instance.graph, *settings.oracle_limit,
                                                     options.rounding.threads);
      run.record.c_opt = opt.cost;
      run.record.oracle_paths = opt.paths_evaluated;
      if (run.result.rounding.found()) {
        run.record.delta_opt = OptimalityGap(opt.cost, run.result.rounding.best_cost);
      }
    } catch (const std::length_error&) {
      run.record.diagnostics += (run.record.diagnostics.empty() ? "" : "; ") +
                                std::string("oracle refused: more than ") +
                                std::to_string(*settings.oracle_limit) + " paths";
    } catch (const std::runtime_error& e) {
      run.record.diagnostics +=
          (run.record.diagnostics.empty() ? "" : "; ") + std::string("oracle: ") + e.what();
    }
  }
  return run;
}

namespace {

nlohmann::json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void WriteText(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error(path + ": cannot write file");
  file << text;
}

// Flags shared by plan and bench.
struct PlannerFlags {
  bool no_preprocess = false;
  bool no_two_cycle = false;
  int rounding_n = RoundingConfig{}.max_paths;
  int rounding_m = RoundingConfig{}.max_trials;
  double tol = SolverOptions{}.feasibility_tol;
  bool oracle = false;
  long path_limit = 100000;
  int threads = 1;

  void Register(CLI::App* app) {
    app->add_flag("--no-preprocess", no_preprocess, "Skip the edge redundancy filter");
    app->add_flag("--no-two-cycle", no_two_cycle, "Skip the two-cycle constraints");
    app->add_option("--rounding-n", rounding_n, "Distinct paths to evaluate while rounding")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--rounding-m", rounding_m, "Sampling trials while rounding")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--tol", tol, "Solver feasibility and gap tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_flag("--oracle", oracle, "Compute the exact optimum by path enumeration");
    app->add_option("--path-limit", path_limit, "Paths the oracle may enumerate")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--threads", threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
  }

  RunSettings Settings() const {
    RunSettings s;
    s.options.preprocess = !no_preprocess;
    s.options.two_cycle = !no_two_cycle;
    s.options.rounding.max_paths = rounding_n;
    s.options.rounding.max_trials = rounding_m;
    s.options.rounding.threads = threads;
    s.options.solver.feasibility_tol = tol;
    s.options.solver.relative_gap_tol = tol;
    s.options.solver.absolute_gap_tol = tol;
    if (oracle) s.oracle_limit = path_limit;
    return s;
  }
};

void RegisterGenerator(CLI::App* app, GeneratorSpec* spec) {
  app->add_option("--width", spec->width, "Maze width in cells")->capture_default_str();
  app->add_option("--height", spec->height, "Maze height in cells")->capture_default_str();
  app->add_option("--removed", spec->removed, "Extra maze walls knocked down")
      ->capture_default_str();
  app->add_option("--inner", spec->random.inner, "Random instance: vertices besides source and target")
      ->capture_default_str();
  app->add_option("--edge-probability", spec->random.edge_probability,
                  "Random instance: probability of each inner edge")
      ->capture_default_str();
  app->add_option("--max-paths", spec->random.max_paths,
                  "Random instance: redraw above this many simple paths")
      ->capture_default_str();
  app->add_option("--objective", spec->objective, "length, time, smooth or quadrotor")
      ->check(CLI::IsMember({"length", "time", "smooth", "quadrotor"}));
}

int CmdPlan(const std::string& problem_path, const std::string& output,
            const std::string& record_path, std::uint64_t seed, const PlannerFlags& flags,
            std::ostream& out, std::ostream& err) {
  const nlohmann::json j = ReadJson(problem_path);
  BenchInstance instance;
  instance.seed = seed;
  instance.descriptor = problem_path;
  try {
    if (j.contains("regions")) {
      instance.problem = PlanningProblemFromJson(j);
      instance.problem->Validate();
      instance.graph = BuildGraph(*instance.problem);
    } else {
      instance.graph = GcsProblemFromJson(j);
      instance.graph.Validate();
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(problem_path + ": " + e.what());
  }
  RunSettings settings = flags.Settings();
  if (settings.oracle_limit) {
    try {
      EnumeratePaths(instance.graph, *settings.oracle_limit);
    } catch (const std::length_error&) {
      err << "error: oracle refused: more than " << *settings.oracle_limit
          << " simple paths (raise --path-limit)\n";
      return 1;
    }
  }
  const InstanceRun run = RunInstance(instance, settings);
  const nlohmann::json record = ToJson(run.record);
  out << record.dump(2) << "\n";
  if (!record_path.empty()) WriteText(record_path, record.dump(2) + "\n", out);
  for (const std::string& issue : run.trajectory_issues) err << "warning: " << issue << "\n";

  if (run.record.status != PlanStatus::kSuccess) {
    err << run.record.diagnostics << "\n";
    return Infeasible(run.record.status) ? 2 : 1;
  }
  if (!output.empty()) {
    nlohmann::json result;
    if (run.result.trajectory) {
      result = ToJson(*run.result.trajectory);
    } else {
      const GcsProblem& g = run.result.graph;
      nlohmann::json names = nlohmann::json::array();
      nlohmann::json values = nlohmann::json::array();
      for (size_t k = 0; k < run.result.path().size(); ++k) {
        names.push_back(g.vertex(run.result.path()[k]).name);
        values.push_back(VectorToJson(run.result.rounding.best_values[k]));
      }
      result = {{"path", names}, {"values", values}, {"cost", run.result.rounding.best_cost}};
    }
    WriteText(output, result.dump(2) + "\n", out);
  }
  return 0;
}

int CmdBench(const GeneratorSpec& spec, std::uint64_t first_seed, int count,
             const std::vector<std::uint64_t>& seeds_in, const PlannerFlags& flags,
             bool timings, const std::string& output, std::ostream& out, std::ostream& err) {
  std::vector<std::uint64_t> seeds = seeds_in;
  if (seeds.empty()) {
    for (int k = 0; k < count; ++k) seeds.push_back(first_seed + k);
  }
  const RunSettings settings = flags.Settings();
  std::ostringstream stream;
  std::vector<RunRecord> records;
  for (std::uint64_t seed : seeds) {
    RunRecord record;
    try {
      record = RunInstance(Generate(spec, seed), settings).record;
    } catch (const std::exception& e) {
      record.instance = spec.name + ":seed=" + std::to_string(seed);
      record.seed = seed;
      record.diagnostics = std::string("error: ") + e.what();
    }
    if (record.status != PlanStatus::kSuccess) {
      err << record.instance << ": " << record.diagnostics << "\n";
    }
    stream << nlohmann::json{{"record", ToJson(record, timings)}}.dump() << "\n";
    records.push_back(std::move(record));
  }
  stream << nlohmann::json{{"summary", ToJson(Summarize(records), timings)}}.dump() << "\n";
  WriteText(output, stream.str(), out);
  return 0;
}

int CmdRender(const std::string& problem_path, const std::string& trajectory_path,
              const std::string& output, std::ostream& out) {
  PlanningProblem problem;
  try {
    problem = PlanningProblemFromJson(ReadJson(problem_path));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(problem_path + ": " + e.what());
  }
  std::optional<Trajectory> trajectory;
  if (!trajectory_path.empty()) {
    try {
      trajectory = TrajectoryFromJson(ReadJson(trajectory_path));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(trajectory_path + ": " + e.what());
    }
  }
  WriteText(output, RenderSvg(problem, trajectory ? &*trajectory : nullptr), out);
  return 0;
}

int CmdGenerate(const GeneratorSpec& spec, std::uint64_t seed, const std::string& output,
                const std::string& ascii, const std::string& layout, std::ostream& out,
                std::ostream& err) {
  nlohmann::json j;
  if (spec.name == "maze") {
    const MazeInstance maze = GenerateMaze(spec.width, spec.height, spec.removed, seed);
    j = ToJson(MazeProblem(maze, ObjectiveSpec(spec.objective, 2)));
    if (ascii.empty()) {
      err << RenderAscii(maze);
    } else {
      WriteText(ascii, RenderAscii(maze), out);
    }
    if (!layout.empty()) WriteText(layout, ToJson(maze).dump(2) + "\n", out);
  } else if (spec.name == "building") {
    const BuildingInstance b = GenerateBuilding(seed);
    j = ToJson(BuildingProblem(b, ObjectiveSpec(spec.objective, 3)));
    if (!layout.empty()) WriteText(layout, ToJson(b).dump(2) + "\n", out);
  } else {
    const BenchInstance inst = Generate(spec, seed);
    j = inst.problem ? ToJson(*inst.problem) : ToJson(inst.graph);
  }
  WriteText(output, j.dump(2) + "\n", out);
  return 0;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shortest paths in graphs of convex sets and motion planning on top of them"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  PlannerFlags flags;
  std::uint64_t seed = 0;
  std::string output, record_path, problem_path, trajectory_path, ascii, layout;
  GeneratorSpec spec;

  CLI::App* plan = app.add_subcommand("plan", "Plan on a problem JSON file");
  plan->add_option("problem", problem_path, "Planning problem or GCS problem JSON")
      ->required()
      ->check(CLI::ExistingFile);
  plan->add_option("-o,--output", output, "Write the trajectory (or path) JSON here");
  plan->add_option("--record", record_path, "Also write the run record JSON here");
  plan->add_option("--seed", seed, "Rounding seed")->capture_default_str();
  flags.Register(plan);

  int count = 10;
  std::vector<std::uint64_t> seeds;
  bool no_timings = false;
  CLI::App* bench = app.add_subcommand("bench", "Plan on a family of generated instances");
  bench->add_option("generator", spec.name, "maze, building, random, fixture2d or two-route")
      ->required()
      ->check(CLI::IsMember({"maze", "building", "random", "fixture2d", "two-route"}));
  bench->add_option("--count", count, "Number of instances")->capture_default_str();
  bench->add_option("--seed", seed, "First instance seed")->capture_default_str();
  bench->add_option("--seeds", seeds, "Explicit instance seeds (overrides --seed/--count)")
      ->delimiter(',');
  bench->add_flag("--no-timings", no_timings, "Leave timings out of the output");
  bench->add_option("-o,--output", output, "Write records and summary (JSON lines) here");
  flags.Register(bench);
  RegisterGenerator(bench, &spec);

  CLI::App* render = app.add_subcommand("render", "Draw a 2D problem and trajectory as SVG");
  render->add_option("problem", problem_path, "Planning problem JSON")
      ->required()
      ->check(CLI::ExistingFile);
  render->add_option("-t,--trajectory", trajectory_path, "Trajectory JSON from plan")
      ->check(CLI::ExistingFile);
  render->add_option("-o,--output", output, "SVG file (default stdout)");

  CLI::App* generate = app.add_subcommand("generate", "Write a generated instance as JSON");
  generate->add_option("generator", spec.name, "maze, building, random, fixture2d or two-route")
      ->required()
      ->check(CLI::IsMember({"maze", "building", "random", "fixture2d", "two-route"}));
  generate->add_option("--seed", seed, "Instance seed")->capture_default_str();
  generate->add_option("-o,--output", output, "Problem JSON file (default stdout)");
  generate->add_option("--ascii", ascii, "Maze drawing file (default stderr)");
  generate->add_option("--layout", layout, "Maze or building layout JSON file");
  RegisterGenerator(generate, &spec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*plan) return CmdPlan(problem_path, output, record_path, seed, flags, out, err);
    if (*bench) {
      return CmdBench(spec, seed, count, seeds, flags, !no_timings, output, out, err);
    }
    if (*render) return CmdRender(problem_path, trajectory_path, output, out);
    if (*generate) return CmdGenerate(spec, seed, output, ascii, layout, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace gcs
