#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string_view>

#include "beltrami/diagnose.hpp"
#include "beltrami/errors.hpp"
#include "beltrami/geomfields.hpp"
#include "beltrami/gseig.hpp"
#include "beltrami/mesh.hpp"
#include "beltrami/shapes.hpp"
#include "output.hpp"

namespace beltrami::cli {
namespace fs = std::filesystem;
namespace {

constexpr const char* kDefaultOutDir = "beltrami-out";

const char* const kSolverKeys[] = {"input", "h",    "k",          "topology",
                                   "max_iter", "tol", "seed", "constrained"};

Json solver_defaults() {
  return {{"input", nullptr},  {"h", 0.05},         {"k", 4},
          {"topology", "auto"}, {"max_iter", 500},   {"tol", 1e-10},
          {"seed", 20240611},  {"constrained", true}, {"out_dir", kDefaultOutDir},
          {"svg", false}};
}

void require_positive(const Json& cfg, const char* key) {
  if (!(cfg[key].get<double>() > 0.0)) {
    throw InvalidInput(std::string("config key '") + key + "' must be positive");
  }
}

void require_at_least(const Json& cfg, const char* key, long long lo) {
  if (cfg[key].get<long long>() < lo) {
    throw InvalidInput(std::string("config key '") + key + "' must be >= " + std::to_string(lo));
  }
}

void validate_solver(const Json& cfg) {
  require_positive(cfg, "h");
  require_positive(cfg, "tol");
  require_at_least(cfg, "k", 1);
  require_at_least(cfg, "max_iter", 1);
  require_at_least(cfg, "seed", 0);
  const std::string t = cfg["topology"].get<std::string>();
  if (t != "auto" && !topology_from_string(t)) {
    throw InvalidInput("topology must be auto, ball_like or torus_like");
  }
}

Json load_file_config(const Invocation& inv) {
  if (!inv.config_path) return nullptr;
  return parse_json(read_text_file(*inv.config_path), *inv.config_path);
}

fs::path prepare_out_dir(const Json& cfg) {
  const fs::path dir = cfg["out_dir"].get<std::string>();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw InvalidInput("cannot create output directory '" + dir.string() + "'");
  }
  return dir;
}

struct LoadedInput {
  std::string hash;
  CrossSection cs;
};

LoadedInput load_input(const Json& path_value, const fs::path& base = {}) {
  if (!path_value.is_string()) throw InvalidInput("--input is required");
  fs::path path = path_value.get<std::string>();
  if (path.is_relative() && !base.empty()) path = base / path;
  const std::string text = read_text_file(path);
  return {sha256_hex(text), cross_section_from_json(parse_json(text, path.string()))};
}

Json point_json(Point p) { return Json::array({p.r, p.z}); }

Json points_json(const std::vector<Point>& pts) {
  Json a = Json::array();
  for (const Point& p : pts) a.push_back(point_json(p));
  return a;
}

Json samples_json(const std::vector<BoundarySample>& samples) {
  Json a = Json::array();
  for (const BoundarySample& s : samples) a.push_back({s.s, s.position.r, s.position.z, s.value});
  return a;
}

std::string samples_csv(const std::vector<BoundarySample>& samples, const char* column) {
  std::string out = std::string("s,r,z,") + column + "\n";
  for (const BoundarySample& s : samples) {
    out += fmt(s.s) + "," + fmt(s.position.r) + "," + fmt(s.position.z) + "," + fmt(s.value) + "\n";
  }
  return out;
}

SolverOptions solver_options(const Json& cfg) {
  SolverOptions o;
  o.k = cfg["k"].get<int>();
  o.max_iter = cfg["max_iter"].get<int>();
  o.tol = cfg["tol"].get<double>();
  o.seed = cfg["seed"].get<std::uint64_t>();
  return o;
}

struct Pipeline {
  TriMesh mesh;
  GSProblem problem;
  EigenSolution sol;
};

void require_solvable(const CrossSection& cs) {
  if (cs.metric() != MetricKind::euclidean) {
    throw Unsupported("eigensolves need the euclidean metric (got " +
                      std::string(to_string(cs.metric())) + ")");
  }
  if (!cs.holes().empty()) throw Unsupported("multiply-connected cross-sections unsupported");
}

Pipeline run_pipeline(const Json& cfg, const CrossSection& cs) {
  require_solvable(cs);
  Pipeline p;
  p.mesh = triangulate(cs, cfg["h"].get<double>());
  const std::string t = cfg["topology"].get<std::string>();
  const Topology topology = t == "auto" ? detect_topology(p.mesh) : *topology_from_string(t);
  p.problem = assemble(p.mesh, topology, cfg["constrained"].get<bool>());
  p.sol = solve_smallest(p.problem, solver_options(cfg));
  return p;
}

Json mesh_json(const TriMesh& mesh) {
  return {{"vertices", mesh.num_vertices()}, {"triangles", mesh.num_triangles()},
          {"h", mesh.h},                     {"area", mesh.area()},
          {"volume", revolved_volume(mesh)}, {"min_angle_deg", min_angle_deg(mesh)},
          {"has_axis", mesh.has_axis()}};
}

Json solution_json(const Pipeline& p) {
  const GSProblem& pr = p.problem;
  const EigenSolution& s = p.sol;
  double constraint = 0.0;
  if (pr.ell.size() > 0) {
    const double scale = pr.ell.norm() * s.psi_dofs.norm();
    constraint = scale > 0 ? std::abs(pr.ell.dot(s.psi_dofs)) / scale : 0.0;
  }
  return {{"bound", "m = 0 upper bound"},
          {"topology", to_string(pr.topology)},
          {"constrained", pr.constrained},
          {"lambda_plus", s.lambda_plus},
          {"lambda_minus", -s.lambda_plus},
          {"mu", s.mu},
          {"mus", s.mus},
          {"eigen_gaps", s.eigen_gaps},
          {"c_b", s.c_b},
          {"residual_norm", s.residual_norm},
          {"constraint_residual", constraint},
          {"iterations", s.iterations},
          {"near_degenerate", s.near_degenerate},
          {"mesh", mesh_json(p.mesh)}};
}

std::string psi_csv(const TriMesh& mesh, const Eigen::VectorXd& psi) {
  std::string out = "r,z,psi\n";
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    out += fmt(mesh.vertices[i].r) + "," + fmt(mesh.vertices[i].z) + "," +
           fmt(psi[static_cast<Eigen::Index>(i)]) + "\n";
  }
  return out;
}

const char* run_kind_name(RunKind k) {
  switch (k) {
    case RunKind::outer: return "outer";
    case RunKind::hole: return "hole";
    case RunKind::axis: return "axis";
  }
  return "?";
}

std::vector<SweepMember> build_family(const Json& cfg, const fs::path& base, Json& inputs) {
  const std::string family = cfg["family"].get<std::string>();
  const double h = cfg["h"].get<double>();
  const auto n = static_cast<std::size_t>(cfg["points"].get<long long>());
  const double radius = cfg["radius"].get<double>();
  std::vector<SweepMember> out;
  inputs = Json::array();
  if (family == "explicit") {
    if (!cfg["values"].empty()) throw InvalidInput("an explicit family takes 'members', not 'values'");
    for (const Json& m : cfg["members"]) {
      if (!m.is_object() || !m.contains("parameter") || !m.contains("input") ||
          !m["parameter"].is_number() || !m["input"].is_string() || m.size() != 2) {
        throw InvalidInput("sweep members must look like {\"parameter\": x, \"input\": path}");
      }
      LoadedInput in = load_input(m["input"], base);
      require_solvable(in.cs);
      inputs.push_back({{"input", m["input"]}, {"sha256", in.hash}});
      out.push_back({m["parameter"].get<double>(), std::move(in.cs), h});
    }
    return out;
  }
  if (!cfg["members"].empty()) throw InvalidInput("'members' is only used by the explicit family");
  for (const Json& v : cfg["values"]) {
    if (!v.is_number()) throw InvalidInput("sweep values must be numbers");
    const double x = v.get<double>();
    if (family == "torus_center") {
      out.push_back({x, CrossSection::make(shapes::circle({x, 0.0}, radius, n)), h});
    } else if (family == "torus_scale") {
      if (!(x > 0)) throw InvalidInput("scale factors must be positive");
      const CrossSection base_cs =
          CrossSection::make(shapes::circle({cfg["center_r"].get<double>(), 0.0}, radius, n));
      out.push_back({x, base_cs.scaled(x), h * x});
    } else if (family == "ellipse_aspect") {
      if (!(x > 0)) throw InvalidInput("aspect ratios must be positive");
      const double area = cfg["area"].get<double>();
      const double a = std::sqrt(area * x / std::numbers::pi);
      const double b = std::sqrt(area / (std::numbers::pi * x));
      out.push_back({x,
                     CrossSection::make(
                         shapes::ellipse({cfg["ellipse_center_r"].get<double>(), 0.0}, a, b, n)),
                     h});
    } else {
      throw InvalidInput("family must be torus_center, torus_scale, ellipse_aspect or explicit");
    }
  }
  return out;
}

}  // namespace

Json default_config(const std::string& command) {
  if (command == "criterion") {
    return {{"input", nullptr}, {"tol", 0.0}, {"out_dir", kDefaultOutDir}, {"svg", false}};
  }
  if (command == "mesh-info") {
    return {{"input", nullptr}, {"h", 0.05}, {"out_dir", kDefaultOutDir}, {"svg", false}};
  }
  if (command == "solve") return solver_defaults();
  if (command == "diagnose") {
    Json d = solver_defaults();
    d["solution"] = nullptr;
    d["z_shift"] = 5.0;
    return d;
  }
  if (command == "sweep") {
    Json d = solver_defaults();
    d.erase("input");
    d.erase("topology");
    d.erase("constrained");
    d["family"] = "torus_center";
    d["values"] = Json::array();
    d["members"] = Json::array();
    d["radius"] = 0.5;
    d["center_r"] = 2.0;
    d["ellipse_center_r"] = 3.0;
    d["area"] = std::numbers::pi * 0.25;
    d["points"] = 512;
    d["volume_normalize"] = true;
    return d;
  }
  if (command == "verify-model") {
    return {{"seed", 20240611},
            {"points", 100},
            {"inject_wrong_potential", false},
            {"out_dir", kDefaultOutDir}};
  }
  throw InvalidInput("unknown command '" + command + "'");
}

int cmd_criterion(const Invocation& inv, std::ostream& out) {
  const Json cfg = resolve_config(default_config("criterion"), load_file_config(inv), inv.overrides);
  if (cfg["tol"].get<double>() < 0) throw InvalidInput("config key 'tol' must be >= 0");
  const LoadedInput in = load_input(cfg["input"]);
  const fs::path dir = prepare_out_dir(cfg);

  const CriterionReport rep = criterion(in.cs, cfg["tol"].get<double>());
  Json report = report_header("criterion", cfg, in.hash);
  report["result"] = {{"metric", to_string(rep.metric)},
                      {"tol", rep.tol},
                      {"d_minus", rep.d_minus},
                      {"d_plus", rep.d_plus},
                      {"n0_points", points_json(rep.n0_points)},
                      {"x_plus", point_json(rep.x_plus)},
                      {"x_minus", point_json(rep.x_minus)},
                      {"len_L_minus", rep.len_l_minus},
                      {"len_L_plus", rep.len_l_plus},
                      {"len_holes", rep.len_holes},
                      {"axis_intersect", rep.axis_intersect},
                      {"complement_components", rep.complement_components},
                      {"length_test_disabled", rep.length_test_disabled},
                      {"reason", rep.reason},
                      {"verdict", to_string(rep.verdict)}};
  write_file(dir / "criterion.json", dump_report(report));
  if (cfg["svg"].get<bool>()) write_file(dir / "criterion.svg", criterion_svg(in.cs, rep));
  out << "verdict " << to_string(rep.verdict) << "  d_minus " << fmt(rep.d_minus) << "  L+ "
      << fmt(rep.len_l_plus) << "  L- " << fmt(rep.len_l_minus) << "\n";
  return kOk;
}

int cmd_mesh_info(const Invocation& inv, std::ostream& out) {
  const Json cfg = resolve_config(default_config("mesh-info"), load_file_config(inv), inv.overrides);
  require_positive(cfg, "h");
  const LoadedInput in = load_input(cfg["input"]);
  const fs::path dir = prepare_out_dir(cfg);

  const TriMesh mesh = triangulate(in.cs, cfg["h"].get<double>());
  Json runs = Json::array();
  for (const BoundaryRun& run : boundary_trace(mesh)) {
    runs.push_back({{"kind", run_kind_name(run.kind)},
                    {"hole", run.hole},
                    {"closed", run.closed},
                    {"edges", run.edges.size()},
                    {"length", run.length()}});
  }
  Json report = report_header("mesh-info", cfg, in.hash);
  report["result"] = mesh_json(mesh);
  report["result"]["boundary_runs"] = runs;
  write_file(dir / "mesh.json", dump_report(report));
  write_file(dir / "mesh.txt", write_mesh_text(mesh));
  if (cfg["svg"].get<bool>()) write_file(dir / "mesh.svg", mesh_svg(mesh));
  out << "vertices " << mesh.num_vertices() << "  triangles " << mesh.num_triangles()
      << "  min_angle " << fmt(min_angle_deg(mesh)) << "\n";
  return kOk;
}

int cmd_solve(const Invocation& inv, std::ostream& out) {
  const Json cfg = resolve_config(default_config("solve"), load_file_config(inv), inv.overrides);
  validate_solver(cfg);
  const LoadedInput in = load_input(cfg["input"]);
  require_solvable(in.cs);
  const fs::path dir = prepare_out_dir(cfg);

  const Pipeline p = run_pipeline(cfg, in.cs);
  Json report = report_header("solve", cfg, in.hash);
  report["result"] = solution_json(p);
  write_file(dir / "solve.json", dump_report(report));
  write_file(dir / "psi.csv", psi_csv(p.mesh, p.sol.psi));
  if (cfg["svg"].get<bool>()) write_file(dir / "psi.svg", contour_svg(p.mesh, p.sol.psi));
  out << "lambda_plus " << fmt(p.sol.lambda_plus) << " (m = 0 upper bound)  topology "
      << to_string(p.problem.topology) << "  iterations " << p.sol.iterations << "\n";
  return kOk;
}

int cmd_diagnose(const Invocation& inv, std::ostream& out) {
  Json file_cfg = load_file_config(inv);
  Json overrides = inv.overrides;
  Json solution = nullptr;
  std::string solution_path;
  {
    const Json probe = resolve_config(default_config("diagnose"), file_cfg, overrides);
    if (probe["solution"].is_string()) {
      solution_path = probe["solution"].get<std::string>();
      solution = parse_json(read_text_file(solution_path), solution_path);
    }
  }
  if (!solution.is_null()) {
    if (!solution.is_object() || solution.value("format_version", 0) != kFormatVersion ||
        solution.value("command", "") != "solve" || !solution.contains("config") ||
        !solution.contains("result")) {
      throw InvalidInput("'" + solution_path + "' is not a format_version 1 solve report");
    }
    // Solver settings come from the solution; only diagnostic keys may be given.
    // The input may be restated; the hash check below catches a mismatch.
    for (const char* key : kSolverKeys) {
      const bool given = (file_cfg.is_object() && file_cfg.contains(key)) || overrides.contains(key);
      if (given && std::string_view(key) == "input") continue;
      if (given) {
        throw InvalidInput(std::string("'") + key + "' is fixed by the solution file");
      }
      if (!file_cfg.is_object()) file_cfg = Json::object();
      if (!solution["config"].contains(key)) {
        throw InvalidInput("solution config lacks '" + std::string(key) + "'");
      }
      file_cfg[key] = solution["config"][key];
    }
  }
  const Json cfg = resolve_config(default_config("diagnose"), file_cfg, overrides);
  validate_solver(cfg);
  const LoadedInput in = load_input(cfg["input"]);
  require_solvable(in.cs);
  if (!solution.is_null() && solution.value("input_sha256", "") != in.hash) {
    throw InvalidInput("input '" + cfg["input"].get<std::string>() +
                       "' changed since the solution was written");
  }
  const fs::path dir = prepare_out_dir(cfg);

  const Pipeline p = run_pipeline(cfg, in.cs);
  if (!solution.is_null()) {
    const Json& r = solution["result"];
    if (r.value("topology", "") != to_string(p.problem.topology)) {
      throw InvalidInput("solution topology does not match the recomputed one");
    }
    if (!r.contains("lambda_plus") || r["lambda_plus"].get<double>() != p.sol.lambda_plus) {
      throw InvalidInput("solution does not reproduce: lambda_plus differs");
    }
  }
  DiagnoseOptions opts;
  opts.z_shift = cfg["z_shift"].get<double>();
  const DiagnosticsReport d = diagnose(p.problem, p.sol, opts);

  auto rellich = [](const RellichResult& r) {
    return Json{{"volume_side", r.volume_side},
                {"boundary_side", r.boundary_side},
                {"residual", r.residual},
                {"z_origin", r.z_origin}};
  };
  Json report = report_header("diagnose", cfg, in.hash);
  report["result"] = {
      {"lambda_plus", p.sol.lambda_plus},
      {"topology", to_string(p.problem.topology)},
      {"constancy",
       {{"boundary_speed", samples_json(d.constancy.boundary_speed)},
        {"constancy_score", d.constancy.constancy_score},
        {"c_estimate", d.constancy.c_estimate},
        {"boundary_max", d.constancy.boundary_max},
        {"interior_max", d.constancy.interior_max},
        {"vanishing_warning", d.constancy.vanishing_warning},
        {"criticality_gap", d.constancy.criticality_gap}}},
      {"rellich", rellich(d.rellich)},
      {"rellich_shifted", rellich(d.rellich_shifted)},
      {"g_xr",
       {{"g_xr_boundary", samples_json(d.g_xr.g_xr_boundary)},
        {"c0", d.g_xr.c0},
        {"deviation", d.g_xr.deviation}}},
      {"flux_balance", d.has_flux_balance ? Json(d.flux_balance) : Json(nullptr)},
      {"volume", d.volume},
      {"objective", d.objective}};
  write_file(dir / "diagnose.json", dump_report(report));
  write_file(dir / "boundary_speed.csv", samples_csv(d.constancy.boundary_speed, "speed"));
  write_file(dir / "g_xr.csv", samples_csv(d.g_xr.g_xr_boundary, "g_xr"));
  if (cfg["svg"].get<bool>()) {
    std::vector<std::pair<double, double>> xy;
    for (const BoundarySample& s : d.constancy.boundary_speed) xy.emplace_back(s.s, s.value);
    write_file(dir / "boundary_speed.svg", chart_svg(xy, "arclength s", "|X|"));
    write_file(dir / "psi.svg", contour_svg(p.mesh, p.sol.psi));
  }
  out << "constancy_score " << fmt(d.constancy.constancy_score) << "  rellich "
      << fmt(d.rellich.residual) << "  g_xr_deviation " << fmt(d.g_xr.deviation);
  if (d.has_flux_balance) out << "  flux_balance " << fmt(d.flux_balance);
  out << "  objective " << fmt(d.objective) << "\n";
  return kOk;
}

int cmd_sweep(const Invocation& inv, std::ostream& out) {
  std::string config_text;
  Json file_cfg = nullptr;
  fs::path base;
  if (inv.config_path) {
    config_text = read_text_file(*inv.config_path);
    file_cfg = parse_json(config_text, *inv.config_path);
    base = fs::path(*inv.config_path).parent_path();
  }
  Json cfg = resolve_config(default_config("sweep"), file_cfg, inv.overrides);
  require_positive(cfg, "h");
  require_positive(cfg, "tol");
  require_positive(cfg, "radius");
  require_positive(cfg, "area");
  require_at_least(cfg, "k", 1);
  require_at_least(cfg, "max_iter", 1);
  require_at_least(cfg, "seed", 0);
  require_at_least(cfg, "points", 3);
  Json inputs;
  const std::vector<SweepMember> family = build_family(cfg, base, inputs);
  const unsigned threads = threads_from_env();
  const fs::path dir = prepare_out_dir(cfg);

  const std::vector<SweepRow> rows =
      sweep(family, solver_options(cfg), cfg["volume_normalize"].get<bool>(), threads);

  Json jrows = Json::array();
  std::string csv = "index,parameter,h,lambda_plus,volume,objective,iterations\n";
  std::vector<std::pair<double, double>> xy;
  for (const SweepRow& r : rows) {
    const double h = family[r.index].h;
    jrows.push_back({{"index", r.index},
                     {"parameter", r.parameter},
                     {"h", h},
                     {"lambda_plus", r.lambda_plus},
                     {"volume", r.volume},
                     {"objective", r.objective},
                     {"iterations", r.iterations}});
    csv += std::to_string(r.index) + "," + fmt(r.parameter) + "," + fmt(h) + "," +
           fmt(r.lambda_plus) + "," + fmt(r.volume) + "," + fmt(r.objective) + "," +
           std::to_string(r.iterations) + "\n";
    xy.emplace_back(r.parameter, r.objective);
  }
  Json report = report_header("sweep", cfg, config_text.empty() ? Json(nullptr)
                                                                 : Json(sha256_hex(config_text)));
  report["result"] = {{"rows", jrows}, {"member_inputs", inputs}};
  write_file(dir / "sweep.json", dump_report(report));
  write_file(dir / "sweep.csv", csv);
  if (cfg["svg"].get<bool>()) {
    write_file(dir / "sweep.svg", chart_svg(xy, cfg["family"].get<std::string>(),
                                            "lambda * vol^(1/3)"));
  }
  for (const SweepRow& r : rows) {
    out << "parameter " << fmt(r.parameter) << "  lambda_plus " << fmt(r.lambda_plus)
        << "  objective " << fmt(r.objective) << "\n";
  }
  return kOk;
}

int cmd_verify_model(const Invocation& inv, std::ostream& out) {
  const Json cfg =
      resolve_config(default_config("verify-model"), load_file_config(inv), inv.overrides);
  require_at_least(cfg, "seed", 0);
  require_at_least(cfg, "points", 1);
  const fs::path dir = prepare_out_dir(cfg);

  VerifyOptions opts;
  opts.seed = cfg["seed"].get<std::uint64_t>();
  opts.points = cfg["points"].get<std::size_t>();
  opts.wrong_hyperbolic_potential = cfg["inject_wrong_potential"].get<bool>();
  const VerificationReport rep = run_verification_suite(opts);

  Json checks = Json::array();
  for (const Check& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"comparison", c.comparison},
                      {"tolerance", c.tolerance},
                      {"measured", c.measured},
                      {"pass", c.pass}});
    out << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << fmt(c.measured) << " "
        << c.comparison << " " << fmt(c.tolerance) << "\n";
  }
  Json report = report_header("verify-model", cfg, nullptr);
  report["result"] = {{"seed", rep.seed},
                      {"points", rep.points},
                      {"all_pass", rep.all_pass()},
                      {"failed", rep.failed()},
                      {"checks", checks}};
  write_file(dir / "verify.json", dump_report(report));
  if (!rep.all_pass()) {
    std::string names;
    for (const std::string& n : rep.failed()) names += (names.empty() ? "" : ", ") + n;
    throw VerificationFailed("verification failed: " + names);
  }
  return kOk;
}

}  // namespace beltrami::cli
