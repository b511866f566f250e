#include "app.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "beltrami/errors.hpp"
#include "commands.hpp"

namespace beltrami::cli {
namespace {

// Flag values; only the ones that were given end up in the overrides.
struct Flags {
  std::string input, solution, config, out_dir, family;
  double h = 0, tol = 0, z_shift = 0;
  int k = 0, points = 0;
  std::uint64_t seed = 0;
  bool svg = false, unconstrained = false, wrong_potential = false;
};

using Handler = std::function<int(const Invocation&, std::ostream&)>;

struct Sub {
  CLI::App* app;
  Handler handler;
  std::map<std::string, CLI::Option*> opts;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curl eigenvalue lab for solids of revolution", "beltrami"};
  app.set_version_flag("--version", BELTRAMI_VERSION);
  // --h is the mesh size, so help is long-form only.
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);
  Flags f;
  std::vector<Sub> subs;

  auto add = [&](const std::string& name, const std::string& help, Handler handler,
                 std::initializer_list<const char*> flags) {
    Sub s{app.add_subcommand(name, help), std::move(handler), {}};
    s.app->set_help_flag("--help", "print this help");
    s.opts["config"] = s.app->add_option("--config", f.config, "JSON config file")
                           ->check(CLI::ExistingFile);
    for (const std::string flag : flags) {
      CLI::Option* o = nullptr;
      if (flag == "input") o = s.app->add_option("--input", f.input, "input JSON file");
      if (flag == "solution") {
        o = s.app->add_option("--solution", f.solution, "solve report to re-run and diagnose");
      }
      if (flag == "h") o = s.app->add_option("--h", f.h, "target mesh edge length");
      if (flag == "k") o = s.app->add_option("--k", f.k, "number of eigenvalues");
      if (flag == "tol") o = s.app->add_option("--tol", f.tol, "tolerance");
      if (flag == "seed") o = s.app->add_option("--seed", f.seed, "random seed");
      if (flag == "points") o = s.app->add_option("--points", f.points, "sample points per check");
      if (flag == "z_shift") {
        o = s.app->add_option("--z-shift", f.z_shift, "second origin for the Rellich check");
      }
      if (flag == "family") o = s.app->add_option("--family", f.family, "sweep family");
      if (flag == "out_dir") o = s.app->add_option("--out-dir", f.out_dir, "output directory");
      if (flag == "svg") o = s.app->add_flag("--svg", f.svg, "also write SVG plots");
      if (flag == "unconstrained") {
        o = s.app->add_flag("--unconstrained", f.unconstrained,
                            "plain Dirichlet torus solve without the flux constraint");
      }
      if (flag == "wrong_potential") {
        // Negative control for the test suite.
        o = s.app->add_flag("--inject-wrong-potential", f.wrong_potential)->group("");
      }
      s.opts[flag] = o;
    }
    subs.push_back(std::move(s));
  };

  add("criterion", "axis-distance non-optimality criterion", cmd_criterion,
      {"input", "tol", "out_dir", "svg"});
  add("mesh-info", "triangulate a cross-section and report mesh statistics", cmd_mesh_info,
      {"input", "h", "out_dir", "svg"});
  add("solve", "smallest positive curl eigenvalue (m = 0 mode)", cmd_solve,
      {"input", "h", "k", "tol", "seed", "out_dir", "svg", "unconstrained"});
  add("diagnose", "necessary-condition diagnostics of a solution", cmd_diagnose,
      {"input", "solution", "h", "k", "tol", "seed", "z_shift", "out_dir", "svg",
       "unconstrained"});
  add("sweep", "lambda * vol^(1/3) over a family of cross-sections", cmd_sweep,
      {"family", "h", "k", "tol", "seed", "out_dir", "svg"});
  add("verify-model", "tensor-calculus checks on the model spaces", cmd_verify_model,
      {"seed", "points", "out_dir", "wrong_potential"});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << BELTRAMI_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }

  for (const Sub& s : subs) {
    if (!s.app->parsed()) continue;
    Invocation inv;
    if (s.opts.at("config")->count() > 0) inv.config_path = f.config;
    auto given = [&](const char* name) {
      auto it = s.opts.find(name);
      return it != s.opts.end() && it->second->count() > 0;
    };
    if (given("input")) inv.overrides["input"] = f.input;
    if (given("solution")) inv.overrides["solution"] = f.solution;
    if (given("h")) inv.overrides["h"] = f.h;
    if (given("k")) inv.overrides["k"] = f.k;
    if (given("tol")) inv.overrides["tol"] = f.tol;
    if (given("seed")) inv.overrides["seed"] = f.seed;
    if (given("points")) inv.overrides["points"] = f.points;
    if (given("z_shift")) inv.overrides["z_shift"] = f.z_shift;
    if (given("family")) inv.overrides["family"] = f.family;
    if (given("out_dir")) inv.overrides["out_dir"] = f.out_dir;
    if (given("svg")) inv.overrides["svg"] = true;
    if (given("unconstrained")) inv.overrides["constrained"] = false;
    if (given("wrong_potential")) inv.overrides["inject_wrong_potential"] = true;

    try {
      return s.handler(inv, out);
    } catch (const ParseError& e) {
      err << "error: " << e.what() << "\n";
      return kParseError;
    } catch (const NonConvergence& e) {
      err << "error: " << e.what() << " (residual " << e.residual() << ")\n";
      return kNonConvergence;
    } catch (const VerificationFailed& e) {
      err << "error: " << e.what() << "\n";
      return kVerificationFailed;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kInvalidInput;
    } catch (const std::filesystem::filesystem_error& e) {
      err << "error: " << e.what() << "\n";
      return kInvalidInput;
    }
  }
  return kInvalidInput;
}

}  // namespace beltrami::cli
