// polywave: build, evaluate and validate wave surrogates from scene files.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "polywave/commands.hpp"
#include "polywave/surrogate_io.hpp"

namespace {

using namespace polywave;

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
      throw std::invalid_argument(std::string("bad number '") + item + "' in " + what);
    }
    out.push_back(v);
  }
  return out;
}

std::vector<Point2> parse_points(const std::string& text) {
  std::vector<Point2> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const std::vector<double> xy = parse_list(item, "--probes");
    if (xy.size() != 2) throw std::invalid_argument("probe '" + item + "' is not of the form x1,x2");
    out.push_back({xy[0], xy[1]});
  }
  return out;
}

std::vector<double> times_or_default(const std::string& text, const Scene& scene) {
  std::vector<double> t = text.empty() ? scene.run.snapshot_times : parse_list(text, "--times");
  if (t.empty()) t.push_back(scene.run.T);
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polywave: time-domain wave surrogates for polygonal scenes"};
  app.require_subcommand(1);

  std::string scene_path, surrogate_path, out, times, mode = "full", probes, mu_list;
  double tol = -1.0, mu_bar = -1.0, grid_h = 0.05, trace_dt = 0.01;
  long max_components = -1;

  auto* build = app.add_subcommand("build", "build a surrogate from a scene");
  build->add_option("--scene", scene_path, "scene file")->required();
  build->add_option("--out", out, "surrogate output file")->required();
  build->add_option("--tol", tol, "pruning tolerance");
  build->add_option("--mu-bar", mu_bar, "frozen diffraction distance");
  build->add_option("--max-components", max_components, "component cap");

  auto* eval = app.add_subcommand("eval", "evaluate a surrogate on a snapshot grid or at probes");
  eval->add_option("--surrogate", surrogate_path, "surrogate file")->required();
  eval->add_option("--out", out, "output prefix")->required();
  eval->add_option("--mode", mode, "full, go or indicator")->check(CLI::IsMember({"full", "go", "indicator"}));
  eval->add_option("--times", times, "snapshot times, comma separated");
  eval->add_option("--grid-h", grid_h, "snapshot grid spacing");
  eval->add_option("--probes", probes, "trace points as x1,x2;x1,x2");
  eval->add_option("--trace-dt", trace_dt, "trace sampling step");

  auto* reference = app.add_subcommand("reference", "run the finite-difference reference solver");
  reference->add_option("--scene", scene_path, "scene file")->required();
  reference->add_option("--out", out, "output prefix")->required();
  reference->add_option("--times", times, "snapshot times, comma separated");

  auto* compare = app.add_subcommand("compare", "relative L2 error of a surrogate against the reference");
  compare->add_option("--scene", scene_path, "scene file")->required();
  compare->add_option("--surrogate", surrogate_path, "surrogate file")->required();
  compare->add_option("--out", out, "error table CSV")->required();
  compare->add_option("--times", times, "comparison times, comma separated");

  auto* sweep = app.add_subcommand("sweep-mu", "error as a function of mu_bar at one time");
  sweep->add_option("--scene", scene_path, "scene file")->required();
  sweep->add_option("--surrogate", surrogate_path, "surrogate file")->required();
  sweep->add_option("--out", out, "sweep CSV")->required();
  sweep->add_option("--times", times, "comparison time");
  sweep->add_option("--mu-list", mu_list, "mu_bar values, comma separated")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (build->parsed()) {
      Scene scene = load_scene(scene_path);
      if (tol >= 0.0) scene.run.tol = tol;
      if (mu_bar > 0.0) {
        if (mu_bar < 1.0) throw std::invalid_argument("--mu-bar must be at least 1");
        scene.run.mu_bar = mu_bar;
      }
      if (max_components > 0) scene.run.max_components = static_cast<std::size_t>(max_components);
      std::cout << cmd_build(scene, out);
    } else if (eval->parsed()) {
      const LoadedSurrogate loaded = load_surrogate(surrogate_path);
      EvalTargets targets;
      targets.times = parse_list(times, "--times");
      targets.grid_h = grid_h;
      targets.probes = parse_points(probes);
      targets.trace_dt = trace_dt;
      if (targets.times.empty() && targets.probes.empty()) {
        throw std::invalid_argument("eval needs --times or --probes");
      }
      for (const std::string& f : cmd_eval(loaded.surrogate, parse_eval_mode(mode), targets, out)) {
        std::cout << f << '\n';
      }
    } else if (reference->parsed()) {
      const Scene scene = load_scene(scene_path);
      for (const std::string& f : cmd_reference(scene, times_or_default(times, scene), out)) std::cout << f << '\n';
    } else if (compare->parsed()) {
      const Scene scene = load_scene(scene_path);
      const LoadedSurrogate loaded = load_surrogate(surrogate_path);
      cmd_compare(scene, loaded.surrogate, times_or_default(times, scene), out);
      std::cout << out << '\n';
    } else if (sweep->parsed()) {
      const Scene scene = load_scene(scene_path);
      const LoadedSurrogate loaded = load_surrogate(surrogate_path);
      const std::vector<double> t = times_or_default(times, scene);
      if (t.size() != 1) throw std::invalid_argument("sweep-mu takes a single time");
      const std::vector<double> mus = parse_list(mu_list, "--mu-list");
      for (double m : mus) {
        if (!(m >= 1.0)) throw std::invalid_argument("mu_bar values must be at least 1");
      }
      cmd_sweep_mu(scene, loaded.surrogate, t[0], mus, out);
      std::cout << out << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "polywave: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
