#pragma once

// Scene files: geometry, source and run parameters in one YAML document.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polywave/geometry.hpp"
#include "polywave/radial.hpp"
#include "polywave/surrogate.hpp"

namespace polywave {

/// Schema or geometry problem in a scene file; the message names the field and line.
class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunParams {
  double T = 5.0;
  double mu_bar = 10.0;
  double tol = 0.0;
  std::size_t max_components = 100000;
  std::optional<GridSize> psi_grid;  ///< defaults to default_grid(T, R)
  double reference_h = 0.02;
  double quad_h = 0.05;
  std::vector<Point2> probes;
  std::vector<double> snapshot_times;
};

struct Scene {
  std::string name;
  std::shared_ptr<const Domain> domain;
  SourceSpec source;
  RunParams run;
  std::optional<WedgeScene> wedge;

  GridSize psi_grid() const { return run.psi_grid ? *run.psi_grid : default_grid(run.T, source.R); }
  BuildConfig build_config() const;
};

Scene parse_scene(const std::string& text, const std::string& origin = "<string>");
Scene load_scene(const std::string& path);

}  // namespace polywave
