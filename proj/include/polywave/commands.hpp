#pragma once

// Run orchestration shared by the command-line tool and the Python bindings.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "polywave/reference.hpp"
#include "polywave/scene.hpp"
#include "polywave/surrogate.hpp"

namespace polywave {

enum class EvalMode { Full, Go, Indicator };
EvalMode parse_eval_mode(const std::string& s);

/// Solves Psi for the scene and runs the builder.
Surrogate build_from_scene(const Scene& scene);

/// Component count, counts by kind, and one line per component (parent-edge list).
std::string component_report(const Surrogate& s);

/// Writes the surrogate file and a report next to it (<out>.report.txt); returns the report.
std::string cmd_build(const Scene& scene, const std::string& out_path);

double evaluate_mode(const Surrogate& s, EvalMode mode, Point2 x, double t);

/// Values at many points; work is split across threads, results keep the input order.
std::vector<double> evaluate_points(const Surrogate& s, EvalMode mode, const std::vector<Point2>& pts, double t);

/// Midpoints of a grid_h lattice over the bounding box that lie in the domain, row-major.
std::vector<Point2> snapshot_points(const Domain& d, double grid_h);

struct EvalTargets {
  std::vector<double> times;    ///< snapshot times
  double grid_h = 0.05;         ///< snapshot spacing
  std::vector<Point2> probes;   ///< trace points
  double trace_dt = 0.01;       ///< trace sampling step over [0, T]
};

/// Writes <prefix>_t<k>.csv snapshots and <prefix>_probe<k>.csv traces; returns file names.
std::vector<std::string> cmd_eval(const Surrogate& s, EvalMode mode, const EvalTargets& targets,
                                  const std::string& prefix);

ReferenceGrid run_reference(const Scene& scene, const std::vector<double>& times);
std::vector<std::string> cmd_reference(const Scene& scene, const std::vector<double>& times,
                                       const std::string& prefix);

/// err(t) of the surrogate against reference snapshots k = 0..times-1.
std::vector<std::pair<double, double>> compare_errors(const Surrogate& s, const ReferenceGrid& ref,
                                                      double quad_h);
void cmd_compare(const Scene& scene, const Surrogate& s, const std::vector<double>& times,
                 const std::string& out_csv);

/// err at snapshot k for each mu_bar; only the diffraction tables are rebuilt.
std::vector<std::pair<double, double>> sweep_mu(const Surrogate& s, const ReferenceGrid& ref, std::size_t k,
                                                const std::vector<double>& mu_values, double quad_h);
void cmd_sweep_mu(const Scene& scene, const Surrogate& s, double t, const std::vector<double>& mu_values,
                  const std::string& out_csv);

}  // namespace polywave
