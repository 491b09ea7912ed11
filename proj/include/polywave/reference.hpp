#pragma once

// Cartesian-grid leapfrog solver with staircase boundaries, used as a validation oracle.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polywave/geometry.hpp"
#include "polywave/radial.hpp"

namespace polywave {

enum class CellKind : std::uint8_t { Interior, NeumannBoundary, DirichletBoundary, Exterior };

struct ReferenceOptions {
  double h = 0.02;
  double cfl = 0.7;  ///< dt = cfl * h / sqrt(2), shortened so that T is a whole number of steps
  std::vector<Point2> probes;
  std::vector<double> snapshot_times;
  bool check_resolution = true;
  /// Initial displacement overriding the source profile (used for invariance checks).
  std::function<double(Point2)> initial_override;
};

class ReferenceGrid {
 public:
  double h() const { return h_; }
  double dt() const { return dt_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  /// Center of cell (i, j).
  Point2 center(int i, int j) const { return {x0_ + h_ * i, y0_ + h_ * j}; }
  CellKind kind(int i, int j) const { return mask_[index(i, j)]; }
  std::size_t n_steps() const { return n_steps_; }

  const std::vector<double>& snapshot_times() const { return snapshot_times_; }
  /// Field at snapshot k, cell-major with i fastest.
  const std::vector<double>& snapshot(std::size_t k) const { return snapshots_.at(k); }
  const std::vector<Point2>& probes() const { return probes_; }
  const std::vector<double>& trace(std::size_t p) const { return traces_.at(p); }
  double trace_time(std::size_t n) const { return dt_ * static_cast<double>(n); }
  const std::vector<double>& energy() const { return energy_; }

  /// Bilinear in space at a snapshot time, or linear in time at a probe. Throws otherwise.
  double sample(Point2 x, double t) const;
  /// Bilinear interpolation of snapshot k over active cells.
  double sample_snapshot(std::size_t k, Point2 x) const;

  void write_snapshot_csv(const std::string& path, std::size_t k) const;
  void write_trace_csv(const std::string& path, std::size_t p) const;

 private:
  friend ReferenceGrid solve_reference(const Domain&, const SourceSpec&, double, const ReferenceOptions&);
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
  }

  double h_ = 0.0, dt_ = 0.0;
  double x0_ = 0.0, y0_ = 0.0;
  int nx_ = 0, ny_ = 0;
  std::size_t n_steps_ = 0;
  std::vector<CellKind> mask_;
  std::vector<double> snapshot_times_;
  std::vector<std::vector<double>> snapshots_;
  std::vector<Point2> probes_;
  std::vector<std::vector<double>> traces_;
  std::vector<double> energy_;
  const Domain* domain_ = nullptr;
};

/// Explicit 5-point leapfrog over the cells whose centers lie in the domain. Neumann faces use
/// mirrored ghosts, Dirichlet faces zero ghosts. The grid is aligned so the origin is a cell center.
ReferenceGrid solve_reference(const Domain& d, const SourceSpec& src, double T, const ReferenceOptions& opt);

using FieldSampler = std::function<double(Point2)>;

/// sqrt(int (a-b)^2 / int b^2) by midpoint quadrature on a quad_h grid restricted to the domain.
double relative_l2_error(const FieldSampler& a, const FieldSampler& b, const Domain& d, double quad_h);

}  // namespace polywave
