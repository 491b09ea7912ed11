#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "polywave/reference.hpp"

using namespace polywave;

namespace {

Ring ring(std::vector<Point2> pts, BoundaryCondition bc = BoundaryCondition::Neumann) {
  Ring r;
  r.bc.assign(pts.size(), bc);
  r.points = std::move(pts);
  return r;
}

Ring polygon(double radius, int n) {
  std::vector<Point2> pts;
  for (int k = 0; k < n; ++k) {
    const double a = kTwoPi * k / n;
    pts.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return ring(pts);
}

SourceSpec gaussian(double sigma = 0.2) {
  SourceSpec s;
  s.eta0.kind = ProfileKind::Gaussian;
  s.eta0.sigma = sigma;
  return s;
}

/// Max over 10 probes and the trace times of |u_ref - Psi|, relative to max |Psi|.
double free_space_discrepancy(double h, const FreeSpaceGrid& psi) {
  const Domain disk(polygon(6.0, 64));
  ReferenceOptions opt;
  opt.h = h;
  for (int k = 0; k < 10; ++k) opt.probes.push_back({0.25 * k * std::cos(0.3 * k), 0.25 * k * std::sin(0.3 * k)});
  const ReferenceGrid g = solve_reference(disk, gaussian(), 3.0, opt);
  double worst = 0.0, scale = 0.0;
  for (std::size_t p = 0; p < opt.probes.size(); ++p) {
    const auto& tr = g.trace(p);
    for (std::size_t n = 0; n < tr.size(); ++n) {
      const double ref = psi.sample(norm(opt.probes[p]), g.trace_time(n));
      worst = std::max(worst, std::abs(tr[n] - ref));
      scale = std::max(scale, std::abs(ref));
    }
  }
  return worst / scale;
}

}  // namespace

TEST_CASE("constant state is preserved under Neumann walls") {
  const Domain d(ring({{-1, -1}, {1, -1}, {1.3, 0.8}, {-0.6, 1.2}}));
  SourceSpec s;
  ReferenceOptions opt;
  opt.h = 0.02;
  opt.snapshot_times = {1.0};
  opt.initial_override = [](Point2) { return 1.0; };
  const ReferenceGrid g = solve_reference(d, s, 1.0, opt);
  const auto& u = g.snapshot(0);
  double worst = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (g.kind(i, j) != CellKind::Exterior) worst = std::max(worst, std::abs(u[j * g.nx() + i] - 1.0));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("free space agrees with the radial solution and converges") {
  const FreeSpaceGrid psi = solve_radial(gaussian(), 3.0, 1601, 3200);
  const double e1 = free_space_discrepancy(0.02, psi);
  const double e2 = free_space_discrepancy(0.01, psi);
  CHECK(e1 <= 0.02);
  CHECK(e2 <= 0.75 * e1);
}

TEST_CASE("mirror symmetry") {
  const Domain d(ring({{-3, -3}, {3, -3}, {3, 3}, {-3, 3}}), {ring({{-1, 1}, {0, 2}, {1, 1}})});
  ReferenceOptions opt;
  opt.h = 0.02;
  opt.snapshot_times = {2.5};
  const ReferenceGrid g = solve_reference(d, gaussian(), 2.5, opt);
  double worst = 0.0, scale = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const Point2 x = g.center(i, j);
      if (g.kind(i, j) == CellKind::Exterior || !d.contains(x)) continue;
      const double a = g.sample_snapshot(0, x);
      const double b = g.sample_snapshot(0, {-x.x1, x.x2});
      worst = std::max(worst, std::abs(a - b));
      scale = std::max(scale, std::abs(a));
    }
  }
  CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("sampling contract") {
  const Domain d(ring({{-3, -3}, {3, -3}, {3, 3}, {-3, 3}}));
  ReferenceOptions opt;
  opt.h = 0.05;
  opt.snapshot_times = {1.0};
  opt.probes = {{0.5, 0.25}};
  const ReferenceGrid g = solve_reference(d, gaussian(), 2.0, opt);
  const int i = g.nx() / 2, j = g.ny() / 2;
  CHECK(g.sample(g.center(i, j), 1.0) == g.snapshot(0)[static_cast<std::size_t>(j * g.nx() + i)]);
  CHECK_THROWS(g.sample({10, 10}, 1.0));
  CHECK_THROWS(g.sample({0.1, 0.1}, 1.5));
  const auto& tr = g.trace(0);
  const double tm = 0.5 * (g.trace_time(7) + g.trace_time(8));
  CHECK(g.sample({0.5, 0.25}, tm) == doctest::Approx(0.5 * (tr[7] + tr[8])).epsilon(1e-14));
}

TEST_CASE("energy drift stays below 1e-3") {
  const Domain d(ring({{-3, -2}, {3, -2}, {3, 2}, {-3, 2}}), {ring({{1.0, 0.5}, {2.0, 1.2}, {2.3, 0.4}}, BoundaryCondition::Dirichlet)});
  ReferenceOptions opt;
  opt.h = 0.02;
  const ReferenceGrid g = solve_reference(d, gaussian(), 4.0, opt);
  const auto& e = g.energy();
  REQUIRE(e.size() > 2);
  double drift = 0.0;
  for (double v : e) drift = std::max(drift, std::abs(v - e.front()));
  CHECK(drift <= 1e-3 * e.front());
}

TEST_CASE("relative L2 error") {
  const Domain d(ring({{-2, -2}, {2, -2}, {2, 2}, {-2, 2}}));
  auto f = [](Point2 x) { return std::exp(-dot(x, x)); };
  CHECK(relative_l2_error(f, f, d, 0.05) == 0.0);
  CHECK(relative_l2_error([&](Point2 x) { return 2.0 * f(x); }, f, d, 0.05) == doctest::Approx(1.0));
  CHECK_THROWS(relative_l2_error(f, [](Point2) { return 0.0; }, d, 0.05));
}

TEST_CASE("input validation and CSV output") {
  const Domain d(ring({{-3, -3}, {3, -3}, {3, 3}, {-3, 3}}));
  ReferenceOptions opt;
  opt.cfl = 1.2;
  CHECK_THROWS(solve_reference(d, gaussian(), 1.0, opt));
  opt.cfl = 0.7;
  opt.h = 0.2;
  CHECK_THROWS(solve_reference(d, gaussian(), 1.0, opt));
  opt.h = 0.05;
  opt.probes = {{5, 5}};
  CHECK_THROWS(solve_reference(d, gaussian(), 1.0, opt));
  const Domain tiny(ring({{-3, -3}, {3, -3}, {3, 3}, {-3.05, 3.1}, {-3, 3}}));
  opt.probes.clear();
  CHECK_THROWS(solve_reference(tiny, gaussian(), 1.0, opt));

  opt.probes = {{0.5, 0.5}};
  opt.snapshot_times = {0.5};
  const ReferenceGrid g = solve_reference(d, gaussian(), 1.0, opt);
  const auto dir = std::filesystem::temp_directory_path();
  g.write_snapshot_csv((dir / "polywave_ref_snap.csv").string(), 0);
  g.write_trace_csv((dir / "polywave_ref_trace.csv").string(), 0);
  std::ifstream snap(dir / "polywave_ref_snap.csv"), trace(dir / "polywave_ref_trace.csv");
  std::string header;
  std::getline(snap, header);
  CHECK(header == "x1,x2,value");
  std::getline(trace, header);
  CHECK(header == "t,value");
}
