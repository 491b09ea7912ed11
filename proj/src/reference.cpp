#include "polywave/reference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace polywave {
namespace {

constexpr double kTimeTol = 1e-9;

double narrowest_feature(const SourceSpec& src) {
  double s = std::numeric_limits<double>::infinity();
  for (const RadialProfile* p : {&src.eta0, &src.eta1}) {
    if (p->kind != ProfileKind::Zero) s = std::min(s, p->sigma);
  }
  if (src.eta2.kind != ForcingKind::Zero) s = std::min(s, src.eta2.sigma_g);
  return s;
}

/// Cell-center lattice offset that puts a cell corner on the first fully physical vertex,
/// or else on the start of the first physical edge.
Point2 lattice_offset(const Domain& d, double h) {
  auto corner_at = [h](Point2 p) -> Point2 {
    return {p.x1 - 0.5 * h - h * std::floor(p.x1 / h), p.x2 - 0.5 * h - h * std::floor(p.x2 / h)};
  };
  for (const VertexInfo& v : d.vertices()) {
    if (v.physical) return corner_at(v.position);
  }
  for (const Edge& e : d.edges()) {
    if (e.physical) return corner_at(e.a);
  }
  return {0.0, 0.0};
}

}  // namespace

ReferenceGrid solve_reference(const Domain& d, const SourceSpec& src, double T, const ReferenceOptions& opt) {
  src.validate();
  const double h = opt.h;
  if (!(h > 0.0)) throw std::invalid_argument("reference: h must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("reference: T must be positive");
  if (!(opt.cfl > 0.0 && opt.cfl <= 1.0)) {
    throw std::invalid_argument("reference: CFL violated, need dt <= h/sqrt(2)");
  }
  if (opt.check_resolution) {
    const double sigma = narrowest_feature(src);
    if (h > 0.4 * sigma) {
      throw std::invalid_argument("reference: h = " + std::to_string(h) +
                                  " under-resolves the source (need h <= 0.4 sigma)");
    }
    for (const Edge& e : d.edges()) {
      if (e.physical && e.length() < 5.0 * h) {
        throw std::invalid_argument("reference: edge " + std::to_string(e.index) +
                                    " shorter than 5 cells");
      }
    }
  }

  ReferenceGrid g;
  g.domain_ = &d;
  g.h_ = h;
  // One ring of exterior cells around the bounding box keeps every stencil in range.
  const Point2 off = lattice_offset(d, h);
  const int i_lo = static_cast<int>(std::floor((d.lower().x1 - off.x1) / h)) - 1;
  const int i_hi = static_cast<int>(std::ceil((d.upper().x1 - off.x1) / h)) + 1;
  const int j_lo = static_cast<int>(std::floor((d.lower().x2 - off.x2) / h)) - 1;
  const int j_hi = static_cast<int>(std::ceil((d.upper().x2 - off.x2) / h)) + 1;
  g.nx_ = i_hi - i_lo + 1;
  g.ny_ = j_hi - j_lo + 1;
  g.x0_ = off.x1 + h * i_lo;
  g.y0_ = off.x2 + h * j_lo;
  const std::size_t ncell = static_cast<std::size_t>(g.nx_) * static_cast<std::size_t>(g.ny_);

  std::vector<double> active(ncell, 0.0);
  for (int j = 1; j + 1 < g.ny_; ++j) {
    for (int i = 1; i + 1 < g.nx_; ++i) {
      if (d.contains(g.center(i, j))) active[g.index(i, j)] = 1.0;
    }
  }
  g.mask_.assign(ncell, CellKind::Exterior);
  std::vector<double> kc(ncell, 0.0);
  const int di[4] = {1, -1, 0, 0};
  const int dj[4] = {0, 0, 1, -1};
  for (int j = 1; j + 1 < g.ny_; ++j) {
    for (int i = 1; i + 1 < g.nx_; ++i) {
      const std::size_t c = g.index(i, j);
      if (active[c] == 0.0) continue;
      double k = 4.0;
      CellKind kind = CellKind::Interior;
      for (int q = 0; q < 4; ++q) {
        if (active[g.index(i + di[q], j + dj[q])] != 0.0) continue;
        const Point2 face = g.center(i, j) + 0.5 * h * Point2{double(di[q]), double(dj[q])};
        const Edge& e = d.edges()[static_cast<std::size_t>(d.nearest_edge(face).second)];
        if (e.bc == BoundaryCondition::Neumann) {
          k -= 1.0;
          if (kind == CellKind::Interior) kind = CellKind::NeumannBoundary;
        } else {
          kind = CellKind::DirichletBoundary;
        }
      }
      kc[c] = k;
      g.mask_[c] = kind;
    }
  }

  const double dt_max = opt.cfl * h / std::sqrt(2.0);
  g.n_steps_ = static_cast<std::size_t>(std::ceil(T / dt_max - 1e-12));
  g.dt_ = T / static_cast<double>(g.n_steps_);
  const double dt = g.dt_;
  const double c2 = dt * dt / (h * h);

  std::vector<double> u0(ncell, 0.0), u1(ncell, 0.0), un(ncell, 0.0), lap(ncell, 0.0);
  std::vector<double> gsp(ncell, 0.0), vel0(ncell, 0.0);
  const double R = src.R;
  for (int j = 0; j < g.ny_; ++j) {
    for (int i = 0; i < g.nx_; ++i) {
      const std::size_t c = g.index(i, j);
      if (active[c] == 0.0) continue;
      const Point2 x = g.center(i, j);
      const double rho = norm(x);
      u1[c] = opt.initial_override ? opt.initial_override(x) : src.eta0.value(rho, R);
      vel0[c] = src.eta1.value(rho, R);
      gsp[c] = src.eta2.spatial(rho, R);
    }
  }
  const bool forced = src.eta2.kind != ForcingKind::Zero;
  auto forcing_factor = [&](double t) {
    return forced ? -src.eta2.amplitude * src.eta2.omega * src.eta2.omega * std::sin(src.eta2.omega * t) : 0.0;
  };

  const std::size_t nx = static_cast<std::size_t>(g.nx_);
  auto laplacian = [&](const std::vector<double>& u, std::vector<double>& out) {
    for (std::size_t j = 1; j + 1 < static_cast<std::size_t>(g.ny_); ++j) {
      const std::size_t row = j * nx;
      for (std::size_t i = 1; i + 1 < nx; ++i) {
        const std::size_t c = row + i;
        out[c] = active[c] * (u[c + 1] + u[c - 1] + u[c + nx] + u[c - nx] - kc[c] * u[c]);
      }
    }
  };

  // u0 holds the step before, u1 the current step.
  laplacian(u1, lap);
  const double f0 = forcing_factor(0.0);
  for (std::size_t c = 0; c < ncell; ++c) {
    u0[c] = active[c] * (u1[c] - dt * vel0[c] + 0.5 * (c2 * lap[c] + dt * dt * f0 * gsp[c]));
  }

  g.snapshot_times_ = opt.snapshot_times;
  for (double ts : g.snapshot_times_) {
    if (!(ts >= 0.0 && ts <= T + kTimeTol)) throw std::invalid_argument("reference: snapshot time outside [0, T]");
  }
  g.snapshots_.assign(g.snapshot_times_.size(), {});
  g.probes_ = opt.probes;
  g.traces_.assign(g.probes_.size(), {});
  for (const Point2& p : g.probes_) {
    if (!d.contains(p)) throw std::invalid_argument("reference: probe outside the domain");
  }

  auto record = [&](std::size_t n, const std::vector<double>& prev, const std::vector<double>& cur) {
    const double t_prev = dt * static_cast<double>(n - (n > 0 ? 1 : 0));
    const double t_cur = dt * static_cast<double>(n);
    for (std::size_t k = 0; k < g.snapshot_times_.size(); ++k) {
      if (!g.snapshots_[k].empty()) continue;
      const double ts = g.snapshot_times_[k];
      if (n == 0) {
        if (std::abs(ts) <= kTimeTol) g.snapshots_[k] = cur;
        continue;
      }
      if (ts <= t_cur + kTimeTol && ts >= t_prev - kTimeTol) {
        const double w = std::clamp((ts - t_prev) / dt, 0.0, 1.0);
        std::vector<double> s(ncell);
        for (std::size_t c = 0; c < ncell; ++c) s[c] = (1.0 - w) * prev[c] + w * cur[c];
        g.snapshots_[k] = std::move(s);
      }
    }
  };
  auto sample_field = [&](const std::vector<double>& u, Point2 x) {
    const double fx = (x.x1 - g.x0_) / h;
    const double fy = (x.x2 - g.y0_) / h;
    const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nx_ - 2);
    const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.ny_ - 2);
    const double a = fx - i;
    const double b = fy - j;
    const double w[4] = {(1 - a) * (1 - b), a * (1 - b), (1 - a) * b, a * b};
    const std::size_t cs[4] = {g.index(i, j), g.index(i + 1, j), g.index(i, j + 1), g.index(i + 1, j + 1)};
    double num = 0.0, den = 0.0;
    for (int q = 0; q < 4; ++q) {
      num += w[q] * active[cs[q]] * u[cs[q]];
      den += w[q] * active[cs[q]];
    }
    return den > 0.0 ? num / den : 0.0;
  };

  auto push_traces = [&](const std::vector<double>& u) {
    for (std::size_t p = 0; p < g.probes_.size(); ++p) g.traces_[p].push_back(sample_field(u, g.probes_[p]));
  };

  record(0, u1, u1);
  push_traces(u1);
  g.energy_.reserve(g.n_steps_);
  const double h2 = h * h;
  for (std::size_t n = 0; n < g.n_steps_; ++n) {
    laplacian(u1, lap);
    const double fn = dt * dt * forcing_factor(dt * static_cast<double>(n));
    for (std::size_t c = 0; c < ncell; ++c) {
      un[c] = active[c] * (2.0 * u1[c] - u0[c] + c2 * lap[c] + fn * gsp[c]);
    }
    double kinetic = 0.0, potential = 0.0;
    for (std::size_t c = 0; c < ncell; ++c) {
      const double v = (un[c] - u1[c]) / dt;
      kinetic += v * v;
      potential -= un[c] * lap[c];
    }
    g.energy_.push_back(0.5 * h2 * kinetic + 0.5 * potential);
    record(n + 1, u1, un);
    push_traces(un);
    std::swap(u0, u1);
    std::swap(u1, un);
  }
  for (std::size_t k = 0; k < g.snapshots_.size(); ++k) {
    if (g.snapshots_[k].empty()) throw std::logic_error("reference: snapshot was not recorded");
  }
  return g;
}

double ReferenceGrid::sample_snapshot(std::size_t k, Point2 x) const {
  if (domain_ && !domain_->contains(x)) {
    throw std::domain_error("reference sample: point outside the domain");
  }
  const std::vector<double>& u = snapshots_.at(k);
  const double fx = (x.x1 - x0_) / h_;
  const double fy = (x.x2 - y0_) / h_;
  const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, nx_ - 2);
  const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, ny_ - 2);
  const double a = fx - i;
  const double b = fy - j;
  const double w[4] = {(1 - a) * (1 - b), a * (1 - b), (1 - a) * b, a * b};
  const std::size_t cs[4] = {index(i, j), index(i + 1, j), index(i, j + 1), index(i + 1, j + 1)};
  double num = 0.0, den = 0.0;
  for (int q = 0; q < 4; ++q) {
    if (mask_[cs[q]] == CellKind::Exterior) continue;
    num += w[q] * u[cs[q]];
    den += w[q];
  }
  if (den <= 0.0) {
    // Thin features can leave a domain point with no active neighbour; take the nearest active cell.
    double best = std::numeric_limits<double>::infinity();
    double val = 0.0;
    for (int jj = std::max(0, j - 2); jj <= std::min(ny_ - 1, j + 3); ++jj) {
      for (int ii = std::max(0, i - 2); ii <= std::min(nx_ - 1, i + 3); ++ii) {
        if (mask_[index(ii, jj)] == CellKind::Exterior) continue;
        const double dd = distance(center(ii, jj), x);
        if (dd < best) {
          best = dd;
          val = u[index(ii, jj)];
        }
      }
    }
    if (!std::isfinite(best)) throw std::domain_error("reference sample: no active cell near point");
    return val;
  }
  return num / den;
}

double ReferenceGrid::sample(Point2 x, double t) const {
  for (std::size_t k = 0; k < snapshot_times_.size(); ++k) {
    if (std::abs(snapshot_times_[k] - t) <= kTimeTol) return sample_snapshot(k, x);
  }
  for (std::size_t p = 0; p < probes_.size(); ++p) {
    if (distance(probes_[p], x) > 1e-12 * std::max(1.0, norm(x))) continue;
    const double T = dt_ * static_cast<double>(n_steps_);
    if (!(t >= -kTimeTol && t <= T + kTimeTol)) throw std::out_of_range("reference sample: t outside [0, T]");
    const double fn = std::clamp(t / dt_, 0.0, static_cast<double>(n_steps_));
    const std::size_t n = std::min(static_cast<std::size_t>(fn), n_steps_ - 1);
    const double w = fn - static_cast<double>(n);
    return (1.0 - w) * traces_[p][n] + w * traces_[p][n + 1];
  }
  throw std::out_of_range("reference sample: no stored snapshot or probe for this query");
}

void ReferenceGrid::write_snapshot_csv(const std::string& path, std::size_t k) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << std::setprecision(17) << "x1,x2,value\n";
  const std::vector<double>& u = snapshots_.at(k);
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      if (mask_[index(i, j)] == CellKind::Exterior) continue;
      const Point2 c = center(i, j);
      out << c.x1 << ',' << c.x2 << ',' << u[index(i, j)] << '\n';
    }
  }
}

void ReferenceGrid::write_trace_csv(const std::string& path, std::size_t p) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << std::setprecision(17) << "t,value\n";
  const std::vector<double>& tr = traces_.at(p);
  for (std::size_t n = 0; n < tr.size(); ++n) out << trace_time(n) << ',' << tr[n] << '\n';
}

double relative_l2_error(const FieldSampler& a, const FieldSampler& b, const Domain& d, double quad_h) {
  if (!(quad_h > 0.0)) throw std::invalid_argument("relative_l2_error: quad_h must be positive");
  const Point2 lo = d.lower();
  const Point2 hi = d.upper();
  const int nx = std::max(1, static_cast<int>(std::ceil((hi.x1 - lo.x1) / quad_h)));
  const int ny = std::max(1, static_cast<int>(std::ceil((hi.x2 - lo.x2) / quad_h)));
  double num = 0.0, den = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Point2 x{lo.x1 + (i + 0.5) * quad_h, lo.x2 + (j + 0.5) * quad_h};
      if (!d.contains(x)) continue;
      const double bv = b(x);
      const double diff = a(x) - bv;
      num += diff * diff;
      den += bv * bv;
    }
  }
  if (!(den > 0.0)) throw std::domain_error("relative_l2_error: reference field is identically zero");
  return std::sqrt(num / den);
}

}  // namespace polywave
