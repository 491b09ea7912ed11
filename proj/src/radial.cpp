#include "polywave/radial.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace polywave {
namespace {

static_assert(std::endian::native == std::endian::little, "binary grid format assumes little endian");

constexpr double kTailLimit = 1e-5;

template <class T>
void write_raw(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_raw(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("truncated grid file");
  return v;
}

}  // namespace

double RadialProfile::raw(double rho) const {
  const double q = rho * rho / (sigma * sigma);
  switch (kind) {
    case ProfileKind::Zero: return 0.0;
    case ProfileKind::Gaussian: return amplitude * std::exp(-0.5 * q);
    case ProfileKind::Ricker: return amplitude * (1.0 - q) * std::exp(-0.5 * q);
  }
  return 0.0;
}

double RadialProfile::value(double rho, double R) const {
  if (kind == ProfileKind::Zero || rho > R) return 0.0;
  return raw(rho) - raw(R);
}

double Forcing::spatial(double rho, double R) const {
  if (kind == ForcingKind::Zero || rho > R) return 0.0;
  const double s2 = 2.0 * sigma_g * sigma_g;
  return std::exp(-rho * rho / s2) - std::exp(-R * R / s2);
}

double Forcing::value(double rho, double t, double R) const {
  if (kind == ForcingKind::Zero) return 0.0;
  return -amplitude * omega * omega * std::sin(omega * t) * spatial(rho, R);
}

void SourceSpec::validate() const {
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("source: R must be positive");
  for (const RadialProfile* p : {&eta0, &eta1}) {
    if (p->kind == ProfileKind::Zero) continue;
    if (!(p->sigma > 0.0)) throw std::invalid_argument("source: sigma must be positive");
    if (std::abs(p->raw(R)) > kTailLimit * std::abs(p->amplitude)) {
      throw std::invalid_argument("source: profile support exceeds R (tail at R above 1e-5)");
    }
  }
  if (eta2.kind == ForcingKind::Harmonic) {
    if (!(eta2.sigma_g > 0.0) || !(eta2.omega > 0.0)) {
      throw std::invalid_argument("source: harmonic forcing needs positive omega and sigma_g");
    }
    if (std::exp(-R * R / (2.0 * eta2.sigma_g * eta2.sigma_g)) > kTailLimit) {
      throw std::invalid_argument("source: forcing support exceeds R (tail at R above 1e-5)");
    }
  }
}

bool SourceSpec::is_zero() const {
  return eta0.kind == ProfileKind::Zero && eta1.kind == ProfileKind::Zero &&
         eta2.kind == ForcingKind::Zero;
}

GridSize default_grid(double T, double R) {
  GridSize g;
  g.n_rho = static_cast<std::size_t>(std::llround((T + R) / 0.006)) + 1;
  g.n_t = static_cast<std::size_t>(std::ceil(T / 0.0025 - 1e-9));
  g.n_rho = std::max<std::size_t>(g.n_rho, 2);
  g.n_t = std::max<std::size_t>(g.n_t, 1);
  return g;
}

FreeSpaceGrid::FreeSpaceGrid(double rho_max, double T, double R, std::size_t n_rho, std::size_t n_t,
                             std::vector<double> values)
    : rho_max_(rho_max), T_(T), R_(R), n_rho_(n_rho), n_t_(n_t), values_(std::move(values)) {
  if (n_rho_ < 2 || n_t_ < 1) throw std::invalid_argument("grid: need n_rho >= 2 and n_t >= 1");
  if (values_.size() != n_rho_ * (n_t_ + 1)) throw std::invalid_argument("grid: value count mismatch");
  dx_ = rho_max_ / static_cast<double>(n_rho_ - 1);
  dt_ = T_ / static_cast<double>(n_t_);
  suffix_max_.assign(n_rho_ + 1, 0.0);
  for (std::size_t n = 0; n <= n_t_; ++n) {
    for (std::size_t i = 0; i < n_rho_; ++i) {
      suffix_max_[i] = std::max(suffix_max_[i], std::abs(values_[n * n_rho_ + i]));
    }
  }
  for (std::size_t i = n_rho_; i-- > 0;) suffix_max_[i] = std::max(suffix_max_[i], suffix_max_[i + 1]);
}

double FreeSpaceGrid::sample(double rho, double t) const {
  const double ttol = 1e-12 * std::max(1.0, T_);
  if (!(t >= -ttol && t <= T_ + ttol)) {
    throw std::out_of_range("Psi sample: t = " + std::to_string(t) + " outside [0, T]");
  }
  if (!(rho >= 0.0)) throw std::out_of_range("Psi sample: negative rho");
  if (rho > rho_max_) return 0.0;
  const double fi = rho / dx_;
  const double fn = std::clamp(t, 0.0, T_) / dt_;
  std::size_t i = std::min(static_cast<std::size_t>(fi), n_rho_ - 2);
  std::size_t n = std::min(static_cast<std::size_t>(fn), n_t_ - 1);
  const double a = fi - static_cast<double>(i);
  const double b = fn - static_cast<double>(n);
  const double* row0 = &values_[n * n_rho_ + i];
  const double* row1 = row0 + n_rho_;
  return (1.0 - b) * ((1.0 - a) * row0[0] + a * row0[1]) + b * ((1.0 - a) * row1[0] + a * row1[1]);
}

double FreeSpaceGrid::max_abs_from(double rho_min) const {
  if (rho_min <= 0.0) return suffix_max_[0];
  const double fi = std::ceil(rho_min / dx_ - 1e-12);
  if (fi >= static_cast<double>(n_rho_)) return 0.0;
  return suffix_max_[static_cast<std::size_t>(fi)];
}

void FreeSpaceGrid::save_binary(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_raw<std::uint64_t>(out, n_rho_);
  write_raw<std::uint64_t>(out, n_t_);
  write_raw<double>(out, rho_max_);
  write_raw<double>(out, T_);
  for (std::size_t i = 0; i < n_rho_; ++i) {
    for (std::size_t n = 0; n <= n_t_; ++n) write_raw<double>(out, node(i, n));
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

FreeSpaceGrid FreeSpaceGrid::load_binary(const std::string& path, double R) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  const auto n_rho = read_raw<std::uint64_t>(in);
  const auto n_t = read_raw<std::uint64_t>(in);
  const double rho_max = read_raw<double>(in);
  const double T = read_raw<double>(in);
  std::vector<double> values(n_rho * (n_t + 1));
  for (std::size_t i = 0; i < n_rho; ++i) {
    for (std::size_t n = 0; n <= n_t; ++n) values[n * n_rho + i] = read_raw<double>(in);
  }
  return FreeSpaceGrid(rho_max, T, R, n_rho, n_t, std::move(values));
}

FreeSpaceGrid solve_radial(const SourceSpec& src, double T, std::size_t n_rho, std::size_t n_t) {
  src.validate();
  if (!(T > 0.0)) throw std::invalid_argument("solve_radial: T must be positive");
  if (n_rho < 2 || n_t < 1) throw std::invalid_argument("solve_radial: need n_rho >= 2 and n_t >= 1");
  const double rho_max = T + src.R;
  const std::size_t N = n_rho - 1;
  const double h = rho_max / static_cast<double>(N);
  const double dt = T / static_cast<double>(n_t);
  if (dt / h > 1.0) {
    throw std::invalid_argument("solve_radial: CFL violated, dt/dx = " + std::to_string(dt / h));
  }

  std::vector<double> rho(n_rho), mass(n_rho, 0.0), diag(n_rho, 0.0), off(N, 0.0);
  for (std::size_t i = 0; i < n_rho; ++i) rho[i] = h * static_cast<double>(i);
  for (std::size_t e = 0; e < N; ++e) {
    const double k = 0.5 * (rho[e] + rho[e + 1]) / h;
    diag[e] += k;
    diag[e + 1] += k;
    off[e] -= k;
    mass[e] += h * (2.0 * rho[e] + rho[e + 1]) / 6.0;
    mass[e + 1] += h * (rho[e] + 2.0 * rho[e + 1]) / 6.0;
  }

  // out = -M^{-1} K u
  auto accel = [&](const std::vector<double>& u, std::vector<double>& out) {
    for (std::size_t i = 0; i < n_rho; ++i) {
      double ku = diag[i] * u[i];
      if (i > 0) ku += off[i - 1] * u[i - 1];
      if (i < N) ku += off[i] * u[i + 1];
      out[i] = -ku / mass[i];
    }
  };

  // Stability of the lumped system: dt^2 * lambda_max(M^{-1} K) <= 4.
  {
    std::vector<double> x(n_rho), y(n_rho);
    for (std::size_t i = 0; i < n_rho; ++i) x[i] = (i % 2 == 0) ? 1.0 : -1.0;
    double lambda = 0.0;
    for (int it = 0; it < 60; ++it) {
      accel(x, y);
      double nrm = 0.0;
      for (double v : y) nrm = std::max(nrm, std::abs(v));
      lambda = nrm;
      for (std::size_t i = 0; i < n_rho; ++i) x[i] = -y[i] / nrm;
    }
    if (dt * dt * lambda > 4.0 * (1.0 + 1e-9)) {
      throw std::invalid_argument("solve_radial: leapfrog unstable for this dt near rho = 0");
    }
  }

  std::vector<double> values(n_rho * (n_t + 1), 0.0);
  std::vector<double> prev(n_rho), cur(n_rho), next(n_rho), acc(n_rho);
  const double R = src.R;
  for (std::size_t i = 0; i < n_rho; ++i) cur[i] = src.eta0.value(rho[i], R);
  std::copy(cur.begin(), cur.end(), values.begin());

  auto total_accel = [&](const std::vector<double>& u, double t, std::vector<double>& out) {
    accel(u, out);
    if (src.eta2.kind != ForcingKind::Zero) {
      for (std::size_t i = 0; i < n_rho; ++i) out[i] += src.eta2.value(rho[i], t, R);
    }
  };

  total_accel(cur, 0.0, acc);
  for (std::size_t i = 0; i < n_rho; ++i) {
    prev[i] = cur[i] - dt * src.eta1.value(rho[i], R) + 0.5 * dt * dt * acc[i];
  }

  std::vector<double> energy(n_t, 0.0);
  for (std::size_t n = 0; n < n_t; ++n) {
    if (n > 0) total_accel(cur, dt * static_cast<double>(n), acc);
    for (std::size_t i = 0; i < n_rho; ++i) next[i] = 2.0 * cur[i] - prev[i] + dt * dt * acc[i];

    double kinetic = 0.0;
    double potential = 0.0;
    for (std::size_t i = 0; i < n_rho; ++i) {
      const double v = (next[i] - cur[i]) / dt;
      kinetic += mass[i] * v * v;
      double ku = diag[i] * cur[i];
      if (i > 0) ku += off[i - 1] * cur[i - 1];
      if (i < N) ku += off[i] * cur[i + 1];
      potential += next[i] * ku;
    }
    energy[n] = 0.5 * (kinetic + potential);

    std::copy(next.begin(), next.end(), values.begin() + static_cast<std::ptrdiff_t>((n + 1) * n_rho));
    std::swap(prev, cur);
    std::swap(cur, next);
  }

  FreeSpaceGrid grid(rho_max, T, R, n_rho, n_t, std::move(values));
  grid.set_energy(std::move(energy));
  return grid;
}

}  // namespace polywave
