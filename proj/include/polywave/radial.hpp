#pragma once

// Free-space radially symmetric wave solution Psi(rho, t) on a uniform space-time grid.

#include <cstddef>
#include <string>
#include <vector>

namespace polywave {

enum class ProfileKind { Zero, Gaussian, Ricker };

/// Radial profile, shifted so that it vanishes continuously at rho = R.
struct RadialProfile {
  ProfileKind kind = ProfileKind::Zero;
  double sigma = 0.2;
  double amplitude = 1.0;

  double raw(double rho) const;
  double value(double rho, double R) const;
};

enum class ForcingKind { Zero, Harmonic };

/// -amplitude * omega^2 * sin(omega t) * exp(-rho^2 / (2 sigma_g^2)), shifted like RadialProfile.
struct Forcing {
  ForcingKind kind = ForcingKind::Zero;
  double omega = 0.0;
  double sigma_g = 0.05;
  double amplitude = 1.0;

  double spatial(double rho, double R) const;
  double value(double rho, double t, double R) const;
};

struct SourceSpec {
  RadialProfile eta0;  ///< initial displacement
  RadialProfile eta1;  ///< initial velocity
  Forcing eta2;        ///< space-time forcing
  double R = 1.0;      ///< support radius of all data

  /// Throws when R is not positive or a profile has not decayed by rho = R.
  void validate() const;
  bool is_zero() const;
};

struct GridSize {
  std::size_t n_rho = 1001;
  std::size_t n_t = 2000;
};

/// Node counts matching dx = 0.006, dt = 0.0025 (the 1001 x 2001 grid for T = 5, R = 1).
GridSize default_grid(double T, double R);

class FreeSpaceGrid {
 public:
  FreeSpaceGrid() = default;
  FreeSpaceGrid(double rho_max, double T, double R, std::size_t n_rho, std::size_t n_t,
                std::vector<double> values);

  double rho_max() const { return rho_max_; }
  double T() const { return T_; }
  double R() const { return R_; }
  std::size_t n_rho() const { return n_rho_; }
  std::size_t n_t() const { return n_t_; }
  double dx() const { return dx_; }
  double dt() const { return dt_; }

  /// Nodal value at rho index i and time index n.
  double node(std::size_t i, std::size_t n) const { return values_[n * n_rho_ + i]; }

  /// Bilinear interpolation; exactly 0 beyond rho_max. Throws for t outside [0, T] or rho < 0.
  double sample(double rho, double t) const;

  /// Largest |Psi| over grid samples with rho >= rho_min.
  double max_abs_from(double rho_min) const;

  /// Discrete energy after each step (index n holds the value between steps n and n+1).
  const std::vector<double>& energy() const { return energy_; }
  void set_energy(std::vector<double> e) { energy_ = std::move(e); }

  /// Header: n_rho, n_t (uint64), rho_max, T (float64), little endian; then rho-major samples.
  void save_binary(const std::string& path) const;
  static FreeSpaceGrid load_binary(const std::string& path, double R);

 private:
  double rho_max_ = 0.0;
  double T_ = 0.0;
  double R_ = 0.0;
  std::size_t n_rho_ = 0;
  std::size_t n_t_ = 0;
  double dx_ = 0.0;
  double dt_ = 0.0;
  std::vector<double> values_;  // time-major
  std::vector<double> suffix_max_;
  std::vector<double> energy_;
};

/// P1 finite elements in rho with the rho-weighted weak form, lumped mass, leapfrog in time,
/// on [0, T + R] x [0, T].
FreeSpaceGrid solve_radial(const SourceSpec& src, double T, std::size_t n_rho, std::size_t n_t);

}  // namespace polywave
