#pragma once

// Independent reference computations used by the tests. Nothing here calls into the library's
// numerical kernels.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

inline constexpr double pi = 3.14159265358979323846;

/// Composite Simpson rule with n (even) panels.
template <class F>
auto simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  auto sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * (h / 3.0);
}

/// F(x) = 2 sqrt(x) |int_{sqrt x}^inf exp(i t^2) dt|.
/// Brute-force Simpson up to L, then the asymptotic series of the remaining tail.
inline double fresnel_transition(double x) {
  if (x == 0.0) return 0.0;
  using cplx = std::complex<double>;
  const double a = std::sqrt(x);
  const double L = std::max(20.0, a + 10.0);
  const int n = 2 * static_cast<int>(std::ceil((L - a) / 2e-4 / 2.0));
  const cplx body = simpson([](double t) { return std::exp(cplx(0.0, t * t)); }, a, L, n);
  // int_L^inf e^{i t^2} dt = -e^{i L^2}/(2 i L) * sum_k (2k-1)!! / (2 i L^2)^k
  cplx series = 0.0, term = 1.0;
  for (int k = 0; k < 8; ++k) {
    series += term;
    term *= static_cast<double>(2 * k + 1) / cplx(0.0, 2.0 * L * L);
  }
  const cplx tail = -std::exp(cplx(0.0, L * L)) / cplx(0.0, 2.0 * L) * series;
  return 2.0 * a * std::abs(body + tail);
}

/// Psi for an untruncated Gaussian initial displacement of width sigma at rest, via the
/// Hankel transform: sigma^2 int_0^inf exp(-k^2 sigma^2 / 2) cos(k t) J0(k rho) k dk.
inline double gaussian_free_space(double sigma, double rho, double t) {
  const double kmax = 9.0 / sigma;
  return sigma * sigma * simpson(
                             [&](double k) {
                               return std::exp(-0.5 * k * k * sigma * sigma) * std::cos(k * t) *
                                      std::cyl_bessel_j(0.0, k * rho) * k;
                             },
                             0.0, kmax, 20000);
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Mirror of (x1, x2) across the horizontal line x2 = c.
inline std::pair<double, double> mirror_horizontal(double x1, double x2, double c) { return {x1, 2.0 * c - x2}; }

}  // namespace oracle
