#include "polywave/utd.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

namespace polywave {
namespace {

using cplx = std::complex<double>;

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
cplx kronrod15(F&& f, double a, double b, double* err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx kronrod = fc * kKronrodWeights[7];
  cplx gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    const cplx sum = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  *err = std::abs((kronrod - gauss) * h);
  return kronrod * h;
}

template <class F>
cplx adaptive_integral(F&& f, double a, double b, double tol, int depth = 0) {
  double err = 0.0;
  const cplx whole = kronrod15(f, a, b, &err);
  if (err <= tol || depth >= 40) return whole;
  const double m = 0.5 * (a + b);
  return adaptive_integral(f, a, m, 0.5 * tol, depth + 1) +
         adaptive_integral(f, m, b, 0.5 * tol, depth + 1);
}

// floor(x + 1/2): ties go upward, which keeps integer wedge indices exactly non-diffracting.
int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

struct TermShape {
  double phi_sign;    // +1 when the pole angle grows with phi
  double theta_sign;  // sign of theta inside the pole angle
  double pi_sign;     // sign of pi inside the pole angle
  bool sum_family;    // (phi + theta) terms model reflections
};

// pole angle  = nu/2 * (pi_sign*pi + phi_sign*phi + theta_sign*theta)
constexpr std::array<TermShape, 4> kTerms = {{
    {+1.0, -1.0, +1.0, false},
    {-1.0, +1.0, +1.0, false},
    {+1.0, +1.0, +1.0, true},
    {-1.0, -1.0, +1.0, true},
}};

std::array<int, 4> rounded_indices(double nu) {
  return {round_half_up(0.5 * nu), round_half_up(-0.5 * nu), round_half_up(0.5 * (1.0 + nu)),
          round_half_up(0.5 * (1.0 - nu))};
}

double term_value(const WedgeLocalFrame& f, int j, int n_j, double mu, double phi, double eps_sing) {
  const TermShape& s = kTerms[j];
  const double half_nu = 0.5 * f.nu;
  auto pole_angle = [&](double p) {
    return half_nu * (s.pi_sign * kPi + s.phi_sign * p + s.theta_sign * f.theta);
  };
  double hat = pole_angle(phi);
  const double m = std::round(hat / kPi);
  const double d = hat - m * kPi;
  if (std::abs(d) < eps_sing) {
    const double target = d >= 0.0 ? eps_sing : -eps_sing;
    phi += (target - d) / (s.phi_sign * half_nu);
    hat = pole_angle(phi);
  }
  const double half_diff = s.sum_family ? 0.5 * (phi + f.theta) : 0.5 * (phi - f.theta);
  const double tilde = n_j * f.opening() - half_diff;
  const double c = std::cos(tilde);
  const double prefactor = -f.nu / (2.0 * std::sqrt(kTwoPi * mu));
  return prefactor * (std::cos(hat) / std::sin(hat)) * fresnel_transition(2.0 * mu * c * c);
}

}  // namespace

double fresnel_transition(double x) {
  if (!(x >= 0.0)) throw std::domain_error("fresnel_transition: argument must be nonnegative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x <= 4.0) {
    // Tail = total - partial; the partial integral from its power series.
    const double a = std::sqrt(x);
    const double a2 = x;
    cplx partial = 0.0;
    cplx power = a;  // i^n a^(2n+1) / n!
    for (int n = 0; n < 80; ++n) {
      const cplx term = power / static_cast<double>(2 * n + 1);
      partial += term;
      if (std::abs(term) < 1e-18) break;
      power *= cplx(0.0, a2) / static_cast<double>(n + 1);
    }
    const double total = std::sqrt(kPi / 8.0);
    const cplx tail = cplx(total, total) - partial;
    return 2.0 * a * std::abs(tail);
  }
  // Rotating the contour turns the oscillatory tail into a decaying one:
  // F(x) = | int_0^inf e^{-u} (1 + i u / x)^{-1/2} du |.
  auto integrand = [x](double u) { return std::exp(-u) / std::sqrt(cplx(1.0, u / x)); };
  const cplx value = adaptive_integral(integrand, 0.0, 4.0, 1e-15) +
                     adaptive_integral(integrand, 4.0, 60.0, 1e-15);
  return std::abs(value);
}

double wedge_index(double alpha) {
  if (!(alpha > 0.0 && alpha < kTwoPi)) {
    throw std::domain_error("wedge_index: exterior angle must lie in (0, 2pi), got " +
                            std::to_string(alpha));
  }
  return kPi / (kTwoPi - alpha);
}

bool is_non_diffracting(double alpha) {
  const double nu = wedge_index(alpha);
  return std::abs(nu - std::round(nu)) <= 1e-12;
}

WedgeLocalFrame make_wedge_frame(double alpha, double theta, int bc_sign) {
  WedgeLocalFrame f;
  f.nu = wedge_index(alpha);
  f.alpha = alpha;
  if (!(theta >= 0.0 && theta <= f.opening())) {
    throw std::domain_error("make_wedge_frame: incidence angle outside the wedge opening");
  }
  f.theta = theta;
  f.bc_sign = bc_sign >= 0 ? 1 : -1;
  return f;
}

std::vector<ShadowBoundary> shadow_boundaries(const WedgeLocalFrame& frame) {
  const double open = frame.opening();
  const double tol = 1e-12;
  const int m_max = static_cast<int>(std::ceil(frame.nu)) + 3;
  std::vector<ShadowBoundary> out;
  auto consider = [&](double phi, ShadowKind kind) {
    if (phi > tol && phi < open - tol) out.push_back({phi, kind});
  };
  for (int m = -m_max; m <= m_max; ++m) {
    const double shift = 2.0 * m * open;
    const ShadowKind direct = (m == 0) ? ShadowKind::Incident : ShadowKind::Reflected;
    consider(frame.theta - kPi + shift, direct);
    consider(frame.theta + kPi - shift, direct);
    consider(-frame.theta - kPi + shift, ShadowKind::Reflected);
    consider(kPi - frame.theta - shift, ShadowKind::Reflected);
  }
  std::sort(out.begin(), out.end(),
            [](const ShadowBoundary& a, const ShadowBoundary& b) { return a.phi < b.phi; });
  std::vector<ShadowBoundary> merged;
  for (const ShadowBoundary& b : out) {
    if (!merged.empty() && std::abs(merged.back().phi - b.phi) <= 1e-10) {
      if (b.kind == ShadowKind::Incident) merged.back().kind = ShadowKind::Incident;
      continue;
    }
    merged.push_back(b);
  }
  return merged;
}

std::array<double, 4> diffraction_terms(const WedgeLocalFrame& frame, double mu, double phi,
                                        double eps_sing) {
  if (!(mu > 0.0)) throw std::domain_error("diffraction_terms: mu must be positive");
  const std::array<int, 4> n = rounded_indices(frame.nu);
  std::array<double, 4> d{};
  for (int j = 0; j < 4; ++j) d[j] = term_value(frame, j, n[j], mu, phi, eps_sing);
  return d;
}

double diffraction_coefficient_at(const WedgeLocalFrame& frame, double mu, double phi,
                                  double eps_sing) {
  const double open = frame.opening();
  if (!(phi >= -1e-12 && phi <= open + 1e-12)) {
    throw std::domain_error("diffraction_coefficient: phi outside the wedge opening");
  }
  const std::array<double, 4> d = diffraction_terms(frame, mu, phi, eps_sing);
  return d[0] + d[1] + frame.bc_sign * (d[2] + d[3]);
}

double diffraction_coefficient(const WedgeLocalFrame& frame, const DiffractionParams& params,
                               double phi) {
  return diffraction_coefficient_at(frame, params.mu_bar, phi, params.eps_sing);
}

}  // namespace polywave
