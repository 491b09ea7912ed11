#pragma once

// Wedge diffraction coefficient (uniform theory of diffraction) frozen at a
// fixed dimensionless distance, plus the Fresnel transition function it uses.

#include <array>
#include <stdexcept>
#include <vector>

#include "polywave/point.hpp"

namespace polywave {

/// Local angular frame of a diffracting wedge.
///
/// Angles are measured counterclockwise from the reference face, through the
/// domain, so that every direction into the domain has phi in (0, 2pi - alpha).
struct WedgeLocalFrame {
  double alpha = kPi;           ///< exterior angle (outside the domain)
  double theta = 0.5 * kPi;     ///< incidence angle of the illuminating source
  double nu = 1.0;              ///< wedge index pi / (2pi - alpha)
  int bc_sign = 1;              ///< +1 Neumann faces, -1 Dirichlet faces
  Point2 origin{};              ///< wedge apex
  double reference_angle = 0.0; ///< global polar angle of the reference face
  bool grazing = false;         ///< incidence within tolerance of a face

  /// Opening of the domain at the apex.
  double opening() const { return kTwoPi - alpha; }

  /// Local angle phi of a global point (not the apex itself).
  double angle_of(Point2 x) const { return wrap_angle(polar_angle(x - origin) - reference_angle); }

  /// Global polar angle of the local direction phi.
  double global_angle(double phi) const { return reference_angle + phi; }
};

/// Builds a frame directly from angles; apex at the origin, reference face along +x1.
WedgeLocalFrame make_wedge_frame(double alpha, double theta, int bc_sign);

struct DiffractionParams {
  double mu_bar = 10.0;    ///< frozen product of wavenumber and distance
  double eps_sing = 1e-7;  ///< angular guard around cotangent poles
};

enum class ShadowKind { Incident, Reflected };

struct ShadowBoundary {
  double phi = 0.0;
  ShadowKind kind = ShadowKind::Reflected;
};

/// F(x) = 2 sqrt(x) |int_{sqrt x}^inf exp(i y^2) dy|. Throws on negative x.
double fresnel_transition(double x);

/// pi / (2pi - alpha). Throws unless 0 < alpha < 2pi.
double wedge_index(double alpha);

/// True when the wedge index is an integer (within 1e-12), i.e. the wedge does not diffract.
bool is_non_diffracting(double alpha);

/// Shadow-boundary angles strictly inside (0, 2pi - alpha), sorted, duplicates merged.
std::vector<ShadowBoundary> shadow_boundaries(const WedgeLocalFrame& frame);

/// The four partial terms D_1..D_4 at dimensionless distance mu.
std::array<double, 4> diffraction_terms(const WedgeLocalFrame& frame, double mu, double phi,
                                        double eps_sing = 1e-7);

/// D = D_1 + D_2 +/- (D_3 + D_4) at the frozen distance params.mu_bar.
double diffraction_coefficient(const WedgeLocalFrame& frame, const DiffractionParams& params,
                               double phi);

/// Same coefficient at an arbitrary dimensionless distance mu = k * s.
double diffraction_coefficient_at(const WedgeLocalFrame& frame, double mu, double phi,
                                  double eps_sing = 1e-7);

}  // namespace polywave
