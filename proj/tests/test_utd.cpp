#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "polywave/utd.hpp"

using namespace polywave;

namespace {

double D(const WedgeLocalFrame& f, double mu, double phi) { return diffraction_coefficient_at(f, mu, phi); }

/// Largest offset d at which the two-sided difference D(phi0 + d) - D(phi0 - d) still exceeds 1/2.
double transition_half_width(const WedgeLocalFrame& f, double mu, double phi0) {
  double w = 0.0;
  for (double d = 1e-5; d < 1.2; d *= 1.01) {
    if (std::abs(D(f, mu, phi0 + d) - D(f, mu, phi0 - d)) >= 0.5) w = d;
  }
  return w;
}

}  // namespace

TEST_CASE("wedge index") {
  CHECK(wedge_index(1.5 * kPi) == doctest::Approx(2.0));
  CHECK(wedge_index(kPi) == doctest::Approx(1.0));
  CHECK(wedge_index(0.879 * kPi) == doctest::Approx(0.8921).epsilon(1e-4));
  CHECK_THROWS(wedge_index(0.0));
  CHECK_THROWS(wedge_index(kTwoPi));
  CHECK(is_non_diffracting(1.5 * kPi));
  CHECK(is_non_diffracting(kPi));
  CHECK_FALSE(is_non_diffracting(0.879 * kPi));
}

TEST_CASE("Fresnel transition function") {
  CHECK(fresnel_transition(0.0) == 0.0);
  CHECK_THROWS(fresnel_transition(-1.0));
  for (double x : {0.01, 0.1, 1.0, 4.0, 10.0, 100.0}) {
    CHECK(fresnel_transition(x) == doctest::Approx(oracle::fresnel_transition(x)).epsilon(1e-8));
  }
  CHECK(fresnel_transition(10.0) < fresnel_transition(100.0));
  CHECK(fresnel_transition(100.0) < 1.05);
  CHECK(fresnel_transition(100.0) > 0.95);
  // No visible seam where the evaluation method changes.
  CHECK(std::abs(fresnel_transition(4.0 - 1e-9) - fresnel_transition(4.0 + 1e-9)) < 1e-9);
}

TEST_CASE("shadow boundaries") {
  const auto sb = shadow_boundaries(make_wedge_frame(kPi / 3, kPi / 5, 1));
  REQUIRE(sb.size() == 2);
  CHECK(sb[0].phi == doctest::Approx(0.8 * kPi));
  CHECK(sb[0].kind == ShadowKind::Reflected);
  CHECK(sb[1].phi == doctest::Approx(1.2 * kPi));
  CHECK(sb[1].kind == ShadowKind::Incident);

  // Convex wedge lit from the front: no incident shadow.
  for (double theta : {0.15 * kPi, 0.5 * kPi, 0.9 * kPi}) {
    const auto b = shadow_boundaries(make_wedge_frame(0.85 * kPi, theta, 1));
    for (const auto& s : b) CHECK(s.kind == ShadowKind::Reflected);
  }

  // Right-angle domain corner: only the doubly reflected image lines up with the apex.
  const auto corner = shadow_boundaries(make_wedge_frame(1.5 * kPi, 0.25 * kPi, 1));
  REQUIRE(corner.size() == 1);
  CHECK(corner[0].phi == doctest::Approx(0.25 * kPi));
  CHECK(corner[0].kind == ShadowKind::Reflected);

  const auto w3 = shadow_boundaries(make_wedge_frame(0.879 * kPi, 0.434 * kPi, 1));
  REQUIRE(w3.size() == 2);
  CHECK(w3[0].phi == doctest::Approx(0.566 * kPi));
  CHECK(w3[1].phi == doctest::Approx(0.808 * kPi));
}

TEST_CASE("integer wedge index: diffraction vanishes") {
  for (int bc : {1, -1}) {
    const WedgeLocalFrame f = make_wedge_frame(1.5 * kPi, 0.313 * kPi, bc);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double phi = (k + 0.5) / 1000.0 * f.opening();
      worst = std::max(worst, std::abs(D(f, 10.0, phi)));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("unit jumps at shadow boundaries") {
  for (int bc : {1, -1}) {
    const WedgeLocalFrame f = make_wedge_frame(kPi / 3, kPi / 5, bc);
    for (double mu : {1.0, 10.0, 100.0}) {
      for (const ShadowBoundary& b : shadow_boundaries(f)) {
        const double jump = std::abs(D(f, mu, b.phi + 1e-6) - D(f, mu, b.phi - 1e-6));
        CHECK(jump == doctest::Approx(1.0).epsilon(1e-3));
      }
    }
  }
}

TEST_CASE("Neumann and Dirichlet differ only in the sign of D3 + D4") {
  const WedgeLocalFrame n = make_wedge_frame(0.879 * kPi, 0.434 * kPi, 1);
  const WedgeLocalFrame d = make_wedge_frame(0.879 * kPi, 0.434 * kPi, -1);
  for (int k = 1; k < 50; ++k) {
    const double phi = k / 50.0 * n.opening() + 1e-3;
    if (phi >= n.opening()) break;
    const auto t = diffraction_terms(n, 10.0, phi);
    CHECK(D(n, 10.0, phi) + D(d, 10.0, phi) == doctest::Approx(2.0 * (t[0] + t[1])).epsilon(1e-12));
  }
}

TEST_CASE("finite everywhere, including on the boundaries") {
  for (double alpha : {kPi / 3, 0.879 * kPi, 1.62 * kPi}) {
    const WedgeLocalFrame f = make_wedge_frame(alpha, 0.3 * (kTwoPi - alpha), 1);
    for (double mu : {1.0, 10.0, 1000.0}) {
      for (int k = 0; k <= 400; ++k) CHECK(std::isfinite(D(f, mu, k / 400.0 * f.opening())));
      for (const ShadowBoundary& b : shadow_boundaries(f)) CHECK(std::isfinite(D(f, mu, b.phi)));
    }
  }
}

TEST_CASE("transition region narrows like 1/sqrt(mu)") {
  const WedgeLocalFrame f = make_wedge_frame(kPi / 3, kPi / 5, 1);
  const double w10 = transition_half_width(f, 10.0, 0.8 * kPi);
  const double w1000 = transition_half_width(f, 1000.0, 0.8 * kPi);
  REQUIRE(w1000 > 0.0);
  CHECK(w10 / w1000 >= 5.0);
  CHECK(w10 / w1000 <= 20.0);
  CHECK(transition_half_width(f, 1.0, 0.8 * kPi) > w10);
}

TEST_CASE("argument checks") {
  const WedgeLocalFrame f = make_wedge_frame(kPi / 3, kPi / 5, 1);
  CHECK_THROWS(D(f, 10.0, -0.1));
  CHECK_THROWS(D(f, 10.0, f.opening() + 0.1));
  CHECK_THROWS(diffraction_terms(f, 0.0, 1.0));
  CHECK_THROWS(make_wedge_frame(kPi / 3, 2.0 * kPi, 1));
  const DiffractionParams p;
  CHECK(p.mu_bar == 10.0);
  CHECK(diffraction_coefficient(f, p, 1.0) == D(f, 10.0, 1.0));
}
