#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "polywave/commands.hpp"
#include "polywave/surrogate_io.hpp"

using namespace polywave;

namespace {

std::string scene_path(const std::string& name) { return std::string(POLYWAVE_SCENES) + "/" + name + ".yaml"; }

struct Built {
  Scene scene;
  Surrogate surrogate;
};

const Built& built(const std::string& name) {
  static std::map<std::string, Built> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    Scene sc = load_scene(scene_path(name));
    Surrogate s = build_from_scene(sc);
    it = cache.emplace(name, Built{std::move(sc), std::move(s)}).first;
  }
  return it->second;
}

Point2 wedge_point(const Surrogate& s, double phi, double radius) {
  const VertexInfo& v = s.domain().vertices()[0];
  return v.position + radius * Point2{std::cos(phi), std::sin(phi)};
}

}  // namespace

TEST_CASE("timetable entries for wedge 1") {
  const Surrogate& s = built("wedge1").surrogate;
  const FieldComponent& src = s.components()[0];
  CHECK(src.kind == ComponentKind::Source);
  CHECK(src.r == 0.0);
  CHECK(edge_time(src, s.domain().edges()[0], s.domain()) == doctest::Approx(4.0 * std::sin(0.313 * kPi)));
  // The right-angle apex never diffracts, so it has no timetable entry.
  CHECK(std::isinf(vertex_time(src, s.domain().vertices()[0], s.domain())));
  const Surrogate& w3 = built("wedge3").surrogate;
  CHECK(vertex_time(w3.components()[0], w3.domain().vertices()[0], w3.domain()) == doctest::Approx(4.0));
  // Truncation edges never produce events.
  for (const Edge& e : s.domain().edges()) {
    if (!e.physical) CHECK(std::isinf(edge_time(src, e, s.domain())));
  }
}

TEST_CASE("component counts for the four wedges") {
  CHECK(built("wedge1").surrogate.size() == 5);
  CHECK(built("wedge2").surrogate.size() == 8);
  CHECK(built("wedge3").surrogate.size() == 4);
  CHECK(built("wedge4").surrogate.size() == 3);
  CHECK(built("freespace").surrogate.size() == 1);
}

TEST_CASE("spawn_reflection: image source, sign and angle maps") {
  const Surrogate& s = built("halfplane").surrogate;
  const Domain& d = s.domain();
  const FieldComponent& src = s.components()[0];
  const FieldComponent child = spawn_reflection(src, d.edges()[0], d);
  CHECK(child.xi.x1 == doctest::Approx(0.0));
  CHECK(child.xi.x2 == doctest::Approx(-4.0));
  CHECK(child.r == 0.0);
  CHECK(child.zeta.sign == 1);
  CHECK(child.zeta.betas.size() == 1);

  Ring dir = d.outer();
  dir.bc.assign(dir.points.size(), BoundaryCondition::Dirichlet);
  const Domain dd(dir, {}, true);
  CHECK(spawn_reflection(src, dd.edges()[0], dd).zeta.sign == -1);
}

TEST_CASE("angular weights compose reflection by reflection") {
  const Surrogate& s = built("wedge2").surrogate;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  for (const FieldComponent& c : s.components()) {
    if (c.kind != ComponentKind::Reflection || c.zeta.betas.size() < 2) continue;
    const FieldComponent& p = s.components()[static_cast<std::size_t>(c.parent)];
    const double beta = c.zeta.betas.back();
    const int edge_sign = c.zeta.sign * p.zeta.sign;
    CHECK(std::abs(edge_sign) == 1);
    for (int k = 0; k < 100; ++k) {
      const double psi = ang(rng);
      const Point2 y{std::cos(psi), std::sin(psi)};
      const Point2 y_ref{std::cos(2 * beta - psi), std::sin(2 * beta - psi)};
      CHECK(c.zeta(y) == doctest::Approx(edge_sign * p.zeta(y_ref)).epsilon(1e-12));
    }
  }
}

TEST_CASE("angular weights are positive-homogeneous") {
  for (const char* name : {"wedge2", "wedge3", "wedge4"}) {
    const Surrogate& s = built(name).surrogate;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi);
    for (const FieldComponent& c : s.components()) {
      for (int k = 0; k < 100; ++k) {
        const double psi = ang(rng);
        const Point2 y{std::cos(psi), std::sin(psi)};
        for (double lam : {0.5, 2.0, 10.0}) CHECK(c.zeta(lam * y) == doctest::Approx(c.zeta(y)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("spawn_diffraction") {
  const Surrogate& w1 = built("wedge1").surrogate;
  DiffractionParams p;
  CHECK_FALSE(spawn_diffraction(w1.components()[0], w1.domain().vertices()[0], w1.domain(), p));

  const Surrogate& w3 = built("wedge3").surrogate;
  const auto child = spawn_diffraction(w3.components()[0], w3.domain().vertices()[0], w3.domain(), p);
  REQUIRE(child);
  CHECK(child->r == doctest::Approx(4.0));
  CHECK(distance(child->xi, w3.domain().vertices()[0].position) == 0.0);
  CHECK(child->zeta.base);
  CHECK(child->zeta.base->frame.bc_sign == 1);

  WedgeScene ws = *built("wedge3").scene.wedge;
  ws.bc = BoundaryCondition::Dirichlet;
  const Domain dd = make_wedge_domain(ws);
  FieldComponent src = w3.components()[0];
  const auto dchild = spawn_diffraction(src, dd.vertices()[0], dd, p);
  REQUIRE(dchild);
  CHECK(dchild->zeta.base->frame.bc_sign == -1);
}

TEST_CASE("build invariants") {
  for (const char* name : {"wedge1", "wedge2", "wedge3", "wedge4", "cavity", "room"}) {
    const Surrogate& s = built(name).surrogate;
    REQUIRE(s.size() >= 1);
    CHECK(s.components()[0].kind == ComponentKind::Source);
    double prev = 0.0;
    for (const FieldComponent& c : s.components()) {
      CHECK(c.r >= 0.0);
      CHECK(c.birth_time >= prev - 1e-12);
      prev = c.birth_time;
      if (c.parent >= 0) CHECK(c.birth_time >= s.components()[static_cast<std::size_t>(c.parent)].birth_time);
      if (c.kind == ComponentKind::Reflection) CHECK_FALSE(c.support.lit.empty());
    }
    for (const DiscardedComponent& dc : s.discarded()) CHECK(dc.magnitude_bound < s.config().tol);
  }
}

TEST_CASE("pruning keeps a superset at a smaller tolerance") {
  const Scene& sc = built("cavity").scene;
  auto keys = [&](double tol) {
    Scene copy = sc;
    copy.run.tol = tol;
    std::set<std::string> k;
    for (const FieldComponent& c : build_from_scene(copy).components()) k.insert(c.key);
    return k;
  };
  const auto fine = keys(1e-3);
  const auto coarse = keys(2.5e-2);
  CHECK(coarse.size() < fine.size());
  CHECK(std::includes(fine.begin(), fine.end(), coarse.begin(), coarse.end()));
}

TEST_CASE("component cap is enforced") {
  Scene sc = built("cavity").scene;
  sc.run.tol = 0.0;
  sc.run.max_components = 10;
  CHECK_THROWS(build_from_scene(sc));
}

TEST_CASE("free space equals Psi and respects causality") {
  const Surrogate& s = built("freespace").surrogate;
  for (double t : {0.5, 1.5, 3.0}) {
    for (double r : {0.0, 0.7, 2.0, 4.5}) {
      const Point2 x{r * 0.6, -r * 0.8};
      CHECK(std::abs(s.evaluate(x, t) - s.psi().sample(r, t)) <= 1e-12);
      if (t < r - s.config().R - 5 * s.psi().dx()) CHECK(s.evaluate(x, t) == 0.0);
    }
  }
  CHECK_THROWS_AS(s.evaluate({20, 0}, 1.0), std::domain_error);
}

TEST_CASE("single wall matches the image sum") {
  const Surrogate& s = built("halfplane").surrogate;
  REQUIRE(s.size() == 2);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ux(-4.0, 4.0), uy(-1.95, 4.0), ut(0.0, 5.0);
  double worst = 0.0, scale = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Point2 x{ux(rng), uy(rng)};
    const double t = ut(rng);
    const double ref = s.psi().sample(norm(x), t) + s.psi().sample(distance(x, {0.0, -4.0}), t);
    worst = std::max(worst, std::abs(s.evaluate(x, t) - ref));
    scale = std::max(scale, std::abs(ref));
  }
  CHECK(worst <= 1e-6 * scale);
}

TEST_CASE("geometrical-optics variant and the indicator") {
  const Surrogate& w1 = built("wedge1").surrogate;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.05, 0.5 * kPi - 0.05), r(0.1, 5.0), ut(0.0, 5.0);
  for (int k = 0; k < 100; ++k) {
    const Point2 x = wedge_point(w1, u(rng), r(rng));
    const double t = ut(rng);
    CHECK(w1.evaluate_go(x, t) == w1.evaluate(x, t));
    CHECK(w1.error_indicator(x, t) == 0.0);
  }

  // Wedge 4: points with local angle below the incident shadow boundary see only diffraction.
  const Surrogate& w4 = built("wedge4").surrogate;
  const Point2 shadow = wedge_point(w4, 0.02 * kPi, 1.0);
  CHECK(w4.evaluate_go(shadow, 5.0) == 0.0);
  CHECK(std::abs(w4.evaluate(shadow, 5.0)) > 0.0);
  CHECK(w4.error_indicator(shadow, 3.0) == 0.0);

  const Surrogate& w3 = built("wedge3").surrogate;
  const Point2 transition = wedge_point(w3, 0.566 * kPi + 0.02, 1.0);
  CHECK(w3.error_indicator(transition, 5.0) > 0.0);
  CHECK(w3.error_indicator(transition, 3.5) == 0.0);
}

TEST_CASE("mu_bar re-tabulation touches only the diffraction tables") {
  const Surrogate& s = built("wedge3").surrogate;
  const Surrogate t = s.with_mu_bar(25.0);
  REQUIRE(t.size() == s.size());
  const Point2 x = wedge_point(s, 0.7 * kPi, 1.2);
  CHECK(t.evaluate_go(x, 5.0) == s.evaluate_go(x, 5.0));
  CHECK(t.evaluate(x, 5.0) != s.evaluate(x, 5.0));
  const AngularCache cache = angular_cache(s, x, 5.0);
  CHECK(evaluate_cached(s, cache) == doctest::Approx(s.evaluate(x, 5.0)).epsilon(1e-14));
  CHECK(evaluate_cached(t, cache) == doctest::Approx(t.evaluate(x, 5.0)).epsilon(1e-14));
}

TEST_CASE("a-priori bound edge cases") {
  const Surrogate& s = built("wedge3").surrogate;
  const FieldComponent* diff = nullptr;
  for (const FieldComponent& c : s.components()) {
    if (c.kind == ComponentKind::Diffraction) diff = &c;
  }
  REQUIRE(diff);
  CHECK_THROWS(apriori_diffraction_bound(s, *diff, 1.0, {}, 1.0));
  CHECK(apriori_diffraction_bound(s, *diff, 1.0, default_k_grid(), 1.0) > 0.0);
  CHECK_THROWS(apriori_diffraction_bound(s, s.components()[0], 1.0, default_k_grid(), 1.0));

  const FreeSpaceGrid& g = s.psi();
  auto zero = std::make_shared<const FreeSpaceGrid>(g.rho_max(), g.T(), g.R(), g.n_rho(), g.n_t(),
                                                    std::vector<double>(g.n_rho() * (g.n_t() + 1), 0.0));
  const Surrogate z = s.with_psi(zero);
  CHECK(apriori_diffraction_bound(z, *diff, 1.0, default_k_grid(), 1.0) == 0.0);

  const auto kg = default_k_grid();
  CHECK(kg.size() == 200);
  CHECK(kg.front() == doctest::Approx(1e-2));
  CHECK(kg.back() == doctest::Approx(1e3));
}

TEST_CASE("serialization round trip is exact") {
  const Built& b = built("wedge3");
  const std::string text = surrogate_to_json(b.surrogate, b.scene.source);
  const LoadedSurrogate back = surrogate_from_json(text);
  REQUIRE(back.surrogate.size() == b.surrogate.size());
  for (double phi : {0.1, 0.5, 1.7, 2.6, 3.4}) {
    const Point2 x = wedge_point(b.surrogate, phi, 1.3);
    CHECK(back.surrogate.evaluate(x, 5.0) == b.surrogate.evaluate(x, 5.0));
  }
  CHECK(surrogate_to_json(back.surrogate, back.source) == text);
  CHECK_THROWS(surrogate_from_json("{}"));
  CHECK_THROWS(surrogate_from_json("not json"));
}
