#include "polywave/scene.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace polywave {
namespace {

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& field, const std::string& what) const {
    std::ostringstream os;
    os << origin_;
    if (at.IsDefined() && at.Mark().line >= 0) os << ":" << at.Mark().line + 1;
    os << ": field '" << field << "': " << what;
    throw SceneError(os.str());
  }

  YAML::Node require(const YAML::Node& parent, const std::string& key, const std::string& path) const {
    if (!parent.IsMap()) fail(parent, path, "expected a mapping");
    const YAML::Node n = parent[key];
    if (!n) fail(parent, path + "." + key, "missing");
    return n;
  }

  double number(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, field, "expected a number");
    try {
      const double v = n.as<double>();
      if (!std::isfinite(v)) fail(n, field, "must be finite");
      return v;
    } catch (const YAML::Exception&) {
      fail(n, field, "expected a number, got '" + n.Scalar() + "'");
    }
  }

  double positive(const YAML::Node& n, const std::string& field) const {
    const double v = number(n, field);
    if (!(v > 0.0)) fail(n, field, "must be positive");
    return v;
  }

  double number_or(const YAML::Node& parent, const std::string& key, const std::string& path, double dflt) const {
    const YAML::Node n = parent[key];
    return n ? number(n, path + "." + key) : dflt;
  }

  Point2 point(const YAML::Node& n, const std::string& field) const {
    if (!n.IsSequence() || n.size() != 2) fail(n, field, "expected [x1, x2]");
    return {number(n[0], field), number(n[1], field)};
  }

  std::vector<Point2> points(const YAML::Node& n, const std::string& field) const {
    if (!n.IsSequence()) fail(n, field, "expected a list of points");
    std::vector<Point2> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(point(n[i], field + "[" + std::to_string(i) + "]"));
    return out;
  }

  BoundaryCondition bc(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, field, "expected 'neumann' or 'dirichlet'");
    std::string s = n.Scalar();
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "neumann") return BoundaryCondition::Neumann;
    if (s == "dirichlet") return BoundaryCondition::Dirichlet;
    fail(n, field, "unknown boundary condition '" + n.Scalar() + "'");
  }

  Ring ring(const YAML::Node& n, const std::string& path) const {
    Ring r;
    r.points = points(require(n, "points", path), path + ".points");
    const YAML::Node bcn = require(n, "bc", path);
    if (bcn.IsScalar()) {
      r.bc.assign(r.points.size(), bc(bcn, path + ".bc"));
    } else if (bcn.IsSequence()) {
      if (bcn.size() != r.points.size()) {
        fail(bcn, path + ".bc", "expected one entry per edge (" + std::to_string(r.points.size()) + "), got " +
                                    std::to_string(bcn.size()));
      }
      for (std::size_t i = 0; i < bcn.size(); ++i) r.bc.push_back(bc(bcn[i], path + ".bc[" + std::to_string(i) + "]"));
    } else {
      fail(bcn, path + ".bc", "expected a boundary condition or a list of them");
    }
    if (const YAML::Node ph = n["physical"]) {
      if (!ph.IsSequence() || ph.size() != r.points.size()) {
        fail(ph, path + ".physical", "expected one boolean per edge");
      }
      for (std::size_t i = 0; i < ph.size(); ++i) r.physical.push_back(ph[i].as<bool>());
    }
    return r;
  }

  RadialProfile profile(const YAML::Node& n, const std::string& path) const {
    RadialProfile p;
    const YAML::Node t = require(n, "type", path);
    const std::string type = t.Scalar();
    if (type == "zero") return p;
    if (type == "gaussian") {
      p.kind = ProfileKind::Gaussian;
    } else if (type == "ricker") {
      p.kind = ProfileKind::Ricker;
    } else {
      fail(t, path + ".type", "unknown profile '" + type + "'");
    }
    p.sigma = positive(require(n, "sigma", path), path + ".sigma");
    p.amplitude = number_or(n, "amplitude", path, 1.0);
    return p;
  }

 private:
  std::string origin_;
};

}  // namespace

BuildConfig Scene::build_config() const {
  BuildConfig c;
  c.T = run.T;
  c.R = source.R;
  c.mu_bar = run.mu_bar;
  c.tol = run.tol;
  c.max_components = run.max_components;
  return c;
}

Scene parse_scene(const std::string& text, const std::string& origin) {
  const Reader rd(origin);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw SceneError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw SceneError(origin + ": scene must be a mapping");

  Scene sc;
  sc.name = root["name"] ? root["name"].Scalar() : std::string("scene");

  // Source first: the wedge truncation box depends on R and T.
  const YAML::Node src = rd.require(root, "source", "scene");
  const YAML::Node stype = rd.require(src, "type", "source");
  const std::string type = stype.Scalar();
  sc.source.R = rd.positive(rd.require(src, "R", "source"), "source.R");
  if (type == "gaussian" || type == "ricker") {
    sc.source.eta0 = rd.profile(src, "source");
  } else if (type == "harmonic") {
    sc.source.eta2.kind = ForcingKind::Harmonic;
    if (src["omega_pi"]) {
      sc.source.eta2.omega = kPi * rd.positive(src["omega_pi"], "source.omega_pi");
    } else {
      sc.source.eta2.omega = rd.positive(rd.require(src, "omega", "source"), "source.omega");
    }
    sc.source.eta2.sigma_g = rd.number_or(src, "sigma_g", "source", 0.05);
    sc.source.eta2.amplitude = rd.number_or(src, "amplitude", "source", 1.0);
  } else {
    rd.fail(stype, "source.type", "unknown source type '" + type + "'");
  }
  if (const YAML::Node v = src["velocity"]) sc.source.eta1 = rd.profile(v, "source.velocity");
  try {
    sc.source.validate();
  } catch (const std::exception& e) {
    rd.fail(src, "source", e.what());
  }

  const YAML::Node run = rd.require(root, "run", "scene");
  RunParams& rp = sc.run;
  rp.T = rd.positive(rd.require(run, "T", "run"), "run.T");
  rp.mu_bar = rd.number_or(run, "mu_bar", "run", 10.0);
  if (!(rp.mu_bar >= 1.0)) rd.fail(run["mu_bar"], "run.mu_bar", "must be at least 1");
  rp.tol = rd.number_or(run, "tol", "run", 0.0);
  if (rp.tol < 0.0) rd.fail(run["tol"], "run.tol", "must be nonnegative");
  rp.max_components = static_cast<std::size_t>(rd.number_or(run, "max_components", "run", 100000));
  if (const YAML::Node g = run["psi_grid"]) {
    GridSize gs;
    gs.n_rho = static_cast<std::size_t>(rd.positive(rd.require(g, "n_rho", "run.psi_grid"), "run.psi_grid.n_rho"));
    gs.n_t = static_cast<std::size_t>(rd.positive(rd.require(g, "n_t", "run.psi_grid"), "run.psi_grid.n_t"));
    rp.psi_grid = gs;
  }
  rp.reference_h = rd.number_or(run, "reference_h", "run", 0.02);
  rp.quad_h = rd.number_or(run, "quad_h", "run", 0.05);
  if (const YAML::Node p = run["probes"]) rp.probes = rd.points(p, "run.probes");
  if (const YAML::Node s = run["snapshot_times"]) {
    if (!s.IsSequence()) rd.fail(s, "run.snapshot_times", "expected a list of times");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double t = rd.number(s[i], "run.snapshot_times");
      if (t < 0.0 || t > rp.T) rd.fail(s[i], "run.snapshot_times", "time outside [0, T]");
      rp.snapshot_times.push_back(t);
    }
  }

  const YAML::Node geo = rd.require(root, "geometry", "scene");
  try {
    if (const YAML::Node w = geo["wedge"]) {
      WedgeScene ws;
      ws.alpha = kPi * rd.number(rd.require(w, "alpha_pi", "geometry.wedge"), "geometry.wedge.alpha_pi");
      ws.theta = kPi * rd.number(rd.require(w, "theta_pi", "geometry.wedge"), "geometry.wedge.theta_pi");
      ws.distance = rd.number_or(w, "distance", "geometry.wedge", 4.0);
      ws.bc = rd.bc(rd.require(w, "bc", "geometry.wedge"), "geometry.wedge.bc");
      ws.half_width = std::max(sc.source.R + rp.T + 1.0, ws.distance + 1.0);
      sc.wedge = ws;
      sc.domain = std::make_shared<const Domain>(make_wedge_domain(ws));
    } else {
      const Ring outer = rd.ring(rd.require(geo, "outer", "geometry"), "geometry.outer");
      std::vector<Ring> holes;
      if (const YAML::Node hs = geo["holes"]) {
        if (!hs.IsSequence()) rd.fail(hs, "geometry.holes", "expected a list of rings");
        for (std::size_t i = 0; i < hs.size(); ++i) {
          holes.push_back(rd.ring(hs[i], "geometry.holes[" + std::to_string(i) + "]"));
        }
      }
      const bool unbounded = geo["unbounded"] ? geo["unbounded"].as<bool>() : false;
      sc.domain = std::make_shared<const Domain>(outer, holes, unbounded);
    }
  } catch (const SceneError&) {
    throw;
  } catch (const std::exception& e) {
    rd.fail(geo, "geometry", e.what());
  }
  for (const Point2& p : rp.probes) {
    if (!sc.domain->contains(p)) rd.fail(run["probes"], "run.probes", "probe outside the domain");
  }
  return sc;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneError(path + ": cannot open scene file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str(), path);
}

}  // namespace polywave
