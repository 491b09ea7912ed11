#include "polywave/surrogate_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace polywave {
namespace {

using json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

json pt(Point2 p) { return json::array({p.x1, p.x2}); }
Point2 to_pt(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

const char* profile_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::Zero: return "zero";
    case ProfileKind::Gaussian: return "gaussian";
    case ProfileKind::Ricker: return "ricker";
  }
  return "zero";
}

ProfileKind profile_kind(const std::string& s) {
  if (s == "gaussian") return ProfileKind::Gaussian;
  if (s == "ricker") return ProfileKind::Ricker;
  if (s == "zero") return ProfileKind::Zero;
  throw std::runtime_error("surrogate file: unknown profile " + s);
}

ComponentKind component_kind(const std::string& s) {
  if (s == "source") return ComponentKind::Source;
  if (s == "reflection") return ComponentKind::Reflection;
  if (s == "diffraction") return ComponentKind::Diffraction;
  throw std::runtime_error("surrogate file: unknown component kind " + s);
}

BoundaryCondition bc_of(const std::string& s) {
  if (s == "neumann") return BoundaryCondition::Neumann;
  if (s == "dirichlet") return BoundaryCondition::Dirichlet;
  throw std::runtime_error("surrogate file: unknown boundary condition " + s);
}

json profile_json(const RadialProfile& p) {
  return json{{"type", profile_name(p.kind)}, {"sigma", p.sigma}, {"amplitude", p.amplitude}};
}

RadialProfile profile_from(const json& j) {
  RadialProfile p;
  p.kind = profile_kind(j.at("type").get<std::string>());
  p.sigma = j.at("sigma").get<double>();
  p.amplitude = j.at("amplitude").get<double>();
  return p;
}

json ring_json(const Ring& r) {
  json pts = json::array();
  for (Point2 p : r.points) pts.push_back(pt(p));
  json bcs = json::array();
  for (BoundaryCondition b : r.bc) bcs.push_back(to_string(b));
  json phys = json::array();
  for (std::size_t i = 0; i < r.points.size(); ++i) phys.push_back(r.physical.empty() ? true : bool(r.physical[i]));
  return json{{"points", pts}, {"bc", bcs}, {"physical", phys}};
}

Ring ring_from(const json& j) {
  Ring r;
  for (const json& p : j.at("points")) r.points.push_back(to_pt(p));
  for (const json& b : j.at("bc")) r.bc.push_back(bc_of(b.get<std::string>()));
  for (const json& f : j.at("physical")) r.physical.push_back(f.get<bool>());
  return r;
}

json table_json(const DiffractionTable& t) {
  json samples = json::array();
  for (std::size_t k = 0; k < t.phi.size(); ++k) samples.push_back(json::array({t.phi[k], t.d[k]}));
  const WedgeLocalFrame& f = t.frame;
  return json{{"alpha", f.alpha},         {"theta", f.theta},
              {"nu", f.nu},               {"bc_sign", f.bc_sign},
              {"origin", pt(f.origin)},   {"reference_angle", f.reference_angle},
              {"grazing", f.grazing},     {"mu_bar", t.mu_bar},
              {"eps_sing", t.eps_sing},   {"scale", t.scale},
              {"factor", t.factor},       {"samples", samples}};
}

DiffractionTable table_from(const json& j) {
  DiffractionTable t;
  WedgeLocalFrame& f = t.frame;
  f.alpha = j.at("alpha").get<double>();
  f.theta = j.at("theta").get<double>();
  f.nu = j.at("nu").get<double>();
  f.bc_sign = j.at("bc_sign").get<int>();
  f.origin = to_pt(j.at("origin"));
  f.reference_angle = j.at("reference_angle").get<double>();
  f.grazing = j.at("grazing").get<bool>();
  t.mu_bar = j.at("mu_bar").get<double>();
  t.eps_sing = j.at("eps_sing").get<double>();
  t.scale = j.at("scale").get<double>();
  t.factor = j.at("factor").get<double>();
  for (const json& s : j.at("samples")) {
    t.phi.push_back(s.at(0).get<double>());
    t.d.push_back(s.at(1).get<double>());
  }
  return t;
}

}  // namespace

std::string surrogate_to_json(const Surrogate& s, const SourceSpec& src) {
  json doc;
  doc["format"] = "polywave-surrogate";
  doc["version"] = kFormatVersion;
  const BuildConfig& c = s.config();
  doc["config"] = json{{"T", c.T},     {"R", c.R},
                       {"mu_bar", c.mu_bar}, {"tol", c.tol},
                       {"max_components", c.max_components}, {"eps_sing", c.eps_sing}};
  doc["source"] = json{{"R", src.R},
                       {"eta0", profile_json(src.eta0)},
                       {"eta1", profile_json(src.eta1)},
                       {"eta2", json{{"type", src.eta2.kind == ForcingKind::Harmonic ? "harmonic" : "zero"},
                                     {"omega", src.eta2.omega},
                                     {"sigma_g", src.eta2.sigma_g},
                                     {"amplitude", src.eta2.amplitude}}}};
  doc["psi_grid"] = json{{"n_rho", s.psi().n_rho()}, {"n_t", s.psi().n_t()}, {"T", s.psi().T()}};
  json holes = json::array();
  for (const Ring& h : s.domain().holes()) holes.push_back(ring_json(h));
  doc["domain"] = json{{"unbounded", s.domain().unbounded()}, {"outer", ring_json(s.domain().outer())}, {"holes", holes}};

  json comps = json::array();
  for (const FieldComponent& fc : s.components()) {
    json lit = json::array();
    for (const Interval& iv : fc.support.lit) lit.push_back(json::array({iv.lo, iv.hi}));
    json j{{"index", fc.index},
           {"key", fc.key},
           {"kind", to_string(fc.kind)},
           {"parent", fc.parent},
           {"feature", fc.feature},
           {"xi", pt(fc.xi)},
           {"r", fc.r},
           {"sign", fc.zeta.sign},
           {"angle_maps", fc.zeta.betas},
           {"support", json{{"kind", to_string(fc.support.kind)},
                            {"center", pt(fc.support.center)},
                            {"edge", fc.support.edge},
                            {"vertex", fc.support.vertex},
                            {"lit", lit}}},
           {"birth_time", fc.birth_time},
           {"magnitude_bound", fc.magnitude_bound},
           {"diffraction_in_chain", fc.diffraction_in_chain}};
    if (fc.kind == ComponentKind::Diffraction) j["table"] = table_json(*fc.zeta.base);
    comps.push_back(std::move(j));
  }
  doc["components"] = std::move(comps);
  json disc = json::array();
  for (const DiscardedComponent& dc : s.discarded()) {
    disc.push_back(json{{"key", dc.key},
                        {"kind", to_string(dc.kind)},
                        {"parent", dc.parent},
                        {"feature", dc.feature},
                        {"birth_time", dc.birth_time},
                        {"magnitude_bound", dc.magnitude_bound}});
  }
  doc["discarded"] = std::move(disc);
  return doc.dump(1);
}

LoadedSurrogate surrogate_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("surrogate file: ") + e.what());
  }
  try {
    if (doc.at("format") != "polywave-surrogate" || doc.at("version") != kFormatVersion) {
      throw std::runtime_error("surrogate file: unsupported format or version");
    }
    BuildConfig cfg;
    const json& jc = doc.at("config");
    cfg.T = jc.at("T").get<double>();
    cfg.R = jc.at("R").get<double>();
    cfg.mu_bar = jc.at("mu_bar").get<double>();
    cfg.tol = jc.at("tol").get<double>();
    cfg.max_components = jc.at("max_components").get<std::size_t>();
    cfg.eps_sing = jc.at("eps_sing").get<double>();

    SourceSpec src;
    const json& js = doc.at("source");
    src.R = js.at("R").get<double>();
    src.eta0 = profile_from(js.at("eta0"));
    src.eta1 = profile_from(js.at("eta1"));
    const json& f = js.at("eta2");
    src.eta2.kind = f.at("type") == "harmonic" ? ForcingKind::Harmonic : ForcingKind::Zero;
    src.eta2.omega = f.at("omega").get<double>();
    src.eta2.sigma_g = f.at("sigma_g").get<double>();
    src.eta2.amplitude = f.at("amplitude").get<double>();

    const json& jg = doc.at("psi_grid");
    auto psi = std::make_shared<const FreeSpaceGrid>(solve_radial(
        src, jg.at("T").get<double>(), jg.at("n_rho").get<std::size_t>(), jg.at("n_t").get<std::size_t>()));

    const json& jd = doc.at("domain");
    std::vector<Ring> holes;
    for (const json& h : jd.at("holes")) holes.push_back(ring_from(h));
    auto domain = std::make_shared<const Domain>(ring_from(jd.at("outer")), holes, jd.at("unbounded").get<bool>());

    std::vector<FieldComponent> comps;
    for (const json& j : doc.at("components")) {
      FieldComponent c;
      c.index = j.at("index").get<int>();
      if (c.index != static_cast<int>(comps.size())) throw std::runtime_error("surrogate file: components out of order");
      c.key = j.at("key").get<std::string>();
      c.kind = component_kind(j.at("kind").get<std::string>());
      c.parent = j.at("parent").get<int>();
      c.feature = j.at("feature").get<int>();
      c.xi = to_pt(j.at("xi"));
      c.r = j.at("r").get<double>();
      c.zeta.sign = j.at("sign").get<int>();
      c.zeta.betas = j.at("angle_maps").get<std::vector<double>>();
      const json& sp = j.at("support");
      c.support.kind = component_kind(sp.at("kind").get<std::string>());
      c.support.center = to_pt(sp.at("center"));
      c.support.edge = sp.at("edge").get<int>();
      c.support.vertex = sp.at("vertex").get<int>();
      for (const json& iv : sp.at("lit")) c.support.lit.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
      c.birth_time = j.at("birth_time").get<double>();
      c.magnitude_bound = j.at("magnitude_bound").get<double>();
      c.diffraction_in_chain = j.at("diffraction_in_chain").get<bool>();
      if (c.kind == ComponentKind::Diffraction) {
        c.zeta.base = std::make_shared<const DiffractionTable>(table_from(j.at("table")));
      } else if (c.kind == ComponentKind::Reflection) {
        if (c.parent < 0 || c.parent >= c.index) throw std::runtime_error("surrogate file: bad parent index");
        c.zeta.base = comps[static_cast<std::size_t>(c.parent)].zeta.base;
      }
      comps.push_back(std::move(c));
    }
    std::vector<DiscardedComponent> discarded;
    for (const json& j : doc.at("discarded")) {
      discarded.push_back({j.at("key").get<std::string>(), component_kind(j.at("kind").get<std::string>()),
                           j.at("parent").get<int>(), j.at("feature").get<int>(), j.at("birth_time").get<double>(),
                           j.at("magnitude_bound").get<double>()});
    }
    return LoadedSurrogate{Surrogate(domain, psi, cfg, std::move(comps), std::move(discarded)), src};
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("surrogate file: ") + e.what());
  }
}

void save_surrogate(const std::string& path, const Surrogate& s, const SourceSpec& src) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << surrogate_to_json(s, src) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

LoadedSurrogate load_surrogate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open surrogate file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return surrogate_from_json(ss.str());
}

}  // namespace polywave
