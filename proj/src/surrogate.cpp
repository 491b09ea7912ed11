#include "polywave/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>

namespace polywave {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_to_opening(double phi, double open) {
  if (phi <= open) return phi;
  return (phi - open < kTwoPi - phi) ? open : 0.0;
}

bool adjacent_to(const VertexInfo& v, int edge) {
  return v.adjacent_edges[0] == edge || v.adjacent_edges[1] == edge;
}

const FieldComponent& root_diffraction(const std::vector<FieldComponent>& comps, const FieldComponent& c) {
  const FieldComponent* p = &c;
  while (p->kind != ComponentKind::Diffraction) {
    if (p->parent < 0) throw std::logic_error("component has no diffraction ancestor");
    p = &comps[static_cast<std::size_t>(p->parent)];
  }
  return *p;
}

// (1/N) sum_m |X_m| for the DFT X of the samples; bounds max_n |x_n|.
double dft_l1(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 0) return 0.0;
  std::vector<std::complex<double>> twiddle(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    twiddle[k] = {std::cos(a), std::sin(a)};
  }
  double total = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    std::complex<double> acc = 0.0;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += x[j] * twiddle[idx];
      idx += m;
      if (idx >= n) idx -= n;
    }
    total += std::abs(acc);
  }
  return total / static_cast<double>(n);
}

}  // namespace

double DiffractionTable::operator()(double local_phi) const {
  if (phi.empty()) return 0.0;
  if (local_phi <= phi.front()) return scale * d.front();
  if (local_phi >= phi.back()) return scale * d.back();
  const auto it = std::upper_bound(phi.begin(), phi.end(), local_phi);
  const std::size_t k = static_cast<std::size_t>(it - phi.begin());
  const double w = (local_phi - phi[k - 1]) / (phi[k] - phi[k - 1]);
  return scale * ((1.0 - w) * d[k - 1] + w * d[k]);
}

double DiffractionTable::max_abs() const {
  double m = 0.0;
  for (double v : d) m = std::max(m, std::abs(v));
  return std::abs(scale) * m;
}

DiffractionTable make_diffraction_table(const WedgeLocalFrame& frame, double mu_bar, double eps_sing,
                                        double scale) {
  if (!(mu_bar > 0.0)) throw std::invalid_argument("diffraction table: mu_bar must be positive");
  DiffractionTable t;
  t.frame = frame;
  t.mu_bar = mu_bar;
  t.eps_sing = eps_sing;
  t.scale = scale;
  t.factor = frame.grazing ? 0.5 : 1.0;
  const double open = frame.opening();
  const double delta = 1e-9 * open;
  std::vector<double> jumps;
  for (const ShadowBoundary& b : shadow_boundaries(frame)) jumps.push_back(b.phi);
  for (std::size_t k = 0; k < kTableSamples; ++k) {
    const double p = open * static_cast<double>(k) / static_cast<double>(kTableSamples - 1);
    const bool near_jump = std::any_of(jumps.begin(), jumps.end(),
                                       [&](double b) { return std::abs(p - b) <= 2.0 * delta; });
    if (!near_jump) t.phi.push_back(p);
  }
  for (double b : jumps) {
    t.phi.push_back(b - delta);
    t.phi.push_back(b + delta);
  }
  std::sort(t.phi.begin(), t.phi.end());
  t.d.reserve(t.phi.size());
  for (double p : t.phi) t.d.push_back(t.factor * diffraction_coefficient_at(frame, mu_bar, p, eps_sing));
  return t;
}

double AngularWeight::unfolded_angle(Point2 y) const {
  double psi = polar_angle(y);
  for (auto it = betas.rbegin(); it != betas.rend(); ++it) psi = 2.0 * (*it) - psi;
  return psi;
}

double AngularWeight::operator()(Point2 y) const {
  if (!base) return static_cast<double>(sign);
  const double open = base->frame.opening();
  const double phi = clamp_to_opening(wrap_angle(unfolded_angle(y) - base->frame.reference_angle), open);
  return sign * (*base)(phi);
}

double AngularWeight::max_abs() const { return base ? base->max_abs() : 1.0; }

bool vertex_can_diffract(const Domain& d, const VertexInfo& v) {
  (void)d;
  if (!v.physical) return false;
  if (std::abs(v.exterior_angle - kPi) <= 1e-9) return false;
  return !is_non_diffracting(v.exterior_angle);
}

double edge_time(const FieldComponent& c, const Edge& e, const Domain& d) {
  if (!e.physical) return kInf;
  if (c.kind == ComponentKind::Reflection && c.support.edge == e.index) return kInf;
  if (c.kind == ComponentKind::Diffraction &&
      adjacent_to(d.vertices()[static_cast<std::size_t>(c.support.vertex)], e.index)) {
    return kInf;
  }
  const std::vector<Interval> lit = lit_intervals(d, c.support, e);
  if (lit.empty()) return kInf;
  return c.r + distance_to_lit(e, c.xi, lit);
}

double vertex_time(const FieldComponent& c, const VertexInfo& v, const Domain& d) {
  if (!vertex_can_diffract(d, v)) return kInf;
  if (c.kind == ComponentKind::Diffraction && c.support.vertex == v.index) return kInf;
  if (c.kind == ComponentKind::Reflection && adjacent_to(v, c.support.edge)) return kInf;
  const double dist = distance(v.position, c.xi);
  if (dist <= d.eps()) return kInf;
  if (!in_vertex_sector(v, d, c.xi - v.position)) return kInf;
  if (!support_contains(d, c.support, v.position)) return kInf;
  return c.r + dist;
}

FieldComponent spawn_reflection(const FieldComponent& parent, const Edge& e, const Domain& d) {
  std::vector<Interval> lit = lit_intervals(d, parent.support, e);
  if (lit.empty()) throw std::invalid_argument("spawn_reflection: edge is not lit by the parent");
  FieldComponent c;
  c.kind = ComponentKind::Reflection;
  c.xi = reflect_point(e.a, e.b, parent.xi);
  c.r = parent.r;
  c.support.kind = ComponentKind::Reflection;
  c.support.center = c.xi;
  c.support.edge = e.index;
  c.support.lit = std::move(lit);
  c.zeta = parent.zeta;
  c.zeta.sign *= bc_sign(e.bc);
  c.zeta.betas.push_back(polar_angle(e.direction()));
  c.parent = parent.index;
  c.feature = e.index;
  c.diffraction_in_chain = parent.diffraction_in_chain;
  c.key = parent.key + "/R" + std::to_string(e.index);
  return c;
}

std::optional<FieldComponent> spawn_diffraction(const FieldComponent& parent, const VertexInfo& v,
                                                const Domain& d, const DiffractionParams& p) {
  if (!vertex_can_diffract(d, v)) return std::nullopt;
  if (!support_contains(d, parent.support, v.position)) {
    throw std::invalid_argument("spawn_diffraction: vertex outside the parent's support");
  }
  const Edge& out = d.edges()[static_cast<std::size_t>(v.adjacent_edges[0])];
  const Edge& in = d.edges()[static_cast<std::size_t>(v.adjacent_edges[1])];
  if (out.bc != in.bc) {
    throw std::invalid_argument("spawn_diffraction: vertex " + std::to_string(v.index) +
                                " joins faces with different boundary conditions");
  }
  const WedgeLocalFrame frame = local_wedge_frame(d, v, parent.xi, bc_sign(out.bc));
  const double scale = parent.zeta(v.position - parent.xi);

  FieldComponent c;
  c.kind = ComponentKind::Diffraction;
  c.xi = v.position;
  c.r = parent.r + distance(v.position, parent.xi);
  c.support.kind = ComponentKind::Diffraction;
  c.support.center = v.position;
  c.support.vertex = v.index;
  c.zeta.sign = 1;
  c.zeta.base = std::make_shared<const DiffractionTable>(
      make_diffraction_table(frame, p.mu_bar, p.eps_sing, scale));
  c.parent = parent.index;
  c.feature = v.index;
  c.diffraction_in_chain = true;
  c.key = parent.key + "/D" + std::to_string(v.index);
  return c;
}

double magnitude_bound(const FieldComponent& c, const Domain& d, const FreeSpaceGrid& psi) {
  double dist = 0.0;
  if (c.kind == ComponentKind::Reflection) {
    dist = distance_to_lit(d.edges()[static_cast<std::size_t>(c.support.edge)], c.xi, c.support.lit);
  }
  // One cell of slack keeps the bound valid for interpolated samples.
  const double rho = std::max(0.0, dist + c.r - psi.dx());
  return psi.max_abs_from(rho) * c.zeta.max_abs();
}

Surrogate::Surrogate(std::shared_ptr<const Domain> domain, std::shared_ptr<const FreeSpaceGrid> psi,
                     BuildConfig cfg, std::vector<FieldComponent> components,
                     std::vector<DiscardedComponent> discarded)
    : domain_(std::move(domain)),
      psi_(std::move(psi)),
      cfg_(cfg),
      components_(std::move(components)),
      discarded_(std::move(discarded)) {
  if (!domain_ || !psi_) throw std::invalid_argument("surrogate: domain and Psi are required");
  if (components_.empty() || components_.front().kind != ComponentKind::Source) {
    throw std::invalid_argument("surrogate: first component must be the source");
  }
}

void Surrogate::check_inside(Point2 x) const {
  if (!domain_->contains(x)) {
    throw std::domain_error("evaluation point (" + std::to_string(x.x1) + ", " + std::to_string(x.x2) +
                            ") lies outside the domain");
  }
}

double Surrogate::component_value(const FieldComponent& c, Point2 x, double t) const {
  const double rho = distance(x, c.xi) + c.r;
  if (rho > t + cfg_.R + 10.0 * psi_->dx()) return 0.0;
  if (!support_contains(*domain_, c.support, x)) return 0.0;
  return psi_->sample(rho, t) * c.zeta(x - c.xi);
}

double Surrogate::evaluate(Point2 x, double t) const {
  check_inside(x);
  double sum = 0.0;
  for (const FieldComponent& c : components_) sum += component_value(c, x, t);
  return sum;
}

double Surrogate::evaluate_go(Point2 x, double t) const {
  check_inside(x);
  double sum = 0.0;
  for (const FieldComponent& c : components_) {
    if (!c.diffraction_in_chain) sum += component_value(c, x, t);
  }
  return sum;
}

double Surrogate::error_indicator(Point2 x, double t) const {
  check_inside(x);
  double diff = 0.0;
  for (const FieldComponent& c : components_) {
    if (c.diffraction_in_chain) diff += component_value(c, x, t);
  }
  return std::abs(diff);
}

Surrogate Surrogate::with_mu_bar(double mu_bar) const {
  std::vector<FieldComponent> comps = components_;
  for (FieldComponent& c : comps) {
    if (c.kind == ComponentKind::Diffraction) {
      const FieldComponent& p = comps[static_cast<std::size_t>(c.parent)];
      const DiffractionTable& old = *c.zeta.base;
      const double scale = p.zeta(c.xi - p.xi);
      c.zeta.base = std::make_shared<const DiffractionTable>(
          make_diffraction_table(old.frame, mu_bar, old.eps_sing, scale));
    } else if (c.kind == ComponentKind::Reflection) {
      c.zeta.base = comps[static_cast<std::size_t>(c.parent)].zeta.base;
    }
  }
  BuildConfig cfg = cfg_;
  cfg.mu_bar = mu_bar;
  return Surrogate(domain_, psi_, cfg, std::move(comps), discarded_);
}

Surrogate Surrogate::with_psi(std::shared_ptr<const FreeSpaceGrid> psi) const {
  if (!psi || psi->T() < cfg_.T * (1.0 - 1e-12)) {
    throw std::invalid_argument("with_psi: grid must cover the surrogate's time horizon");
  }
  BuildConfig cfg = cfg_;
  cfg.R = psi->R();
  return Surrogate(domain_, std::move(psi), cfg, components_, discarded_);
}

Surrogate build_surrogate(std::shared_ptr<const Domain> domain,
                          std::shared_ptr<const FreeSpaceGrid> psi, const BuildConfig& cfg) {
  if (!domain || !psi) throw std::invalid_argument("build: domain and Psi are required");
  const Domain& d = *domain;
  if (!(cfg.T > 0.0) || !(cfg.R > 0.0)) throw std::invalid_argument("build: T and R must be positive");
  if (psi->T() < cfg.T * (1.0 - 1e-12)) throw std::invalid_argument("build: Psi grid shorter than T");
  if (std::abs(psi->R() - cfg.R) > 1e-12 * cfg.R) throw std::invalid_argument("build: Psi built for another R");
  if (!(cfg.tol >= 0.0)) throw std::invalid_argument("build: tol must be nonnegative");
  const Point2 origin{0.0, 0.0};
  if (!d.contains(origin) || d.nearest_edge(origin).first < cfg.R * (1.0 - 1e-9)) {
    throw std::invalid_argument("build: source support (disk of radius R at the origin) leaves the domain");
  }

  const double horizon = cfg.T + cfg.R;
  const int ne = d.n_edges();
  const int nv = d.n_vertices();
  const DiffractionParams dp{cfg.mu_bar, cfg.eps_sing};

  std::vector<FieldComponent> comps;
  std::vector<DiscardedComponent> discarded;
  // (time, entry, component); entries 0..ne-1 are edges, ne.. are vertices.
  std::set<std::tuple<double, int, int>> table;

  auto add_row = [&](const FieldComponent& c) {
    for (int j = 0; j < ne + nv; ++j) {
      const double t = j < ne ? edge_time(c, d.edges()[static_cast<std::size_t>(j)], d)
                              : vertex_time(c, d.vertices()[static_cast<std::size_t>(j - ne)], d);
      if (!std::isfinite(t)) continue;
      if (t < c.birth_time - 1e-9 * std::max(1.0, horizon)) {
        throw std::logic_error("timetable monotonicity violated for component " + c.key);
      }
      if (t <= horizon) table.emplace(t, j, c.index);
    }
  };

  FieldComponent src;
  src.index = 0;
  src.kind = ComponentKind::Source;
  src.key = "S";
  src.support.kind = ComponentKind::Source;
  src.magnitude_bound = magnitude_bound(src, d, *psi);
  comps.push_back(src);
  add_row(comps.back());

  const double tie = d.eps();
  while (!table.empty()) {
    const double t0 = std::get<0>(*table.begin());
    auto pick = table.begin();
    for (auto it = table.begin(); it != table.end() && std::get<0>(*it) <= t0 + tie; ++it) {
      if (std::make_pair(std::get<1>(*it), std::get<2>(*it)) <
          std::make_pair(std::get<1>(*pick), std::get<2>(*pick))) {
        pick = it;
      }
    }
    const auto [time, entry, pidx] = *pick;
    table.erase(pick);

    const FieldComponent& parent = comps[static_cast<std::size_t>(pidx)];
    std::optional<FieldComponent> child;
    if (entry < ne) {
      child = spawn_reflection(parent, d.edges()[static_cast<std::size_t>(entry)], d);
    } else {
      child = spawn_diffraction(parent, d.vertices()[static_cast<std::size_t>(entry - ne)], d, dp);
    }
    if (!child) continue;
    child->birth_time = time;
    child->magnitude_bound = magnitude_bound(*child, d, *psi);
    if (child->magnitude_bound < cfg.tol) {
      discarded.push_back({child->key, child->kind, child->parent, child->feature, child->birth_time,
                           child->magnitude_bound});
      continue;
    }
    if (comps.size() >= cfg.max_components) {
      throw std::runtime_error("build: component count exceeds max_components = " +
                               std::to_string(cfg.max_components));
    }
    child->index = static_cast<int>(comps.size());
    comps.push_back(std::move(*child));
    add_row(comps.back());
  }
  return Surrogate(std::move(domain), std::move(psi), cfg, std::move(comps), std::move(discarded));
}

AngularCache angular_cache(const Surrogate& s, Point2 x, double t) {
  AngularCache cache;
  const double R = s.config().R;
  const double slack = 10.0 * s.psi().dx();
  for (const FieldComponent& c : s.components()) {
    if (!c.diffraction_in_chain) {
      cache.go += s.component_value(c, x, t);
      continue;
    }
    const double rho = distance(x, c.xi) + c.r;
    if (rho > t + R + slack) continue;
    if (!support_contains(s.domain(), c.support, x)) continue;
    const double v = s.psi().sample(rho, t) * c.zeta.sign;
    if (v == 0.0) continue;
    cache.terms.push_back({static_cast<std::size_t>(c.index), v, c.zeta.unfolded_angle(x - c.xi)});
  }
  return cache;
}

double evaluate_cached(const Surrogate& s, const AngularCache& cache) {
  double sum = cache.go;
  for (const AngularCache::Term& term : cache.terms) {
    const DiffractionTable& tab = *s.components()[term.component].zeta.base;
    const double open = tab.frame.opening();
    const double phi = clamp_to_opening(wrap_angle(term.unfolded - tab.frame.reference_angle), open);
    sum += term.psi * tab(phi);
  }
  return sum;
}

std::vector<double> default_k_grid() {
  std::vector<double> k(200);
  for (std::size_t i = 0; i < k.size(); ++i) {
    k[i] = std::pow(10.0, -2.0 + 5.0 * static_cast<double>(i) / static_cast<double>(k.size() - 1));
  }
  return k;
}

double apriori_diffraction_bound(const Surrogate& s, const FieldComponent& comp, double phi,
                                 const std::vector<double>& k_grid, double dist) {
  if (comp.kind != ComponentKind::Diffraction || !comp.zeta.base) {
    throw std::invalid_argument("apriori bound: component is not a diffraction component");
  }
  if (k_grid.empty()) throw std::invalid_argument("apriori bound: empty wavenumber grid");
  if (!(dist > 0.0)) throw std::invalid_argument("apriori bound: distance must be positive");
  const DiffractionTable& tab = *comp.zeta.base;
  const double frozen = tab.factor * diffraction_coefficient_at(tab.frame, tab.mu_bar, phi, tab.eps_sing);
  double sup = 0.0;
  for (double k : k_grid) {
    if (!(k > 0.0)) throw std::invalid_argument("apriori bound: wavenumbers must be positive");
    const double dk = tab.factor * diffraction_coefficient_at(tab.frame, k * dist, phi, tab.eps_sing);
    sup = std::max(sup, std::abs(frozen - dk));
  }
  if (sup == 0.0 || tab.scale == 0.0) return 0.0;
  const FreeSpaceGrid& psi = s.psi();
  std::vector<double> trace(psi.n_t() + 1);
  for (std::size_t n = 0; n <= psi.n_t(); ++n) trace[n] = psi.sample(comp.r, psi.dt() * static_cast<double>(n));
  return sup * std::abs(tab.scale) * dft_l1(trace);
}

std::vector<double> apriori_trace_bound(const Surrogate& s, Point2 x, const std::vector<double>& times,
                                        const std::vector<double>& k_grid) {
  if (!s.domain().contains(x)) throw std::domain_error("apriori bound: point outside the domain");
  std::vector<double> out(times.size(), 0.0);
  const double R = s.config().R;
  for (const FieldComponent& c : s.components()) {
    if (!c.diffraction_in_chain) continue;
    if (!support_contains(s.domain(), c.support, x)) continue;
    const double dist = distance(x, c.xi);
    if (dist <= s.domain().eps()) continue;
    const FieldComponent& root = root_diffraction(s.components(), c);
    const DiffractionTable& tab = *root.zeta.base;
    const double phi = clamp_to_opening(
        wrap_angle(c.zeta.unfolded_angle(x - c.xi) - tab.frame.reference_angle), tab.frame.opening());
    const double term = apriori_diffraction_bound(s, root, phi, k_grid, dist);
    const double arrival = dist + c.r - R;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] >= arrival) out[i] += term;
    }
  }
  return out;
}

}  // namespace polywave
