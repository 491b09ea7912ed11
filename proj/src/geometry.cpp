#include "polywave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polywave {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double signed_area(const std::vector<Point2>& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) a += cross(p[i], p[(i + 1) % p.size()]);
  return 0.5 * a;
}

// Crossing-number test; boundary handled by the caller.
bool inside_ring(const std::vector<Point2>& p, Point2 x) {
  bool in = false;
  for (std::size_t i = 0, j = p.size() - 1; i < p.size(); j = i++) {
    if ((p[i].x2 > x.x2) != (p[j].x2 > x.x2)) {
      const double xc = p[j].x1 + (x.x2 - p[j].x2) * (p[i].x1 - p[j].x1) / (p[i].x2 - p[j].x2);
      if (x.x1 < xc) in = !in;
    }
  }
  return in;
}

double point_segment_distance(Point2 x, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double l2 = dot(d, d);
  double s = l2 > 0.0 ? dot(x - a, d) / l2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return distance(x, a + s * d);
}

void check_ring(const Ring& r, const char* what) {
  if (r.points.size() < 3) throw std::invalid_argument(std::string(what) + " needs at least 3 points");
  if (r.bc.size() != r.points.size()) {
    throw std::invalid_argument(std::string(what) + ": one boundary condition per edge required");
  }
  if (!r.physical.empty() && r.physical.size() != r.points.size()) {
    throw std::invalid_argument(std::string(what) + ": physical flags must match edge count");
  }
  for (const Point2& p : r.points) {
    if (!std::isfinite(p.x1) || !std::isfinite(p.x2)) {
      throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
    }
  }
}

}  // namespace

const char* to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Neumann ? "neumann" : "dirichlet";
}

const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Source: return "source";
    case ComponentKind::Reflection: return "reflection";
    case ComponentKind::Diffraction: return "diffraction";
  }
  return "?";
}

Domain::Domain(Ring outer, std::vector<Ring> holes, bool unbounded)
    : outer_(std::move(outer)), holes_(std::move(holes)), unbounded_(unbounded) {
  check_ring(outer_, "outer ring");
  for (const Ring& h : holes_) check_ring(h, "hole");
  if (signed_area(outer_.points) <= 0.0) {
    throw std::invalid_argument("outer ring must be counterclockwise");
  }
  for (const Ring& h : holes_) {
    if (signed_area(h.points) >= 0.0) throw std::invalid_argument("hole rings must be clockwise");
  }

  lo_ = hi_ = outer_.points.front();
  for (const Point2& p : outer_.points) {
    lo_ = {std::min(lo_.x1, p.x1), std::min(lo_.x2, p.x2)};
    hi_ = {std::max(hi_.x1, p.x1), std::max(hi_.x2, p.x2)};
  }
  diameter_ = distance(lo_, hi_);
  eps_ = 1e-9 * diameter_;

  auto add_ring = [&](const Ring& r) {
    const int n = static_cast<int>(r.points.size());
    const int base = static_cast<int>(edges_.size());
    for (int i = 0; i < n; ++i) {
      Edge e;
      e.a = r.points[i];
      e.b = r.points[(i + 1) % n];
      e.bc = r.bc[i];
      e.index = base + i;
      e.physical = r.physical.empty() ? true : static_cast<bool>(r.physical[i]);
      if (e.length() <= eps_) throw std::invalid_argument("degenerate edge of zero length");
      edges_.push_back(e);
    }
    for (int i = 0; i < n; ++i) {
      VertexInfo v;
      v.position = r.points[i];
      v.index = static_cast<int>(vertices_.size());
      v.adjacent_edges = {base + i, base + (i + n - 1) % n};
      const Point2 out = r.points[(i + 1) % n] - r.points[i];
      const Point2 back = r.points[(i + n - 1) % n] - r.points[i];
      v.exterior_angle = kTwoPi - ccw_angle(out, back);
      v.physical = edges_[v.adjacent_edges[0]].physical && edges_[v.adjacent_edges[1]].physical;
      vertices_.push_back(v);
    }
  };
  add_ring(outer_);
  for (const Ring& h : holes_) add_ring(h);

  // Non-adjacent edges may not touch; adjacent edges may only share their common endpoint.
  const int ne = n_edges();
  for (int i = 0; i < ne; ++i) {
    for (int j = i + 1; j < ne; ++j) {
      const Edge& e = edges_[i];
      const Edge& f = edges_[j];
      const bool adjacent = e.b == f.a || f.b == e.a;
      const auto hit = segments_intersect(e.a, e.b, f, eps_);
      if (!hit) continue;
      if (adjacent && hit->grazing) {
        // Adjacent edges may share their endpoint but not fold back onto each other.
        const double c = cross(e.direction(), f.direction());
        if (std::abs(c) > 1e-12 * e.length() * f.length() || dot(e.direction(), f.direction()) > 0.0) {
          continue;
        }
      }
      throw std::invalid_argument("boundary edges " + std::to_string(i) + " and " +
                                  std::to_string(j) + " intersect");
    }
  }
  for (std::size_t k = 0; k < holes_.size(); ++k) {
    for (const Point2& p : holes_[k].points) {
      if (!inside_ring(outer_.points, p)) {
        throw std::invalid_argument("hole " + std::to_string(k) + " lies outside the outer ring");
      }
      for (std::size_t m = 0; m < holes_.size(); ++m) {
        if (m != k && inside_ring(holes_[m].points, p)) {
          throw std::invalid_argument("hole " + std::to_string(k) + " lies inside another hole");
        }
      }
    }
  }
}

std::pair<double, int> Domain::nearest_edge(Point2 x) const {
  double best = kInf;
  int idx = -1;
  for (const Edge& e : edges_) {
    const double dd = point_segment_distance(x, e.a, e.b);
    if (dd < best) {
      best = dd;
      idx = e.index;
    }
  }
  return {best, idx};
}

bool Domain::contains(Point2 x) const {
  if (nearest_edge(x).first <= eps_) return true;
  if (!inside_ring(outer_.points, x)) return false;
  for (const Ring& h : holes_) {
    if (inside_ring(h.points, x)) return false;
  }
  return true;
}

std::optional<Intersection> segments_intersect(Point2 p, Point2 q, const Edge& e, double eps) {
  const Point2 r = q - p;
  const Point2 d = e.b - e.a;
  const double lr = norm(r);
  const double ld = norm(d);
  if (lr == 0.0 || ld == 0.0) return std::nullopt;
  const double denom = cross(r, d);
  const Point2 ap = e.a - p;
  if (std::abs(denom) <= 1e-14 * lr * ld) {
    if (std::abs(cross(ap, r)) / lr > eps) return std::nullopt;
    const double ta = dot(e.a - p, r) / (lr * lr);
    const double tb = dot(e.b - p, r) / (lr * lr);
    const double lo = std::max(0.0, std::min(ta, tb));
    const double hi = std::min(1.0, std::max(ta, tb));
    if (lo > hi + eps / lr) return std::nullopt;
    Intersection out;
    out.t = lo;
    out.point = p + lo * r;
    out.s = std::clamp(dot(out.point - e.a, d) / (ld * ld), 0.0, 1.0);
    out.grazing = true;
    return out;
  }
  const double t = cross(ap, d) / denom;
  const double s = cross(ap, r) / denom;
  const double tt = eps / lr;
  const double ts = eps / ld;
  if (t < -tt || t > 1.0 + tt || s < -ts || s > 1.0 + ts) return std::nullopt;
  Intersection out;
  out.t = t;
  out.s = s;
  out.point = p + t * r;
  out.grazing = t <= tt || t >= 1.0 - tt || s <= ts || s >= 1.0 - ts;
  return out;
}

bool path_clear(const Domain& d, Point2 p, Point2 q, int skip_edge) {
  if (distance(p, q) <= d.eps()) return true;
  for (const Edge& e : d.edges()) {
    if (e.index == skip_edge) continue;
    const auto hit = segments_intersect(p, q, e, d.eps());
    if (hit && !hit->grazing) return false;
  }
  return true;
}

bool is_visible(const Domain& d, Point2 p, Point2 q) { return path_clear(d, p, q, -1); }

Point2 reflect_point(Point2 a, Point2 b, Point2 p) {
  const Point2 d = b - a;
  const double l2 = dot(d, d);
  if (l2 == 0.0) throw std::invalid_argument("reflect_point: line points coincide");
  const Point2 foot = a + (dot(p - a, d) / l2) * d;
  return 2.0 * foot - p;
}

bool in_vertex_sector(const VertexInfo& v, const Domain& d, Point2 dir) {
  const double len = norm(dir);
  if (len <= d.eps()) return true;
  const Edge& out = d.edges()[v.adjacent_edges[0]];
  const double opening = kTwoPi - v.exterior_angle;
  const double phi = ccw_angle(out.direction(), dir);
  const double tol = 1e-12 + d.eps() / len;
  return phi <= opening + tol || phi >= kTwoPi - tol;
}

bool support_contains(const Domain& d, const SupportDescriptor& s, Point2 x) {
  switch (s.kind) {
    case ComponentKind::Source:
      return path_clear(d, s.center, x);
    case ComponentKind::Diffraction: {
      const VertexInfo& v = d.vertices()[s.vertex];
      if (!in_vertex_sector(v, d, x - s.center)) return false;
      return path_clear(d, s.center, x);
    }
    case ComponentKind::Reflection: {
      const Edge& g = d.edges()[s.edge];
      const Point2 r = x - s.center;
      const Point2 gd = g.direction();
      const double denom = cross(r, gd);
      const double lr = norm(r);
      if (lr == 0.0 || std::abs(denom) <= 1e-14 * lr * g.length()) return false;
      const Point2 ap = g.a - s.center;
      const double tau = cross(ap, gd) / denom;
      const double sp = cross(ap, r) / denom;
      const double ttol = d.eps() / lr;
      const double stol = d.eps() / g.length();
      if (tau <= 0.0 || tau > 1.0 + ttol) return false;
      bool lit = false;
      for (const Interval& iv : s.lit) {
        if (sp >= iv.lo - stol && sp <= iv.hi + stol) {
          lit = true;
          break;
        }
      }
      if (!lit) return false;
      if (tau >= 1.0 - ttol) return true;
      return path_clear(d, g.at(std::clamp(sp, 0.0, 1.0)), x, g.index);
    }
  }
  return false;
}

std::vector<Interval> lit_intervals(const Domain& d, const SupportDescriptor& parent, const Edge& e) {
  if (parent.kind == ComponentKind::Reflection && parent.edge == e.index) return {};
  const Point2 c = parent.center;
  const Point2 ed = e.direction();
  const double len = e.length();
  // The wave must arrive from the domain side of the edge.
  if (cross(ed, c - e.a) <= d.eps() * len) return {};

  std::vector<double> cuts = {0.0, 1.0};
  auto project = [&](Point2 through) {
    const Point2 r = through - c;
    const double denom = cross(r, ed);
    if (std::abs(denom) <= 1e-14 * norm(r) * len) return;
    const double s = cross(e.a - c, r) / denom;
    if (s > 0.0 && s < 1.0) cuts.push_back(s);
  };
  for (const VertexInfo& v : d.vertices()) project(v.position);
  if (parent.kind == ComponentKind::Reflection) {
    const Edge& g = d.edges()[parent.edge];
    for (const Interval& iv : parent.lit) {
      project(g.at(iv.lo));
      project(g.at(iv.hi));
    }
    const double denom = cross(g.direction(), ed);
    if (std::abs(denom) > 1e-14 * g.length() * len) {
      const double s = cross(e.a - g.a, g.direction()) / denom;
      if (s > 0.0 && s < 1.0) cuts.push_back(s);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  std::vector<Interval> out;
  const double min_len = d.eps() / len;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    if (hi - lo <= min_len) continue;
    if (!support_contains(d, parent, e.at(0.5 * (lo + hi)))) continue;
    if (!out.empty() && lo - out.back().hi <= min_len) {
      out.back().hi = hi;
    } else {
      out.push_back({lo, hi});
    }
  }
  return out;
}

double distance_to_lit(const Edge& e, Point2 center, const std::vector<Interval>& lit) {
  double best = kInf;
  const Point2 ed = e.direction();
  const double l2 = dot(ed, ed);
  const double foot = dot(center - e.a, ed) / l2;
  for (const Interval& iv : lit) {
    const double s = std::clamp(foot, iv.lo, iv.hi);
    best = std::min(best, distance(center, e.at(s)));
  }
  return best;
}

WedgeLocalFrame local_wedge_frame(const Domain& d, const VertexInfo& v, Point2 source, int bc_sign) {
  const Point2 dir = source - v.position;
  const double len = norm(dir);
  if (len <= d.eps()) throw std::invalid_argument("local_wedge_frame: source at the vertex");
  if (std::abs(v.exterior_angle - kPi) <= 1e-9) {
    throw std::invalid_argument("local_wedge_frame: flat vertex does not diffract");
  }
  const Edge& out = d.edges()[v.adjacent_edges[0]];
  WedgeLocalFrame f;
  f.alpha = v.exterior_angle;
  f.nu = wedge_index(f.alpha);
  f.bc_sign = bc_sign >= 0 ? 1 : -1;
  f.origin = v.position;
  f.reference_angle = polar_angle(out.direction());
  const double open = f.opening();
  const double tol = 1e-9;
  double theta = ccw_angle(out.direction(), dir);
  if (theta >= kTwoPi - tol) theta = 0.0;
  if (theta > open + tol) throw std::invalid_argument("local_wedge_frame: source outside the wedge");
  f.theta = std::clamp(theta, 0.0, open);
  f.grazing = f.theta <= tol || f.theta >= open - tol;
  return f;
}

Domain make_wedge_domain(const WedgeScene& w) {
  if (!(w.alpha > 0.0 && w.alpha < kTwoPi) || std::abs(w.alpha - kPi) < 1e-12) {
    throw std::invalid_argument("wedge: exterior angle must lie in (0, 2pi) and differ from pi");
  }
  const double open = kTwoPi - w.alpha;
  if (!(w.theta > 0.0 && w.theta < open)) {
    throw std::invalid_argument("wedge: incidence angle must lie strictly inside the opening");
  }
  if (!(w.distance > 0.0)) throw std::invalid_argument("wedge: distance must be positive");
  const Point2 v = -w.distance * unit_direction(w.theta);
  const double L = w.half_width;
  if (!(L > w.distance)) throw std::invalid_argument("wedge: box must contain the apex");

  // Exit point of a ray from v and its position along the box perimeter (counterclockwise
  // from the bottom-right corner).
  auto exit = [&](Point2 dir) {
    double t = kInf;
    if (dir.x1 > 0) t = std::min(t, (L - v.x1) / dir.x1);
    if (dir.x1 < 0) t = std::min(t, (-L - v.x1) / dir.x1);
    if (dir.x2 > 0) t = std::min(t, (L - v.x2) / dir.x2);
    if (dir.x2 < 0) t = std::min(t, (-L - v.x2) / dir.x2);
    return v + t * dir;
  };
  auto perimeter = [&](Point2 p) {
    const double tol = 1e-12 * L;
    if (std::abs(p.x1 - L) <= tol && p.x2 < L - tol) return p.x2 + L;
    if (std::abs(p.x2 - L) <= tol && p.x1 > -L + tol) return 2 * L + (L - p.x1);
    if (std::abs(p.x1 + L) <= tol && p.x2 > -L + tol) return 4 * L + (L - p.x2);
    return 6 * L + (p.x1 + L);
  };
  const Point2 a_end = exit({1.0, 0.0});
  const Point2 b_end = exit(unit_direction(open));
  const double sa = perimeter(a_end);
  double sb = perimeter(b_end);
  if (sb <= sa) sb += 8 * L;
  const std::array<Point2, 4> corners = {Point2{L, L}, Point2{-L, L}, Point2{-L, -L}, Point2{L, -L}};

  Ring ring;
  ring.points.push_back(v);
  ring.points.push_back(a_end);
  for (int k = 1; k <= 8; ++k) {
    const double s = 2.0 * L * k;
    if (s > sa && s < sb) ring.points.push_back(corners[(k - 1) % 4]);
  }
  ring.points.push_back(b_end);
  const std::size_t n = ring.points.size();
  ring.bc.assign(n, w.bc);
  ring.physical.assign(n, false);
  ring.physical.front() = true;  // face along +x1
  ring.physical.back() = true;   // face returning to the apex
  return Domain(std::move(ring), {}, true);
}

}  // namespace polywave
