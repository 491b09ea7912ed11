#pragma once

// Polygonal domains with holes, visibility queries and support predicates.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "polywave/point.hpp"
#include "polywave/utd.hpp"

namespace polywave {

enum class BoundaryCondition { Neumann, Dirichlet };

/// +1 for Neumann (sound-hard), -1 for Dirichlet (sound-soft).
inline int bc_sign(BoundaryCondition bc) { return bc == BoundaryCondition::Neumann ? 1 : -1; }
const char* to_string(BoundaryCondition bc);

/// Directed boundary edge; the domain lies to its left.
struct Edge {
  Point2 a{};
  Point2 b{};
  BoundaryCondition bc = BoundaryCondition::Neumann;
  int index = 0;
  bool physical = true;  ///< false for truncation edges of unbounded scenes

  Point2 direction() const { return b - a; }
  double length() const { return distance(a, b); }
  Point2 at(double s) const { return a + s * (b - a); }
};

struct VertexInfo {
  Point2 position{};
  int index = 0;
  /// {outgoing, incoming}. The outgoing edge is the reference face of the local frame.
  std::array<int, 2> adjacent_edges{};
  double exterior_angle = kPi;
  bool physical = true;  ///< both adjacent edges physical
};

/// Closed polygonal ring. Edge i joins points[i] and points[i+1] (cyclically).
struct Ring {
  std::vector<Point2> points;
  std::vector<BoundaryCondition> bc;
  std::vector<bool> physical;  ///< empty means all physical
};

/// Polygon with holes. Outer ring counterclockwise, holes clockwise.
class Domain {
 public:
  Domain(Ring outer, std::vector<Ring> holes = {}, bool unbounded = false);

  const Ring& outer() const { return outer_; }
  const std::vector<Ring>& holes() const { return holes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<VertexInfo>& vertices() const { return vertices_; }
  bool unbounded() const { return unbounded_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  int n_vertices() const { return static_cast<int>(vertices_.size()); }

  /// Tolerance for intersection and containment tests, 1e-9 times the diameter.
  double eps() const { return eps_; }
  double diameter() const { return diameter_; }
  Point2 lower() const { return lo_; }
  Point2 upper() const { return hi_; }

  /// Membership in the closed domain.
  bool contains(Point2 x) const;
  /// Distance from x to the nearest edge, and that edge's index.
  std::pair<double, int> nearest_edge(Point2 x) const;

 private:
  Ring outer_;
  std::vector<Ring> holes_;
  std::vector<Edge> edges_;
  std::vector<VertexInfo> vertices_;
  bool unbounded_ = false;
  double eps_ = 1e-9;
  double diameter_ = 1.0;
  Point2 lo_{}, hi_{};
};

struct Intersection {
  Point2 point{};
  double t = 0.0;  ///< parameter along p->q
  double s = 0.0;  ///< parameter along the edge
  bool grazing = false;
};

/// Intersection of segment [p, q] with an edge. Endpoint contacts and collinear overlaps are
/// reported with grazing = true.
std::optional<Intersection> segments_intersect(Point2 p, Point2 q, const Edge& e, double eps);

/// True when no edge other than skip_edge is properly crossed by the segment.
bool path_clear(const Domain& d, Point2 p, Point2 q, int skip_edge = -1);

/// Segment (p, q) meets no edge except through grazing contacts.
bool is_visible(const Domain& d, Point2 p, Point2 q);

/// Mirror image of p across the line through a and b.
Point2 reflect_point(Point2 a, Point2 b, Point2 p);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

enum class ComponentKind { Source, Reflection, Diffraction };
const char* to_string(ComponentKind k);

struct SupportDescriptor {
  ComponentKind kind = ComponentKind::Source;
  Point2 center{};
  int edge = -1;    ///< reflecting edge
  int vertex = -1;  ///< diffracting vertex
  std::vector<Interval> lit;  ///< lit parameter intervals on the reflecting edge
};

/// Parameter intervals of e lying in the closure of the support.
std::vector<Interval> lit_intervals(const Domain& d, const SupportDescriptor& parent, const Edge& e);

bool support_contains(const Domain& d, const SupportDescriptor& s, Point2 x);

/// Whether direction dir leaves the vertex into the domain (closed sector).
bool in_vertex_sector(const VertexInfo& v, const Domain& d, Point2 dir);

/// Shortest distance from center to the lit part of an edge (infinity when unlit).
double distance_to_lit(const Edge& e, Point2 center, const std::vector<Interval>& lit);

/// Local frame of a vertex lit from `source`.
WedgeLocalFrame local_wedge_frame(const Domain& d, const VertexInfo& v, Point2 source, int bc_sign);

struct WedgeScene {
  double alpha = 1.5 * kPi;
  double theta = 0.25 * kPi;
  double distance = 4.0;   ///< source to apex
  double half_width = 7.0; ///< truncation box half-width about the source
  BoundaryCondition bc = BoundaryCondition::Neumann;
};

/// Two faces meeting at an apex, truncated by a square box around the source (at the origin).
/// The face along +x1 from the apex is the outgoing (reference) face.
Domain make_wedge_domain(const WedgeScene& w);

}  // namespace polywave
