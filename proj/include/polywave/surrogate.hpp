#pragma once

// Sum-of-components surrogate: timetable-driven discovery of reflections and diffractions,
// evaluation, and error estimators.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polywave/geometry.hpp"
#include "polywave/radial.hpp"
#include "polywave/utd.hpp"

namespace polywave {

/// Diffraction coefficient sampled over the opening of a vertex, times an incident amplitude.
struct DiffractionTable {
  WedgeLocalFrame frame;
  double mu_bar = 10.0;
  double eps_sing = 1e-7;
  double scale = 1.0;   ///< incident amplitude: parent weight toward the vertex
  double factor = 1.0;  ///< 1/2 for grazing incidence
  std::vector<double> phi;
  std::vector<double> d;  ///< unscaled coefficient samples (factor applied)

  /// scale * D at local angle phi, linear interpolation between samples.
  double operator()(double local_phi) const;
  double max_abs() const;
};

/// Number of uniform samples across the opening, before double nodes at shadow boundaries.
inline constexpr std::size_t kTableSamples = 4096;

DiffractionTable make_diffraction_table(const WedgeLocalFrame& frame, double mu_bar, double eps_sing,
                                        double scale);

/// zeta_n: sign, optional diffraction table, and the reflection chain since that table.
struct AngularWeight {
  int sign = 1;
  std::shared_ptr<const DiffractionTable> base;  ///< null means constant 1
  std::vector<double> betas;  ///< polar angles of reflecting lines, oldest first

  /// Global polar angle after undoing the reflections (newest first).
  double unfolded_angle(Point2 y) const;
  double operator()(Point2 y) const;
  double max_abs() const;
};

struct FieldComponent {
  int index = 0;
  ComponentKind kind = ComponentKind::Source;
  Point2 xi{};
  double r = 0.0;
  SupportDescriptor support;
  AngularWeight zeta;
  int parent = -1;
  int feature = -1;  ///< edge (reflection) or vertex (diffraction) that spawned it
  double birth_time = 0.0;
  double magnitude_bound = 0.0;
  bool diffraction_in_chain = false;
  std::string key;  ///< provenance path such as S/R3/D5
};

struct BuildConfig {
  double T = 5.0;
  double R = 1.0;
  double mu_bar = 10.0;
  double tol = 0.0;
  std::size_t max_components = 100000;
  double eps_sing = 1e-7;
};

struct DiscardedComponent {
  std::string key;
  ComponentKind kind = ComponentKind::Source;
  int parent = -1;
  int feature = -1;
  double birth_time = 0.0;
  double magnitude_bound = 0.0;
};

/// Whether a vertex may generate diffraction events at all.
bool vertex_can_diffract(const Domain& d, const VertexInfo& v);

/// r_n + distance to the lit part of the edge; infinity when unlit or excluded.
double edge_time(const FieldComponent& c, const Edge& e, const Domain& d);
double vertex_time(const FieldComponent& c, const VertexInfo& v, const Domain& d);

FieldComponent spawn_reflection(const FieldComponent& parent, const Edge& e, const Domain& d);
std::optional<FieldComponent> spawn_diffraction(const FieldComponent& parent, const VertexInfo& v,
                                                const Domain& d, const DiffractionParams& p);

/// Magnitude bound: max |Psi| beyond the support's nearest distance, times max |zeta|.
double magnitude_bound(const FieldComponent& c, const Domain& d, const FreeSpaceGrid& psi);

class Surrogate {
 public:
  Surrogate(std::shared_ptr<const Domain> domain, std::shared_ptr<const FreeSpaceGrid> psi,
            BuildConfig cfg, std::vector<FieldComponent> components,
            std::vector<DiscardedComponent> discarded);

  const Domain& domain() const { return *domain_; }
  const std::shared_ptr<const Domain>& domain_ptr() const { return domain_; }
  const FreeSpaceGrid& psi() const { return *psi_; }
  const std::shared_ptr<const FreeSpaceGrid>& psi_ptr() const { return psi_; }
  const BuildConfig& config() const { return cfg_; }
  const std::vector<FieldComponent>& components() const { return components_; }
  const std::vector<DiscardedComponent>& discarded() const { return discarded_; }
  std::size_t size() const { return components_.size(); }

  /// Contribution of one component; x is assumed to lie in the domain.
  double component_value(const FieldComponent& c, Point2 x, double t) const;

  double evaluate(Point2 x, double t) const;
  /// Only components without diffraction in their causal chain.
  double evaluate_go(Point2 x, double t) const;
  double error_indicator(Point2 x, double t) const;

  /// Same components with every diffraction table rebuilt at another mu_bar.
  Surrogate with_mu_bar(double mu_bar) const;
  /// Same components driven by another free-space solution.
  Surrogate with_psi(std::shared_ptr<const FreeSpaceGrid> psi) const;

 private:
  void check_inside(Point2 x) const;

  std::shared_ptr<const Domain> domain_;
  std::shared_ptr<const FreeSpaceGrid> psi_;
  BuildConfig cfg_;
  std::vector<FieldComponent> components_;
  std::vector<DiscardedComponent> discarded_;
};

Surrogate build_surrogate(std::shared_ptr<const Domain> domain,
                          std::shared_ptr<const FreeSpaceGrid> psi, const BuildConfig& cfg);

/// Per-point data for re-evaluating a surrogate under different mu_bar without geometry queries.
struct AngularCache {
  struct Term {
    std::size_t component = 0;
    double psi = 0.0;          ///< Psi times the support indicator times the sign
    double unfolded = 0.0;     ///< global angle fed to the base table
  };
  double go = 0.0;
  std::vector<Term> terms;
};

AngularCache angular_cache(const Surrogate& s, Point2 x, double t);
/// Evaluates with the tables of `s` (which must share components with the cache's source).
double evaluate_cached(const Surrogate& s, const AngularCache& cache);

/// 200 log-spaced wavenumbers on [0.01, 1000].
std::vector<double> default_k_grid();

/// sup_k |D_mubar(phi) - D_{k s}(phi)| times the L1 norm of the discrete Fourier transform of
/// the incident trace at the vertex of a diffraction component.
double apriori_diffraction_bound(const Surrogate& s, const FieldComponent& comp, double phi,
                                 const std::vector<double>& k_grid, double dist);

/// Piecewise-constant accumulation over diffraction-carrying components reaching x by time t.
std::vector<double> apriori_trace_bound(const Surrogate& s, Point2 x, const std::vector<double>& times,
                                        const std::vector<double>& k_grid);

}  // namespace polywave
