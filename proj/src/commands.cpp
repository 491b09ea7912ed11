#include "polywave/commands.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "polywave/surrogate_io.hpp"

namespace polywave {
namespace {

std::ofstream open_csv(const std::string& path, const char* header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << std::setprecision(17) << header << '\n';
  return out;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite value in ") + what);
}

}  // namespace

EvalMode parse_eval_mode(const std::string& s) {
  if (s == "full") return EvalMode::Full;
  if (s == "go") return EvalMode::Go;
  if (s == "indicator") return EvalMode::Indicator;
  throw std::invalid_argument("unknown mode '" + s + "' (expected full, go or indicator)");
}

Surrogate build_from_scene(const Scene& scene) {
  const GridSize g = scene.psi_grid();
  auto psi = std::make_shared<const FreeSpaceGrid>(solve_radial(scene.source, scene.run.T, g.n_rho, g.n_t));
  return build_surrogate(scene.domain, psi, scene.build_config());
}

std::string component_report(const Surrogate& s) {
  std::size_t counts[3] = {0, 0, 0};
  for (const FieldComponent& c : s.components()) ++counts[static_cast<int>(c.kind)];
  std::ostringstream os;
  os << std::setprecision(10);
  os << "N = " << s.size() << "\n";
  os << "source = " << counts[0] << ", reflection = " << counts[1] << ", diffraction = " << counts[2] << "\n";
  os << "discarded = " << s.discarded().size() << " (tol = " << s.config().tol << ")\n";
  os << "index,key,kind,parent,feature,birth_time,magnitude_bound\n";
  for (const FieldComponent& c : s.components()) {
    os << c.index << ',' << c.key << ',' << to_string(c.kind) << ',' << c.parent << ',' << c.feature << ','
       << c.birth_time << ',' << c.magnitude_bound << '\n';
  }
  return os.str();
}

std::string cmd_build(const Scene& scene, const std::string& out_path) {
  const Surrogate s = build_from_scene(scene);
  save_surrogate(out_path, s, scene.source);
  const std::string report = component_report(s);
  std::ofstream rep(out_path + ".report.txt");
  if (!rep) throw std::runtime_error("cannot write report next to " + out_path);
  rep << report;
  return report;
}

double evaluate_mode(const Surrogate& s, EvalMode mode, Point2 x, double t) {
  switch (mode) {
    case EvalMode::Full: return s.evaluate(x, t);
    case EvalMode::Go: return s.evaluate_go(x, t);
    case EvalMode::Indicator: return s.error_indicator(x, t);
  }
  return 0.0;
}

std::vector<double> evaluate_points(const Surrogate& s, EvalMode mode, const std::vector<Point2>& pts, double t) {
  std::vector<double> out(pts.size());
  const std::size_t nthreads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t chunk = (pts.size() + nthreads - 1) / nthreads;
  std::vector<std::exception_ptr> errors(nthreads);
  auto work = [&](std::size_t lo, std::size_t hi, std::size_t slot) {
    try {
      for (std::size_t i = lo; i < hi; ++i) out[i] = evaluate_mode(s, mode, pts[i], t);
    } catch (...) {
      errors[slot] = std::current_exception();
    }
  };
  if (nthreads == 1 || pts.size() < 2 * nthreads) {
    work(0, pts.size(), 0);
    if (errors[0]) std::rethrow_exception(errors[0]);
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t lo = 0, slot = 0; lo < pts.size(); lo += chunk, ++slot) {
    pool.emplace_back(work, lo, std::min(pts.size(), lo + chunk), slot);
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<Point2> snapshot_points(const Domain& d, double grid_h) {
  if (!(grid_h > 0.0)) throw std::invalid_argument("snapshot grid spacing must be positive");
  const Point2 lo = d.lower();
  const Point2 hi = d.upper();
  const int nx = std::max(1, static_cast<int>(std::ceil((hi.x1 - lo.x1) / grid_h)));
  const int ny = std::max(1, static_cast<int>(std::ceil((hi.x2 - lo.x2) / grid_h)));
  std::vector<Point2> pts;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Point2 x{lo.x1 + (i + 0.5) * grid_h, lo.x2 + (j + 0.5) * grid_h};
      if (d.contains(x)) pts.push_back(x);
    }
  }
  return pts;
}

std::vector<std::string> cmd_eval(const Surrogate& s, EvalMode mode, const EvalTargets& targets,
                                  const std::string& prefix) {
  std::vector<std::string> bad;
  for (const Point2& p : targets.probes) {
    if (!s.domain().contains(p)) {
      std::ostringstream os;
      os << "(" << p.x1 << ", " << p.x2 << ")";
      bad.push_back(os.str());
    }
  }
  if (!bad.empty()) {
    std::string msg = "targets outside the domain:";
    for (const std::string& b : bad) msg += " " + b;
    throw std::domain_error(msg);
  }
  const double T = s.config().T;
  for (double t : targets.times) {
    if (t < 0.0 || t > T) throw std::out_of_range("snapshot time outside [0, T]");
  }
  std::vector<std::string> files;
  if (!targets.times.empty()) {
    const std::vector<Point2> pts = snapshot_points(s.domain(), targets.grid_h);
    for (std::size_t k = 0; k < targets.times.size(); ++k) {
      const std::string path = prefix + "_t" + std::to_string(k) + ".csv";
      std::ofstream out = open_csv(path, "x1,x2,value");
      const std::vector<double> vals = evaluate_points(s, mode, pts, targets.times[k]);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        check_finite(vals[i], "snapshot");
        out << pts[i].x1 << ',' << pts[i].x2 << ',' << vals[i] << '\n';
      }
      files.push_back(path);
    }
  }
  if (!targets.probes.empty()) {
    if (!(targets.trace_dt > 0.0)) throw std::invalid_argument("trace step must be positive");
    const std::size_t n = static_cast<std::size_t>(std::floor(T / targets.trace_dt + 1e-9));
    for (std::size_t p = 0; p < targets.probes.size(); ++p) {
      const std::string path = prefix + "_probe" + std::to_string(p) + ".csv";
      std::ofstream out = open_csv(path, "t,value");
      for (std::size_t i = 0; i <= n; ++i) {
        const double t = std::min(T, targets.trace_dt * static_cast<double>(i));
        const double v = evaluate_mode(s, mode, targets.probes[p], t);
        check_finite(v, "trace");
        out << t << ',' << v << '\n';
      }
      files.push_back(path);
    }
  }
  return files;
}

ReferenceGrid run_reference(const Scene& scene, const std::vector<double>& times) {
  ReferenceOptions opt;
  opt.h = scene.run.reference_h;
  opt.probes = scene.run.probes;
  opt.snapshot_times = times;
  return solve_reference(*scene.domain, scene.source, scene.run.T, opt);
}

std::vector<std::string> cmd_reference(const Scene& scene, const std::vector<double>& times,
                                       const std::string& prefix) {
  const ReferenceGrid ref = run_reference(scene, times);
  std::vector<std::string> files;
  for (std::size_t k = 0; k < times.size(); ++k) {
    files.push_back(prefix + "_t" + std::to_string(k) + ".csv");
    ref.write_snapshot_csv(files.back(), k);
  }
  for (std::size_t p = 0; p < ref.probes().size(); ++p) {
    files.push_back(prefix + "_probe" + std::to_string(p) + ".csv");
    ref.write_trace_csv(files.back(), p);
  }
  return files;
}

std::vector<std::pair<double, double>> compare_errors(const Surrogate& s, const ReferenceGrid& ref,
                                                      double quad_h) {
  std::vector<std::pair<double, double>> rows;
  for (std::size_t k = 0; k < ref.snapshot_times().size(); ++k) {
    const double t = ref.snapshot_times()[k];
    const double err = relative_l2_error([&](Point2 x) { return s.evaluate(x, t); },
                                         [&](Point2 x) { return ref.sample_snapshot(k, x); }, s.domain(), quad_h);
    rows.emplace_back(t, err);
  }
  return rows;
}

void cmd_compare(const Scene& scene, const Surrogate& s, const std::vector<double>& times,
                 const std::string& out_csv) {
  const ReferenceGrid ref = run_reference(scene, times);
  std::ofstream out = open_csv(out_csv, "t,rel_l2_error");
  for (const auto& [t, e] : compare_errors(s, ref, scene.run.quad_h)) {
    check_finite(e, "error table");
    out << t << ',' << e << '\n';
  }
}

std::vector<std::pair<double, double>> sweep_mu(const Surrogate& s, const ReferenceGrid& ref, std::size_t k,
                                                const std::vector<double>& mu_values, double quad_h) {
  const double t = ref.snapshot_times().at(k);
  const std::vector<Point2> pts = snapshot_points(s.domain(), quad_h);
  std::vector<AngularCache> caches;
  std::vector<double> refv;
  caches.reserve(pts.size());
  refv.reserve(pts.size());
  double den = 0.0;
  for (const Point2& x : pts) {
    caches.push_back(angular_cache(s, x, t));
    refv.push_back(ref.sample_snapshot(k, x));
    den += refv.back() * refv.back();
  }
  if (!(den > 0.0)) throw std::domain_error("sweep: reference field is identically zero");
  std::vector<std::pair<double, double>> rows;
  for (double mu : mu_values) {
    const Surrogate sm = s.with_mu_bar(mu);
    double num = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d = evaluate_cached(sm, caches[i]) - refv[i];
      num += d * d;
    }
    rows.emplace_back(mu, std::sqrt(num / den));
  }
  return rows;
}

void cmd_sweep_mu(const Scene& scene, const Surrogate& s, double t, const std::vector<double>& mu_values,
                  const std::string& out_csv) {
  const ReferenceGrid ref = run_reference(scene, {t});
  std::ofstream out = open_csv(out_csv, "mu_bar,rel_l2_error");
  for (const auto& [mu, e] : sweep_mu(s, ref, 0, mu_values, scene.run.quad_h)) {
    check_finite(e, "sweep table");
    out << mu << ',' << e << '\n';
  }
}

}  // namespace polywave
