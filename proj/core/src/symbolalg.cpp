#include "eqchern/symbolalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace eqchern {

namespace {

struct Frame {
  CoordinateKind base_kind;
  CoordinateKind fiber_kind;
};

Frame frame_of(const ActionModel& model) {
  const auto base = base_coordinates(model);
  const auto fiber = fiber_coordinates(model);
  if (base.size() != 1 || fiber.size() != 1)
    throw UnsupportedModel("symbol checks need one base and one fiber coordinate");
  return {model.coordinates[base[0]].kind, model.coordinates[fiber[0]].kind};
}

std::vector<Complex> x_samples(const Frame& frame, double support, int count) {
  if (count < 1) throw InvalidArgument("symbol grid: no x points");
  std::vector<Complex> xs;
  if (frame.base_kind == CoordinateKind::angle) {
    for (int k = 0; k < count; ++k) xs.emplace_back(2.0 * std::numbers::pi * k / count, 0.0);
    return xs;
  }
  if (frame.base_kind == CoordinateKind::real) {
    for (int k = 0; k < count; ++k) xs.emplace_back(support * (2.0 * k / std::max(1, count - 1) - 1.0), 0.0);
    return xs;
  }
  const int rings = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(count)))));
  const int per_ring = std::max(1, count / rings);
  for (int i = 0; i < rings; ++i)
    for (int j = 0; j < per_ring; ++j)
      xs.push_back(std::polar(support * i / rings, 2.0 * std::numbers::pi * j / per_ring));
  return xs;
}

// Unit covectors; the first is orthogonal to the orbit through x when the
// orbit is a circle in ℂ.
std::vector<Complex> directions(const Frame& frame, Complex x, int count) {
  if (count < 1) throw InvalidArgument("symbol grid: no directions");
  if (frame.fiber_kind != CoordinateKind::complex) return {1.0, -1.0};
  const Complex u = std::abs(x) > 0.0 ? x / std::abs(x) : Complex{1.0};
  std::vector<Complex> out;
  for (int j = 0; j < count; ++j) out.push_back(u * std::polar(1.0, 2.0 * std::numbers::pi * j / count));
  return out;
}

std::vector<double> log_radii(const SymbolGrid& grid, double outer) {
  if (grid.radii < 2 || !(outer > 0.0) || !(grid.min_fraction > 0.0 && grid.min_fraction < 1.0))
    throw InvalidArgument("symbol grid: degenerate radii");
  std::vector<double> r;
  for (int k = 0; k < grid.radii; ++k)
    r.push_back(outer * std::pow(grid.min_fraction, 1.0 - static_cast<double>(k) / (grid.radii - 1)));
  return r;
}

double phi_norm_sq(const ActionModel& model, Complex x, Complex xi) {
  const Complex xs[] = {x};
  const Complex xis[] = {xi};
  double s = 0.0;
  for (auto v : orbital_projection(model, xs, xis)) s += std::norm(v);
  return s;
}

double abs_b(const SymbolFunction& b, Complex x, Complex xi) {
  const Complex xs[] = {x};
  const Complex xis[] = {xi};
  return operator_norm(b.evaluate(xs, xis));
}

double minimal_c(const SymbolFunction& b, const ActionModel& model, double eps, const SymbolGrid& grid, double outer) {
  const Frame frame = frame_of(model);
  auto radii = log_radii(grid, outer);
  radii.insert(radii.begin(), 0.0);
  double c = 0.0;
  for (Complex x : x_samples(frame, b.x_support_radius, grid.x_points)) {
    for (Complex dir : directions(frame, x, grid.directions)) {
      for (double r : radii) {
        const Complex xi = r * dir;
        const double excess = abs_b(b, x, xi) - eps;
        if (excess <= 0.0) continue;
        c = std::max(c, excess * (1.0 + r * r) / (1.0 + phi_norm_sq(model, x, xi)));
      }
    }
  }
  return c;
}

}  // namespace

Cutoff bump_cutoff(double radius, double height) {
  if (!(radius > 0.0)) throw InvalidArgument("bump_cutoff: radius must be positive");
  Cutoff c;
  char name[48];
  std::snprintf(name, sizeof name, "bump(r=%g)", radius);
  c.name = name;
  c.radius = radius;
  c.profile = [radius, height](double x) {
    const double s = (x * x) / (radius * radius);
    return s < 1.0 ? height * std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0;
  };
  return c;
}

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  if (m.size() == 1) return std::abs(m(0, 0));
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

double base_norm(const ActionModel& model, std::span<const Complex> base_point) {
  const auto base = base_coordinates(model);
  double s = 0.0;
  for (std::size_t k = 0; k < base.size(); ++k)
    if (model.coordinates[base[k]].kind != CoordinateKind::angle) s += std::norm(base_point[k]);
  return std::sqrt(s);
}

SymbolFunction normalized_symbol(const ActionModel& model) {
  SymbolFunction f;
  f.name = model.name + ":normalized-symbol";
  f.evaluate = [model](std::span<const Complex> x, std::span<const Complex> xi) {
    const auto values = symbol_values(model, x, xi);
    const std::size_t n = model.symbol.dim();
    Eigen::MatrixXcd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = model.symbol(i, j).scalar_part().evaluate(values);
    double xi_sq = 0.0;
    for (auto v : xi) xi_sq += std::norm(v);
    const double x_norm = base_norm(model, x);
    return Eigen::MatrixXcd(m * std::pow(1.0 + x_norm * x_norm + xi_sq, -0.5 * model.symbol_order));
  };
  return f;
}

SymbolFunction cutoff_defect(const ActionModel& model, const Cutoff& cutoff) {
  const auto sigma = normalized_symbol(model);
  SymbolFunction f;
  f.name = model.name + ":" + cutoff.name + "·(1-σ²)";
  f.x_support_radius = cutoff.radius;
  f.evaluate = [sigma, cutoff, model](std::span<const Complex> x, std::span<const Complex> xi) {
    const Eigen::MatrixXcd s = sigma.evaluate(x, xi);
    const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(s.rows(), s.cols());
    return Eigen::MatrixXcd(cutoff.profile(base_norm(model, x)) * (one - s * s));
  };
  return f;
}

ConditionCReport condition_c_fit(const SymbolFunction& b, const ActionModel& model, std::span<const double> eps_list,
                                 const SymbolGrid& grid) {
  if (eps_list.empty()) throw InvalidArgument("condition_c_fit: empty ε list");
  ConditionCReport report;
  report.pass = true;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw InvalidArgument("condition_c_fit: ε must be positive");
    const double outer = minimal_c(b, model, eps, grid, grid.radius);
    const double inner = minimal_c(b, model, eps, grid, grid.radius / 2.0);
    double ratio = 1.0;
    if (inner > 0.0) ratio = outer / inner;
    else if (outer > 0.0) ratio = std::numeric_limits<double>::infinity();
    report.eps.push_back(eps);
    report.c_outer.push_back(outer);
    report.c_inner.push_back(inner);
    report.ratio.push_back(ratio);
    report.pass = report.pass && ratio < report.stabilization_ratio;
  }
  return report;
}

DecayReport restriction_decay_check(const SymbolFunction& b, const ActionModel& model, const SymbolGrid& grid,
                                    double delta) {
  const Frame frame = frame_of(model);
  DecayReport report;
  report.delta = delta;
  report.radii = log_radii(grid, grid.radius);
  report.shell_sup.assign(report.radii.size(), 0.0);
  bool any = false;
  for (Complex x : x_samples(frame, b.x_support_radius, grid.x_points)) {
    for (Complex dir : directions(frame, x, grid.directions)) {
      // Keep the rays along which φ_x vanishes: the fibre of T_G M.
      if (phi_norm_sq(model, x, dir) > 1e-20) continue;
      any = true;
      for (std::size_t k = 0; k < report.radii.size(); ++k)
        report.shell_sup[k] = std::max(report.shell_sup[k], abs_b(b, x, report.radii[k] * dir));
    }
  }
  if (!any) {
    report.vacuous = true;
    report.pass = true;
    return report;
  }
  const auto peak = static_cast<std::size_t>(
      std::max_element(report.shell_sup.begin(), report.shell_sup.end()) - report.shell_sup.begin());
  bool monotone = true;
  for (std::size_t k = peak; k + 1 < report.shell_sup.size(); ++k)
    monotone = monotone && report.shell_sup[k + 1] <= report.shell_sup[k] * (1.0 + 1e-9) + 1e-15;
  report.pass = monotone && report.shell_sup.back() < delta;
  return report;
}

std::vector<Cutoff> default_cutoffs() { return {bump_cutoff(1.0), bump_cutoff(2.0)}; }

std::vector<double> default_eps_list() { return {0.1, 0.03, 0.01}; }

TransversalReport transversal_ellipticity_check(const ActionModel& model, std::span<const Cutoff> cutoffs,
                                                const SymbolGrid& grid, std::span<const double> eps_list,
                                                double delta) {
  if (cutoffs.empty()) throw InvalidArgument("transversal_ellipticity_check: no cutoffs");
  TransversalReport report;
  report.pass = true;
  for (const auto& cutoff : cutoffs) {
    const auto b = cutoff_defect(model, cutoff);
    report.cutoffs.push_back(cutoff.name);
    report.condition_c.push_back(condition_c_fit(b, model, eps_list, grid));
    report.decay.push_back(restriction_decay_check(b, model, grid, delta));
    report.pass = report.pass && report.condition_c.back().pass && report.decay.back().pass;
  }
  return report;
}

}  // namespace eqchern
