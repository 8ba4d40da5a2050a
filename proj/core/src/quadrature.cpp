#include "eqchern/quadrature.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace eqchern {

namespace {

constexpr Complex I{0.0, 1.0};
constexpr std::size_t block_size = 4096;

// Flattened polynomial for repeated evaluation on a grid.
class CompiledPoly {
 public:
  explicit CompiledPoly(const Poly& p) {
    for (const auto& [monomial, c] : p.terms()) {
      Term t{c, {}};
      for (std::size_t s = 0; s < monomial.size(); ++s)
        if (monomial[s] != 0) t.factors.emplace_back(s, monomial[s]);
      terms_.push_back(std::move(t));
    }
  }

  Complex operator()(const std::vector<Complex>& values) const {
    Complex sum{};
    for (const auto& t : terms_) {
      Complex v = t.c;
      for (const auto& [s, e] : t.factors)
        for (int k = 0; k < e; ++k) v *= values[s];
      sum += v;
    }
    return sum;
  }

 private:
  struct Term {
    Complex c;
    std::vector<std::pair<std::size_t, int>> factors;
  };
  std::vector<Term> terms_;
};

// Symbol values for complexified real coordinates: z = x + iy and z̄ = x − iy
// continue analytically, so z̄ is not the conjugate of z off the real slice.
std::vector<Complex> continued_symbol_values(const ActionModel& model, const std::vector<Complex>& x) {
  std::vector<Complex> values(model.algebra->num_symbols());
  std::size_t k = 0;
  for (const auto& c : model.coordinates) {
    if (c.kind == CoordinateKind::complex) {
      values[model.algebra->symbol_index(c.name)] = x[k] + I * x[k + 1];
      values[model.algebra->symbol_index(conjugate_name(c.name))] = x[k] - I * x[k + 1];
      k += 2;
    } else {
      values[model.algebra->symbol_index(c.name)] = x[k++];
    }
  }
  return values;
}

Complex pairwise_sum(std::span<const Complex> v) {
  if (v.size() <= 8) {
    Complex s{};
    for (auto x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

// Runs f(block) for every block; block sums are combined in index order, so
// the result does not depend on the thread count.
template <class F>
Complex blocked_sum(std::size_t count, unsigned threads, F&& f) {
  const std::size_t blocks = (count + block_size - 1) / block_size;
  std::vector<Complex> sums(blocks);
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) sums[b] = f(b * block_size, std::min(count, (b + 1) * block_size));
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < blocks; b = next++)
          sums[b] = f(b * block_size, std::min(count, (b + 1) * block_size));
      });
    }
    for (auto& t : pool) t.join();
  }
  return pairwise_sum(sums);
}

struct Slot {
  bool angle = false;
  std::string symbol;  // for angles
};

std::vector<Slot> real_slots(const ActionModel& model) {
  std::vector<Slot> slots;
  for (const auto& c : model.coordinates) {
    if (c.kind == CoordinateKind::complex) {
      slots.push_back({});
      slots.push_back({});
    } else {
      slots.push_back({c.kind == CoordinateKind::angle, c.name});
    }
  }
  return slots;
}

}  // namespace

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1) throw InvalidArgument("gauss_hermite: order must be positive");
  const int n = order;
  // Golub–Welsch start, then Newton on the orthonormal recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);

  auto recurrence = [n](double x, double& pn, double& pn1, double& sum_sq) {
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25);
    sum_sq = cur * cur;
    for (int k = 0; k < n - 1; ++k) {
      const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
      sum_sq += cur * cur;
    }
    pn1 = cur;  // p_{n−1}
    pn = std::sqrt(2.0 / n) * x * cur - std::sqrt((n - 1.0) / n) * prev;
  };

  GaussHermiteRule rule;
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    double pn = 0.0;
    double pn1 = 0.0;
    double sum_sq = 0.0;
    for (int it = 0; it < 8; ++it) {
      recurrence(x, pn, pn1, sum_sq);
      const double dx = pn / (std::sqrt(2.0 * n) * pn1);
      x -= dx;
      if (std::abs(dx) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    recurrence(x, pn, pn1, sum_sq);
    rule.nodes.push_back(x);
    rule.weights.push_back(1.0 / sum_sq);  // Christoffel: 1/Σ_{k<n} p_k(x)²
  }
  return rule;
}

Complex symplectic_normalization(std::size_t real_dimension) {
  return std::pow(2.0 * std::numbers::pi * I, -static_cast<double>(real_dimension) / 2.0);
}

Complex integrate_gaussian(const Poly& p, const Poly& q, const ActionModel& model, const QuadratureSpec& spec) {
  if (spec.gh_order < 8) throw InvalidArgument("quadrature: Gauss-Hermite order must be at least 8");
  if (spec.jacobian == 0.0) throw InvalidArgument("quadrature: jacobian must be nonzero");
  if (q.total_degree() > 2) throw UnsupportedShape("quadrature: exponent is not quadratic");
  const auto slots = real_slots(model);
  for (const auto& s : slots)
    if (s.angle && !q.derivative(model.algebra->symbol_index(s.symbol)).is_zero())
      throw UnsupportedShape("quadrature: exponent depends on an angle");

  std::vector<std::size_t> gauss;
  std::vector<std::size_t> angles;
  for (std::size_t k = 0; k < slots.size(); ++k) (slots[k].angle ? angles : gauss).push_back(k);
  const std::size_t g = gauss.size();

  // q(x) = −xᵀAx + bᵀx + c on the Gaussian slots.
  auto q_at = [&](const std::vector<std::pair<std::size_t, double>>& entries) {
    std::vector<Complex> x(slots.size(), Complex{});
    for (const auto& [k, v] : entries) x[gauss[k]] = v;
    return q.evaluate(continued_symbol_values(model, x));
  };
  const Complex c = q_at({});
  Eigen::VectorXcd b(g);
  Eigen::MatrixXcd a(g, g);
  for (std::size_t i = 0; i < g; ++i) {
    const Complex plus = q_at({{i, 1.0}});
    const Complex minus = q_at({{i, -1.0}});
    b(i) = (plus - minus) / 2.0;
    a(i, i) = -(plus - b(i) - c);
  }
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < i; ++j)
      a(i, j) = a(j, i) = -(q_at({{i, 1.0}, {j, 1.0}}) - (-a(i, i) - a(j, j) + b(i) + b(j) + c)) / 2.0;

  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (g > 0 && a.imag().cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DivergenceError("integrand oscillates without Gaussian decay; use the regularized delta pairing");
  const Eigen::MatrixXd ar = a.real();
  const Eigen::LLT<Eigen::MatrixXd> llt(ar);
  if (g > 0 && llt.info() != Eigen::Success)
    throw DivergenceError("integrand has no Gaussian decay; use the regularized delta pairing");
  if (g > 0) {
    const Eigen::VectorXd diag = Eigen::MatrixXd(llt.matrixL()).diagonal();
    if (diag.minCoeff() <= 1e-12 * std::sqrt(scale))
      throw DivergenceError("integrand has no Gaussian decay in every direction");
  }

  // Complete the square: x = x0 + L^{−T} y with A = LLᵀ and 2A·x0 = b.
  Eigen::VectorXcd x0 = Eigen::VectorXcd::Zero(g);
  Eigen::MatrixXd l_inv_t = Eigen::MatrixXd::Identity(g, g);
  double det_l = 1.0;
  Complex shift_constant{};
  if (g > 0) {
    x0 = (llt.solve(b.real()) + I * llt.solve(b.imag())) / 2.0;
    shift_constant = (x0.transpose() * a * x0)(0, 0);
    const Eigen::MatrixXd l = llt.matrixL();
    l_inv_t = l.transpose().inverse();
    det_l = l.diagonal().prod();
  }

  const auto rule = gauss_hermite(spec.gh_order);
  const int angle_points = spec.angle_points > 0 ? spec.angle_points : 2 * spec.gh_order;
  const std::size_t n_gauss = rule.nodes.size();

  // Tensor points surviving the pruning threshold, as index tuples.
  std::vector<std::vector<std::uint16_t>> gauss_points;
  {
    std::vector<std::uint16_t> idx(g, 0);
    std::size_t total = 1;
    for (std::size_t k = 0; k < g; ++k) total *= n_gauss;
    for (std::size_t t = 0; t < total; ++t) {
      std::size_t rest = t;
      double w = 1.0;
      for (std::size_t k = 0; k < g; ++k) {
        idx[k] = static_cast<std::uint16_t>(rest % n_gauss);
        rest /= n_gauss;
        w *= rule.weights[idx[k]];
      }
      if (w >= spec.prune) gauss_points.push_back(idx);
    }
  }
  std::size_t angle_total = 1;
  for (std::size_t k = 0; k < angles.size(); ++k) angle_total *= static_cast<std::size_t>(angle_points);
  const double angle_weight = std::pow(2.0 * std::numbers::pi / angle_points, static_cast<double>(angles.size()));

  const CompiledPoly poly(p);
  const std::size_t count = gauss_points.size() * angle_total;
  const Complex sum = blocked_sum(count, spec.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<Complex> x(slots.size());
    Eigen::VectorXd y(g);
    Complex s{};
    for (std::size_t t = begin; t < end; ++t) {
      const auto& gp = gauss_points[t / angle_total];
      std::size_t rest = t % angle_total;
      double w = angle_weight;
      for (std::size_t k = 0; k < g; ++k) {
        y(k) = rule.nodes[gp[k]];
        w *= rule.weights[gp[k]];
      }
      const Eigen::VectorXcd xg = x0 + (l_inv_t * y).cast<Complex>();
      for (std::size_t k = 0; k < g; ++k) x[gauss[k]] = xg(k);
      for (std::size_t k = 0; k < angles.size(); ++k) {
        x[angles[k]] = 2.0 * std::numbers::pi * static_cast<double>(rest % angle_points) / angle_points;
        rest /= angle_points;
      }
      s += w * poly(continued_symbol_values(model, x));
    }
    return s;
  });
  return sum * std::exp(c + shift_constant) / det_l;
}

Complex integrate_top_form(const WeightedForm& form, const ActionModel& model, const QuadratureSpec& spec) {
  const auto& alg = *model.algebra;
  // Generators come in coordinate order, dz before dz̄; dz∧dz̄ = −2i dx∧dy.
  Complex factor{1.0};
  std::size_t g = 0;
  for (const auto& c : model.coordinates) {
    const bool ok = alg.generator_name(g) == "d" + c.name &&
                    (c.kind != CoordinateKind::complex || alg.generator_name(g + 1) == "d" + conjugate_name(c.name));
    if (!ok) throw UnsupportedShape("integrate_top_form: generators are not in coordinate order");
    if (c.kind == CoordinateKind::complex) {
      factor *= -2.0 * I;
      g += 2;
    } else {
      g += 1;
    }
  }
  if (g != alg.num_generators()) throw UnsupportedShape("integrate_top_form: extra generators");

  const Poly top = form.form.top_coefficient();
  if (top.is_zero()) return Complex{};
  Complex out = integrate_gaussian(top, form.exponent, model, spec) * factor * static_cast<double>(model.orientation) *
                spec.jacobian;
  if (spec.normalize) out *= symplectic_normalization(real_dimension(model));
  return out;
}

namespace {

WeightedForm index_integrand(const ActionModel& model, Complex theta, const PoleGuard& guard) {
  auto w = transverse_chern_symbolic(model, theta, guard);
  if (!model.tangent_weights.empty()) w.form *= ahat_squared(theta, model.tangent_weights);
  return w;
}

}  // namespace

Complex integrate_top_form(const ActionModel& model, Complex theta, const QuadratureSpec& spec,
                           const PoleGuard& guard) {
  return integrate_top_form(index_integrand(model, theta, guard), model, spec);
}

Complex assembled_top_coefficient(const ActionModel& model, Complex theta, std::span<const Complex> point,
                                  const PoleGuard& guard) {
  const Complex ahat = model.tangent_weights.empty() ? Complex{1.0} : ahat_squared(theta, model.tangent_weights);
  return ahat * transverse_chern(model, theta, point, guard).top_coefficient();
}

std::vector<Complex> theta_grid(int count, double contour_shift) {
  if (count < 1) throw InvalidArgument("theta_grid: need at least one sample");
  std::vector<Complex> out;
  for (int k = 0; k < count; ++k) out.emplace_back(2.0 * std::numbers::pi * (k + 0.5) / count, contour_shift);
  return out;
}

CharacterSeries fit_fourier(std::span<const double> thetas, std::span<const Complex> values, int window,
                            double* residual_rms) {
  if (thetas.size() != values.size()) throw DimensionMismatch("fit_fourier: sizes differ");
  if (window < 0) throw InvalidArgument("fit_fourier: negative window");
  const auto m = static_cast<Eigen::Index>(thetas.size());
  const Eigen::Index cols = 2 * window + 1;
  if (m < cols) throw InvalidArgument("fit_fourier: fewer samples than coefficients");
  Eigen::MatrixXcd basis(m, cols);
  Eigen::VectorXcd rhs(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    rhs(k) = values[static_cast<std::size_t>(k)];
    for (Eigen::Index j = 0; j < cols; ++j)
      basis(k, j) = std::exp(I * static_cast<double>(j - window) * thetas[static_cast<std::size_t>(k)]);
  }
  const Eigen::VectorXcd coeffs = basis.colPivHouseholderQr().solve(rhs);
  if (residual_rms) *residual_rms = (basis * coeffs - rhs).norm() / std::sqrt(static_cast<double>(m));
  CharacterSeries out(-window, window);
  for (Eigen::Index j = 0; j < cols; ++j) out.set(static_cast<int>(j) - window, coeffs(j));
  return out;
}

IndexReport index_character(const ActionModel& model, int theta_samples, const QuadratureSpec& spec,
                            const FourierSpec& fourier) {
  IndexReport report;
  report.model = model.name;
  report.contour_shift = fourier.contour_shift;
  report.gh_order = spec.gh_order;
  report.orientation = model.orientation;
  report.normalization = spec.normalize ? symplectic_normalization(real_dimension(model)) : Complex{1.0};
  report.thetas = theta_grid(theta_samples, fourier.contour_shift);
  for (const auto& theta : report.thetas) report.values.push_back(integrate_top_form(model, theta, spec));

  const int window = std::min(fourier.window, (theta_samples - 1) / 2);
  std::vector<double> phases;
  for (const auto& t : report.thetas) phases.push_back(t.real());
  const auto shifted = fit_fourier(phases, report.values, window, &report.fourier_residual_rms);
  report.fourier = CharacterSeries(-window, window);
  for (int n = -window; n <= window; ++n)
    report.fourier.set(n, shifted[n] * std::exp(static_cast<double>(n) * fourier.contour_shift));

  QuadratureSpec coarse = spec;
  coarse.gh_order = std::max(8, spec.gh_order - 8);
  report.quadrature_error = std::abs(report.values.front() - integrate_top_form(model, report.thetas.front(), coarse));

  // Closedness probes at fixed points of the real slice.
  const std::size_t dim = real_dimension(model);
  for (int probe = 0; probe < 3; ++probe) {
    std::vector<double> x(dim);
    for (std::size_t k = 0; k < dim; ++k) x[k] = 0.7 * std::sin(1.3 * static_cast<double>(k + 1) + 2.1 * probe);
    report.closedness_residual = std::max(
        report.closedness_residual, closedness_residual(model, report.thetas.front(), symbol_values(model, x)));
  }
  return report;
}

Complex extrapolate_to_zero(std::span<const double> x, std::span<const Complex> y) {
  if (x.size() != y.size() || x.empty()) throw InvalidArgument("extrapolate_to_zero: need matching samples");
  std::vector<Complex> p(y.begin(), y.end());
  for (std::size_t m = 1; m < p.size(); ++m)
    for (std::size_t i = 0; i + m < p.size(); ++i)
      p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
  return p[0];
}

DeltaPairingReport delta_pairing(const ActionModel& model, const std::function<Complex(double)>& test,
                                 std::span<const double> eps, const QuadratureSpec& spec) {
  if (eps.empty()) throw InvalidArgument("delta_pairing: no regulator values");
  for (double e : eps)
    if (!(e > 0.0)) throw InvalidArgument("delta_pairing: regulator must be positive");

  Poly regulator;
  for (std::size_t k : fiber_coordinates(model)) {
    const auto& c = model.coordinates[k];
    const Poly x = Poly::variable(model.algebra, c.name);
    regulator += c.kind == CoordinateKind::complex ? x * Poly::variable(model.algebra, conjugate_name(c.name)) : x * x;
  }
  if (regulator.is_zero()) throw UnsupportedModel("delta_pairing: model has no fiber coordinates");

  const auto rule = gauss_hermite(spec.gh_order);
  DeltaPairingReport report;
  report.test_at_zero = test(0.0);
  for (double e : eps) {
    const double scale = 2.0 * std::sqrt(e);
    std::vector<Complex> terms;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double y = rule.nodes[k];
      const Complex t = test(scale * y);
      if (t == Complex{}) continue;
      auto w = index_integrand(model, scale * y, PoleGuard{});
      w.exponent -= Complex{e} * regulator;
      terms.push_back(rule.weights[k] * std::exp(y * y) * scale * t * integrate_top_form(w, model, spec));
    }
    report.eps.push_back(e);
    report.values.push_back(pairwise_sum(terms) / (2.0 * std::numbers::pi));
  }
  report.extrapolated = extrapolate_to_zero(report.eps, report.values);
  return report;
}

}  // namespace eqchern
