#include "eqchern/supermatrix.hpp"

#include <cmath>
#include <map>

namespace eqchern {

SymbolicSuperMatrix exterior_derivative(const SymbolicSuperMatrix& a) {
  return a.map([](const SymbolicForm& f) { return exterior_derivative(f); });
}

SymbolicSuperMatrix interior_product(std::span<const Poly> components, const SymbolicSuperMatrix& a) {
  return a.map([&](const SymbolicForm& f) { return interior_product(components, f); });
}

NumericSuperMatrix evaluate(const SymbolicSuperMatrix& a, std::span<const Complex> values) {
  return a.map([&](const SymbolicForm& f) { return evaluate(f, values); });
}

SymbolicSuperMatrix to_symbolic(const NumericSuperMatrix& a) {
  return a.map([](const NumericForm& f) { return to_symbolic(f); });
}

double max_abs_coefficient(const NumericSuperMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, max_abs_coefficient(a(i, j)));
  return m;
}

double norm_inf_l1(const NumericSuperMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) row += l1_norm(a(i, j));
    m = std::max(m, row);
  }
  return m;
}

NumericSuperMatrix super_exp(const NumericSuperMatrix& a, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("super_exp: tolerance must be positive");
  const double norm = norm_inf_l1(a);
  int squarings = 0;
  while (std::ldexp(norm, -squarings) > 0.5) ++squarings;
  const NumericSuperMatrix scaled = a * Complex{std::ldexp(1.0, -squarings), 0.0};

  auto sum = NumericSuperMatrix::identity(a.algebra(), a.grading());
  auto term = sum;
  for (int k = 1; k <= 200; ++k) {
    term = term * scaled;
    term *= Complex{1.0 / k, 0.0};
    sum += term;
    if (term.is_zero() || norm_inf_l1(term) <= tol * norm_inf_l1(sum)) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// ---------------------------------------------------------------------------

namespace {

double spread(std::span<const Complex> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) s = std::max(s, std::abs(x[i] - x[j]));
  return s;
}

// exp[x_0..x_k] = e^c Σ_{j≥0} h_j(x − c) / (j + k)!, h_j the complete
// homogeneous symmetric polynomials. Converges fast for clustered nodes.
Complex clustered_divided_difference(std::span<const Complex> x) {
  const std::size_t k = x.size() - 1;
  Complex c{};
  for (auto v : x) c += v;
  c /= static_cast<double>(x.size());

  constexpr int max_terms = 64;
  std::vector<Complex> h(max_terms, Complex{});
  h[0] = 1.0;
  for (auto v : x) {
    const Complex y = v - c;
    for (int j = 1; j < max_terms; ++j) h[j] += y * h[j - 1];
  }
  double inv_factorial = 1.0;
  for (std::size_t m = 2; m <= k; ++m) inv_factorial /= static_cast<double>(m);
  Complex sum{};
  // Odd h_j can vanish for symmetric nodes, so no early exit on a zero term.
  for (int j = 0; j < max_terms && inv_factorial > 0.0; ++j) {
    sum += h[j] * inv_factorial;
    inv_factorial /= static_cast<double>(j + k + 1);
  }
  return std::exp(c) * sum;
}

}  // namespace

Complex exp_divided_difference(std::span<const Complex> nodes) {
  if (nodes.empty()) throw InvalidArgument("exp_divided_difference: no nodes");
  if (nodes.size() == 1) return std::exp(nodes[0]);
  // Below this spread the series is accurate; above it the recursion divides
  // by differences of at least this size.
  constexpr double cluster_radius = 1.0;
  if (spread(nodes) <= cluster_radius) return clustered_divided_difference(nodes);

  std::size_t a = 0;
  std::size_t b = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(nodes[i] - nodes[j]) > best) {
        best = std::abs(nodes[i] - nodes[j]);
        a = i;
        b = j;
      }
  std::vector<Complex> without_a;
  std::vector<Complex> without_b;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i != a) without_a.push_back(nodes[i]);
    if (i != b) without_b.push_back(nodes[i]);
  }
  return (exp_divided_difference(without_b) - exp_divided_difference(without_a)) / (nodes[a] - nodes[b]);
}

namespace {

Complex constant_value(const Complex& c) { return c; }

Complex constant_value(const Poly& p) {
  if (!p.is_constant()) throw UnsupportedShape("super_exp_duhamel: body entries must be constants");
  return p.constant_term();
}

template <class C>
struct DuhamelWalk {
  const SuperMatrix<C>& soul;
  const std::vector<Complex>& body;
  SuperMatrix<C>& result;
  std::map<std::vector<std::uint8_t>, Complex> memo;

  Complex divided_difference(const std::vector<std::uint8_t>& path) {
    auto key = path;
    std::sort(key.begin(), key.end());
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<Complex> nodes;
    nodes.reserve(key.size());
    for (auto i : key) nodes.push_back(body[i]);
    return memo[key] = exp_divided_difference(nodes);
  }

  void extend(std::size_t start, const Form<C>& accumulated, std::vector<std::uint8_t>& path) {
    const std::size_t current = path.back();
    for (std::size_t next = 0; next < soul.dim(); ++next) {
      const auto& step = soul(current, next);
      if (step.is_zero()) continue;
      Form<C> product = accumulated * step;
      if (product.is_zero()) continue;
      path.push_back(static_cast<std::uint8_t>(next));
      result(start, next) += product * divided_difference(path);
      extend(start, product, path);
      path.pop_back();
    }
  }
};

}  // namespace

template <class C>
SuperMatrix<C> super_exp_duhamel(const SuperMatrix<C>& a, const SuperMatrix<C>& degree0_part, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("super_exp_duhamel: tolerance must be positive");
  if (a.grading() != degree0_part.grading()) throw DimensionMismatch("super_exp_duhamel: grading mismatch");
  const std::size_t n = a.dim();
  if (n > 255) throw UnsupportedShape("super_exp_duhamel: dimension too large");

  std::vector<Complex> body(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& e = degree0_part(i, j);
      if (e.max_degree() > 0) throw UnsupportedShape("super_exp_duhamel: body has positive form degree");
      if (i != j && !e.is_zero()) throw UnsupportedShape("super_exp_duhamel: body is not diagonal");
    }
    body[i] = constant_value(degree0_part(i, i).scalar_part());
  }
  if (!(a.degree_zero_part() == degree0_part))
    throw UnsupportedShape("super_exp_duhamel: degree0_part is not the degree-0 block of the argument");

  const SuperMatrix<C> soul = a.positive_part();
  SuperMatrix<C> result(Algebra::unify(a.algebra(), degree0_part.algebra()), a.grading());
  DuhamelWalk<C> walk{soul, body, result, {}};
  for (std::size_t p = 0; p < n; ++p) {
    const auto one = Form<C>::scalar(result.algebra(), C{1.0});
    result(p, p) += one * std::exp(body[p]);
    std::vector<std::uint8_t> path{static_cast<std::uint8_t>(p)};
    walk.extend(p, one, path);
  }
  return result;
}

template SuperMatrix<Complex> super_exp_duhamel(const SuperMatrix<Complex>&, const SuperMatrix<Complex>&, double);
template SuperMatrix<Poly> super_exp_duhamel(const SuperMatrix<Poly>&, const SuperMatrix<Poly>&, double);

}  // namespace eqchern
