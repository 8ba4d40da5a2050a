#include "eqchern/characters.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace eqchern {

namespace {

constexpr Complex I{0.0, 1.0};

}  // namespace

CharacterSeries::CharacterSeries(int n_min, int n_max) : n_min_(n_min), n_max_(n_max) {
  if (n_min > n_max) throw InvalidArgument("character series: empty window");
  c_.assign(static_cast<std::size_t>(n_max - n_min + 1), Complex{});
}

CharacterSeries CharacterSeries::monomial(int n, Complex c, int n_min, int n_max) {
  CharacterSeries s(n_min, n_max);
  if (s.in_window(n)) s.set(n, c);
  return s;
}

void CharacterSeries::set(int n, Complex c) {
  if (!in_window(n)) throw InvalidArgument("character series: index outside window");
  c_[static_cast<std::size_t>(n - n_min_)] = c;
}

void CharacterSeries::add(int n, Complex c) {
  if (!in_window(n)) throw InvalidArgument("character series: index outside window");
  c_[static_cast<std::size_t>(n - n_min_)] += c;
}

CharacterSeries CharacterSeries::window(int n_min, int n_max) const {
  CharacterSeries out(n_min, n_max);
  for (int n = n_min; n <= n_max; ++n) out.set(n, (*this)[n]);
  return out;
}

namespace {

std::pair<int, int> intersect(const CharacterSeries& a, const CharacterSeries& b) {
  const int lo = std::max(a.n_min(), b.n_min());
  const int hi = std::min(a.n_max(), b.n_max());
  if (lo > hi) throw InvalidArgument("character series: windows do not overlap");
  return {lo, hi};
}

}  // namespace

CharacterSeries operator+(const CharacterSeries& a, const CharacterSeries& b) {
  const auto [lo, hi] = intersect(a, b);
  CharacterSeries out(lo, hi);
  for (int n = lo; n <= hi; ++n) out.set(n, a[n] + b[n]);
  return out;
}

CharacterSeries operator-(const CharacterSeries& a, const CharacterSeries& b) { return a + Complex{-1.0} * b; }

CharacterSeries operator*(Complex s, const CharacterSeries& a) {
  CharacterSeries out = a;
  for (auto& c : out.c_) c *= s;
  return out;
}

CharacterSeries operator*(const CharacterSeries& a, const CharacterSeries& b) {
  const auto [lo, hi] = intersect(a, b);
  CharacterSeries out(lo, hi);
  for (int i = a.n_min(); i <= a.n_max(); ++i) {
    const Complex x = a[i];
    if (x == Complex{}) continue;
    for (int j = b.n_min(); j <= b.n_max(); ++j) {
      const int n = i + j;
      if (n < lo || n > hi) continue;
      const Complex y = b[j];
      if (y != Complex{}) out.add(n, x * y);
    }
  }
  return out;
}

Complex CharacterSeries::evaluate(Complex theta) const {
  Complex sum{};
  for (int n = n_min_; n <= n_max_; ++n) {
    const Complex c = (*this)[n];
    if (c != Complex{}) sum += c * std::exp(I * static_cast<double>(n) * theta);
  }
  return sum;
}

double CharacterSeries::integrality_defect() const {
  double d = 0.0;
  for (const auto& c : c_) d = std::max(d, std::hypot(c.real() - std::round(c.real()), c.imag()));
  return d;
}

std::string CharacterSeries::to_csv() const {
  std::string out = "n,re,im\n";
  char line[96];
  for (int n = n_min_; n <= n_max_; ++n) {
    const Complex c = (*this)[n];
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", n, c.real(), c.imag());
    out += line;
  }
  return out;
}

CharacterSeries CharacterSeries::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "n,re,im") throw ParseError("expected header 'n,re,im'", 1, 1);
  std::vector<std::pair<int, Complex>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    int n = 0;
    double re = 0.0;
    double im = 0.0;
    char extra = 0;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf%c", &n, &re, &im, &extra) != 3)
      throw ParseError("malformed row '" + line + "'", line_no, 1);
    if (!rows.empty() && n != rows.back().first + 1) throw ParseError("rows must be consecutive", line_no, 1);
    rows.emplace_back(n, Complex{re, im});
  }
  if (rows.empty()) throw ParseError("no coefficients", line_no, 1);
  CharacterSeries s(rows.front().first, rows.back().first);
  for (const auto& [n, c] : rows) s.set(n, c);
  return s;
}

CharacterSeries geometric_expand(Complex c, int m, Direction direction, int n_min, int n_max) {
  if (m == 0) throw InvalidArgument("geometric_expand: weight must be nonzero");
  if (c == Complex{}) throw InvalidArgument("geometric_expand: coefficient must be nonzero");
  CharacterSeries out(n_min, n_max);
  const int step = direction == Direction::positive ? m : -m;
  const Complex ratio = direction == Direction::positive ? c : 1.0 / c;
  Complex coefficient = direction == Direction::positive ? Complex{1.0} : -1.0 / c;
  int n = direction == Direction::positive ? 0 : -m;
  // The exponents move monotonically away from the start, so stop once they leave the window.
  while (step > 0 ? n <= n_max : n >= n_min) {
    if (out.in_window(n)) out.add(n, coefficient);
    coefficient *= ratio;
    n += step;
  }
  return out;
}

Complex ahat_squared(Complex theta, std::span<const int> weights) {
  Complex out{1.0};
  for (int w : weights) {
    const Complex x = I * static_cast<double>(w) * theta;
    const Complex denom = 1.0 - std::exp(x);
    if (std::abs(denom) < 1e-12) throw PoleError("ahat_squared: θ is a pole");
    out *= x * x * std::exp(x) / (denom * denom);
  }
  return out;
}

Complex ahat_squared_det(Complex theta, std::span<const int> weights) {
  auto f = [](Complex x) {
    if (std::abs(x) < 1e-8) return Complex{1.0} - x * x / 24.0;
    return (x / 2.0) / std::sinh(x / 2.0);
  };
  Complex out{1.0};
  for (int w : weights) {
    const Complex x = I * static_cast<double>(w) * theta;
    if (std::abs(1.0 - std::exp(x)) < 1e-12) throw PoleError("ahat_squared_det: θ is a pole");
    out *= f(x) * f(-x);
  }
  return out;
}

AhatSeries ahat_squared_series(std::span<const int> weights, Direction direction, int n_min, int n_max) {
  AhatSeries out{CharacterSeries::monomial(0, 1.0, n_min, n_max), Complex{1.0}, 0};
  for (int w : weights) {
    const auto g = geometric_expand(1.0, w, direction, n_min, n_max);
    out.series = out.series * CharacterSeries::monomial(w, 1.0, n_min, n_max) * g * g;
    out.prefactor *= (I * static_cast<double>(w)) * (I * static_cast<double>(w));
    out.theta_power += 2;
  }
  return out;
}

CharacterSeries localized_index(const CharacterSeries& numerator, std::span<const int> normal_weights,
                                Direction direction) {
  CharacterSeries out = numerator;
  for (int w : normal_weights)
    out = out * geometric_expand(1.0, w, direction, numerator.n_min(), numerator.n_max());
  return out;
}

}  // namespace eqchern
