#pragma once

// Graded-commutative exterior algebra over named 1-form generators.
//
// Coefficients come in two flavours: `Poly`, sparse polynomials in the
// declared coordinate symbols (conjugate coordinates are independent
// symbols), and `Complex`, the evaluation target. Forms are stored as sorted
// (generator-subset mask, coefficient) lists with no zero coefficients, so
// equal forms have equal storage.

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eqchern/errors.hpp"

namespace eqchern {

using Complex = std::complex<double>;
using Mask = std::uint32_t;

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Coordinate symbols, their conjugates and the 1-form generators, all in a
/// fixed canonical order. Identity is by pointer: two algebras created from
/// the same names are still different algebras.
class Algebra {
 public:
  struct Symbol {
    std::string name;
    std::string differential;  // generator name, empty when the symbol has none
    std::string conjugate;     // empty for real symbols
  };

  static constexpr std::size_t max_generators = 16;

  static AlgebraPtr create(std::vector<Symbol> symbols,
                           std::vector<std::string> extra_generators = {});

  std::size_t num_symbols() const { return symbols_.size(); }
  std::size_t num_generators() const { return generators_.size(); }
  Mask top_mask() const { return num_generators() == 0 ? 0 : (Mask{1} << num_generators()) - 1; }

  const std::string& symbol_name(std::size_t i) const { return symbols_.at(i).name; }
  const std::string& generator_name(std::size_t g) const { return generators_.at(g); }

  std::optional<std::size_t> find_symbol(std::string_view name) const;
  std::optional<std::size_t> find_generator(std::string_view name) const;
  std::size_t symbol_index(std::string_view name) const;
  std::size_t generator_index(std::string_view name) const;

  std::optional<std::size_t> differential_of(std::size_t symbol) const { return differential_.at(symbol); }
  std::optional<std::size_t> symbol_of_generator(std::size_t g) const { return owner_.at(g); }
  std::size_t conjugate_of(std::size_t symbol) const { return conjugate_.at(symbol); }

  /// Tie-break for operands that may be unbound (null) scalars.
  static AlgebraPtr unify(const AlgebraPtr& a, const AlgebraPtr& b);

 private:
  Algebra() = default;

  std::vector<Symbol> symbols_;
  std::vector<std::string> generators_;
  std::vector<std::optional<std::size_t>> differential_;
  std::vector<std::optional<std::size_t>> owner_;
  std::vector<std::size_t> conjugate_;
};

/// Sparse polynomial with complex coefficients in the symbols of an algebra.
/// A default-constructed or constant polynomial may be unbound (no algebra);
/// it adopts the algebra of whatever it is combined with.
class Poly {
 public:
  // Exponents by symbol index with trailing zeros trimmed; {} is the unit monomial.
  using Monomial = std::vector<std::uint16_t>;

  Poly() = default;
  Poly(Complex c);  // NOLINT(google-explicit-constructor): scalars promote freely
  Poly(double c) : Poly(Complex{c, 0.0}) {}

  static Poly variable(const AlgebraPtr& algebra, std::size_t symbol);
  static Poly variable(const AlgebraPtr& algebra, std::string_view name);

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::map<Monomial, Complex>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Complex constant_term() const;
  int total_degree() const;

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Poly& other);
  Poly& operator*=(Complex c);
  Poly operator-() const;

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, Complex c) { return a *= c; }
  friend Poly operator*(Complex c, Poly a) { return a *= c; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  Poly derivative(std::size_t symbol) const;
  Complex evaluate(std::span<const Complex> values) const;
  Poly conjugate() const;
  /// Replace symbol k by images[k]; the result lives over `target`.
  Poly substitute(std::span<const Poly> images, const AlgebraPtr& target) const;
  /// Drop terms with |c| <= tol.
  Poly chop(double tol) const;

  std::string to_string() const;

 private:
  void bind(const AlgebraPtr& other);
  void add_term(const Monomial& m, Complex c);

  AlgebraPtr algebra_;
  std::map<Monomial, Complex> terms_;
};

inline bool is_zero(const Complex& c) { return c == Complex{}; }
inline bool is_zero(const Poly& p) { return p.is_zero(); }

inline AlgebraPtr algebra_of(const Complex&) { return nullptr; }
inline const AlgebraPtr& algebra_of(const Poly& p) { return p.algebra(); }

std::string format_complex(Complex c);

/// Sign of e_a ∧ e_b relative to e_{a|b}; caller guarantees a & b == 0.
inline int merge_sign(Mask a, Mask b) {
  int swaps = 0;
  for (Mask rest = b; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    swaps += std::popcount(j + 1 >= 32 ? Mask{0} : (a >> (j + 1)));
  }
  return (swaps & 1) != 0 ? -1 : 1;
}

template <class C>
class Form {
 public:
  using Term = std::pair<Mask, C>;

  Form() = default;
  explicit Form(AlgebraPtr algebra) : algebra_(std::move(algebra)) {}

  static Form scalar(AlgebraPtr algebra, C value) {
    Form f(std::move(algebra));
    if (!eqchern::is_zero(value)) f.terms_.emplace_back(Mask{0}, std::move(value));
    f.adopt_coefficient_algebra();
    return f;
  }

  static Form generator(const AlgebraPtr& algebra, std::size_t g) {
    if (!algebra || g >= algebra->num_generators()) throw InvalidArgument("generator index out of range");
    Form f(algebra);
    f.terms_.emplace_back(Mask{1} << g, C{1.0});
    return f;
  }

  static Form generator(const AlgebraPtr& algebra, std::string_view name) {
    return generator(algebra, algebra->generator_index(name));
  }

  /// Single term c·e_mask.
  static Form monomial(const AlgebraPtr& algebra, Mask mask, C value) {
    Form f(algebra);
    if (!eqchern::is_zero(value)) f.terms_.emplace_back(mask, std::move(value));
    f.adopt_coefficient_algebra();
    return f;
  }

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t num_generators() const { return algebra_ ? algebra_->num_generators() : 0; }

  bool is_zero() const { return terms_.empty(); }

  C coefficient(Mask mask) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), mask,
                               [](const Term& t, Mask m) { return t.first < m; });
    return (it != terms_.end() && it->first == mask) ? it->second : C{};
  }

  C top_coefficient() const { return coefficient(algebra_ ? algebra_->top_mask() : Mask{0}); }
  C scalar_part() const { return coefficient(0); }

  /// Homogeneous component of the given form degree.
  Form part(int degree) const {
    Form out(algebra_);
    for (const auto& t : terms_)
      if (std::popcount(t.first) == degree) out.terms_.push_back(t);
    return out;
  }

  /// Everything of positive form degree.
  Form positive_part() const {
    Form out(algebra_);
    for (const auto& t : terms_)
      if (t.first != 0) out.terms_.push_back(t);
    return out;
  }

  int max_degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, std::popcount(t.first));
    return d;
  }

  /// 0 or 1 when every term has form degree of that parity; nullopt if mixed or zero.
  std::optional<int> degree_parity() const {
    std::optional<int> p;
    for (const auto& t : terms_) {
      const int q = std::popcount(t.first) & 1;
      if (p && *p != q) return std::nullopt;
      p = q;
    }
    return p;
  }

  Form& operator+=(const Form& other) { return merge(other, 1.0); }
  Form& operator-=(const Form& other) { return merge(other, -1.0); }

  Form& operator*=(Complex c) {
    if (c == Complex{}) {
      terms_.clear();
      return *this;
    }
    for (auto& t : terms_) t.second *= c;
    prune();
    return *this;
  }

  /// Multiply every coefficient by a coefficient-ring element.
  Form times(const C& c) const {
    Form out(Algebra::unify(algebra_, algebra_of(c)));
    for (const auto& t : terms_) {
      C v = t.second * c;
      if (!eqchern::is_zero(v)) out.terms_.emplace_back(t.first, std::move(v));
    }
    return out;
  }

  Form operator-() const {
    Form out = *this;
    for (auto& t : out.terms_) t.second = -t.second;
    return out;
  }

  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Form a, Complex c) { return a *= c; }
  friend Form operator*(Complex c, Form a) { return a *= c; }
  friend bool operator==(const Form& a, const Form& b) { return a.terms_ == b.terms_; }

  /// Exterior product.
  friend Form operator*(const Form& a, const Form& b) { return wedge(a, b); }

  friend Form wedge(const Form& a, const Form& b) {
    Form out(Algebra::unify(a.algebra_, b.algebra_));
    if (a.terms_.empty() || b.terms_.empty()) return out;
    std::vector<Term> products;
    products.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        if ((ma & mb) != 0) continue;
        C v = ca * cb;
        if (merge_sign(ma, mb) < 0) v = -v;
        products.emplace_back(ma | mb, std::move(v));
      }
    }
    out.collect(std::move(products));
    return out;
  }

  /// Internal: replace the terms by the sum of an unsorted term list.
  void collect(std::vector<Term> products) {
    std::stable_sort(products.begin(), products.end(),
                     [](const Term& x, const Term& y) { return x.first < y.first; });
    terms_.clear();
    for (auto& p : products) {
      if (!terms_.empty() && terms_.back().first == p.first) {
        terms_.back().second += p.second;
      } else {
        terms_.push_back(std::move(p));
      }
    }
    prune();
    adopt_coefficient_algebra();
  }

  std::string to_string() const;

 private:
  Form& merge(const Form& other, double sign) {
    algebra_ = Algebra::unify(algebra_, other.algebra_);
    std::vector<Term> out;
    out.reserve(terms_.size() + other.terms_.size());
    auto i = terms_.begin();
    auto j = other.terms_.begin();
    while (i != terms_.end() || j != other.terms_.end()) {
      if (j == other.terms_.end() || (i != terms_.end() && i->first < j->first)) {
        out.push_back(std::move(*i++));
      } else if (i == terms_.end() || j->first < i->first) {
        out.emplace_back(j->first, sign > 0 ? j->second : -j->second);
        ++j;
      } else {
        C v = sign > 0 ? i->second + j->second : i->second - j->second;
        if (!eqchern::is_zero(v)) out.emplace_back(i->first, std::move(v));
        ++i;
        ++j;
      }
    }
    terms_ = std::move(out);
    return *this;
  }

  void prune() {
    std::erase_if(terms_, [](const Term& t) { return eqchern::is_zero(t.second); });
  }

  void adopt_coefficient_algebra() {
    for (const auto& t : terms_) algebra_ = Algebra::unify(algebra_, algebra_of(t.second));
  }

  AlgebraPtr algebra_;
  std::vector<Term> terms_;
};

using NumericForm = Form<Complex>;
using SymbolicForm = Form<Poly>;

/// Contraction with a vector whose components are given on the basis dual
/// to the generators (components.size() == number of generators).
template <class C>
Form<C> interior_product(std::span<const C> components, const Form<C>& a) {
  const std::size_t n = a.num_generators();
  if (components.size() != n) throw DimensionMismatch("interior_product: vector has wrong length");
  std::vector<typename Form<C>::Term> products;
  for (const auto& [mask, c] : a.terms()) {
    int position = 0;
    for (Mask rest = mask; rest != 0; rest &= rest - 1, ++position) {
      const int g = std::countr_zero(rest);
      if (is_zero(components[g])) continue;
      C v = c * components[g];
      if ((position & 1) != 0) v = -v;
      products.emplace_back(mask & ~(Mask{1} << g), std::move(v));
    }
  }
  Form<C> out(a.algebra());
  out.collect(std::move(products));
  return out;
}

/// d on forms with polynomial coefficients.
SymbolicForm exterior_derivative(const SymbolicForm& a);

/// Substitute numeric values (indexed by symbol) into every coefficient.
NumericForm evaluate(const SymbolicForm& a, std::span<const Complex> values);

/// Same, with values looked up by coordinate name; a symbol that appears in
/// `a` without a value raises EvaluationError naming it.
NumericForm evaluate(const SymbolicForm& a, const std::map<std::string, Complex>& point);

/// Promote numeric coefficients to constant polynomials.
SymbolicForm to_symbolic(const NumericForm& a);

/// Largest |coefficient| over all terms.
double max_abs_coefficient(const NumericForm& a);
double l1_norm(const NumericForm& a);

/// Change of coordinates: coefficients are substituted and every generator
/// d(x_k) is replaced by d(images[k]) over the target algebra.
SymbolicForm pullback(const SymbolicForm& a, std::span<const Poly> images, const AlgebraPtr& target);

extern template class Form<Complex>;
extern template class Form<Poly>;

}  // namespace eqchern
