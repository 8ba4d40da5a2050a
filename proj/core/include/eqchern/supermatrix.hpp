#pragma once

// Z2-graded square matrices with form-valued entries.
//
// Products are plain matrix products whose entry products are wedges; the
// grading is metadata consumed only by the supertrace and the parity audit.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eqchern/exterior.hpp"

namespace eqchern {

enum class Parity : std::uint8_t { even = 0, odd = 1 };
using Grading = std::vector<Parity>;

inline int sign_of(Parity p) { return p == Parity::even ? 1 : -1; }
inline int bit_of(Parity p) { return static_cast<int>(p); }

template <class C>
class SuperMatrix {
 public:
  SuperMatrix() = default;
  SuperMatrix(AlgebraPtr algebra, Grading grading)
      : algebra_(std::move(algebra)),
        grading_(std::move(grading)),
        entries_(grading_.size() * grading_.size(), Form<C>(algebra_)) {}

  static SuperMatrix identity(const AlgebraPtr& algebra, const Grading& grading) {
    SuperMatrix m(algebra, grading);
    for (std::size_t i = 0; i < m.dim(); ++i) m(i, i) = Form<C>::scalar(algebra, C{1.0});
    return m;
  }

  static SuperMatrix diagonal(const AlgebraPtr& algebra, const Grading& grading, std::span<const C> values) {
    if (values.size() != grading.size()) throw DimensionMismatch("diagonal: wrong number of values");
    SuperMatrix m(algebra, grading);
    for (std::size_t i = 0; i < m.dim(); ++i) m(i, i) = Form<C>::scalar(algebra, values[i]);
    return m;
  }

  std::size_t dim() const { return grading_.size(); }
  const Grading& grading() const { return grading_; }
  const AlgebraPtr& algebra() const { return algebra_; }

  Form<C>& operator()(std::size_t i, std::size_t j) { return entries_.at(i * dim() + j); }
  const Form<C>& operator()(std::size_t i, std::size_t j) const { return entries_.at(i * dim() + j); }

  SuperMatrix& operator+=(const SuperMatrix& other) {
    check_compatible(other);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
    return *this;
  }

  SuperMatrix& operator-=(const SuperMatrix& other) {
    check_compatible(other);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
    return *this;
  }

  SuperMatrix& operator*=(Complex c) {
    for (auto& e : entries_) e *= c;
    return *this;
  }

  friend SuperMatrix operator+(SuperMatrix a, const SuperMatrix& b) { return a += b; }
  friend SuperMatrix operator-(SuperMatrix a, const SuperMatrix& b) { return a -= b; }
  friend SuperMatrix operator*(SuperMatrix a, Complex c) { return a *= c; }
  friend SuperMatrix operator*(Complex c, SuperMatrix a) { return a *= c; }
  friend bool operator==(const SuperMatrix& a, const SuperMatrix& b) {
    return a.grading_ == b.grading_ && a.entries_ == b.entries_;
  }

  /// Entry (i,k) = Σ_j a(i,j) ∧ b(j,k).
  friend SuperMatrix operator*(const SuperMatrix& a, const SuperMatrix& b) {
    a.check_compatible(b);
    SuperMatrix out(Algebra::unify(a.algebra_, b.algebra_), a.grading_);
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        std::vector<typename Form<C>::Term> products;
        for (std::size_t j = 0; j < n; ++j) {
          const auto& x = a(i, j);
          const auto& y = b(j, k);
          if (x.is_zero() || y.is_zero()) continue;
          for (const auto& [mx, cx] : x.terms()) {
            for (const auto& [my, cy] : y.terms()) {
              if ((mx & my) != 0) continue;
              C v = cx * cy;
              if (merge_sign(mx, my) < 0) v = -v;
              products.emplace_back(mx | my, std::move(v));
            }
          }
        }
        out(i, k).collect(std::move(products));
      }
    }
    return out;
  }

  /// Form-degree-0 component of every entry.
  SuperMatrix degree_zero_part() const {
    SuperMatrix out(algebra_, grading_);
    for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = entries_[k].part(0);
    return out;
  }

  SuperMatrix positive_part() const {
    SuperMatrix out(algebra_, grading_);
    for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = entries_[k].positive_part();
    return out;
  }

  bool is_zero() const {
    for (const auto& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }

  template <class F>
  auto map(F&& f) const {
    using D = decltype(f(std::declval<const Form<C>&>()));
    AlgebraPtr alg = algebra_;
    std::vector<D> mapped;
    mapped.reserve(entries_.size());
    for (const auto& e : entries_) {
      mapped.push_back(f(e));
      alg = Algebra::unify(alg, mapped.back().algebra());
    }
    using Coefficient = typename decltype(mapped)::value_type::Term::second_type;
    SuperMatrix<Coefficient> out(alg, grading_);
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) out(i, j) = mapped[i * dim() + j];
    return out;
  }

 private:
  void check_compatible(const SuperMatrix& other) const {
    if (grading_ != other.grading_) throw DimensionMismatch("supermatrix dimension or grading mismatch");
  }

  AlgebraPtr algebra_;
  Grading grading_;
  std::vector<Form<C>> entries_;
};

using NumericSuperMatrix = SuperMatrix<Complex>;
using SymbolicSuperMatrix = SuperMatrix<Poly>;

/// Σ_i (±1)^{parity(i)} a(i,i).
template <class C>
Form<C> supertrace(const SuperMatrix<C>& a) {
  Form<C> out(a.algebra());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a.grading()[i] == Parity::even) {
      out += a(i, i);
    } else {
      out -= a(i, i);
    }
  }
  return out;
}

/// Parity audit: the total parity (block parity + form degree) shared by all
/// nonzero entries, or nullopt when the matrix is not homogeneous. The zero
/// matrix reports even.
template <class C>
std::optional<Parity> total_parity(const SuperMatrix<C>& a) {
  std::optional<int> p;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const auto& e = a(i, j);
      if (e.is_zero()) continue;
      auto d = e.degree_parity();
      if (!d) return std::nullopt;
      const int q = (*d + bit_of(a.grading()[i]) + bit_of(a.grading()[j])) & 1;
      if (p && *p != q) return std::nullopt;
      p = q;
    }
  }
  return p.value_or(0) == 0 ? Parity::even : Parity::odd;
}

/// [a,b] = ab − (−1)^{|a||b|} ba for homogeneous a, b.
template <class C>
SuperMatrix<C> graded_commutator(const SuperMatrix<C>& a, const SuperMatrix<C>& b) {
  auto pa = total_parity(a);
  auto pb = total_parity(b);
  if (!pa || !pb) throw UnsupportedShape("graded_commutator: operands must be homogeneous");
  const bool both_odd = *pa == Parity::odd && *pb == Parity::odd;
  return both_odd ? a * b + b * a : a * b - b * a;
}

SymbolicSuperMatrix exterior_derivative(const SymbolicSuperMatrix& a);
SymbolicSuperMatrix interior_product(std::span<const Poly> components, const SymbolicSuperMatrix& a);
NumericSuperMatrix evaluate(const SymbolicSuperMatrix& a, std::span<const Complex> values);
SymbolicSuperMatrix to_symbolic(const NumericSuperMatrix& a);

/// Largest |coefficient| over all entries.
double max_abs_coefficient(const NumericSuperMatrix& a);

/// Matrix ∞-norm with the ℓ1 coefficient norm on entries (submultiplicative).
double norm_inf_l1(const NumericSuperMatrix& a);

/// exp(a) by scaling and squaring with a truncated Taylor series in the
/// finite-dimensional algebra (Grassmann ⊗ matrices).
NumericSuperMatrix super_exp(const NumericSuperMatrix& a, double tol);

/// exp(a) by the Duhamel series around the diagonal body `degree0_part`:
///   exp(D + N) = Σ_k ∫_{Δ_k} e^{t_0 D} N e^{t_1 D} ⋯ N e^{t_k D} dt,
/// which terminates once the accumulated form degree exceeds the generator
/// count. Simplex integrals are divided differences of exp.
template <class C>
SuperMatrix<C> super_exp_duhamel(const SuperMatrix<C>& a, const SuperMatrix<C>& degree0_part, double tol);

/// exp[x_0, …, x_k], handling (near-)confluent nodes.
Complex exp_divided_difference(std::span<const Complex> nodes);

extern template SuperMatrix<Complex> super_exp_duhamel(const SuperMatrix<Complex>&, const SuperMatrix<Complex>&,
                                                        double);
extern template SuperMatrix<Poly> super_exp_duhamel(const SuperMatrix<Poly>&, const SuperMatrix<Poly>&, double);

}  // namespace eqchern
