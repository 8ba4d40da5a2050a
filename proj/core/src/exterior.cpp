#include "eqchern/exterior.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace eqchern {

AlgebraPtr Algebra::create(std::vector<Symbol> symbols, std::vector<std::string> extra_generators) {
  std::shared_ptr<Algebra> a(new Algebra());
  a->symbols_ = std::move(symbols);
  const std::size_t n = a->symbols_.size();
  a->differential_.assign(n, std::nullopt);
  a->conjugate_.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = a->symbols_[i];
    if (s.name.empty()) throw InvalidArgument("empty coordinate symbol name");
    for (std::size_t j = 0; j < i; ++j)
      if (a->symbols_[j].name == s.name) throw InvalidArgument("duplicate coordinate symbol '" + s.name + "'");
    if (!s.differential.empty()) {
      a->differential_[i] = a->generators_.size();
      a->generators_.push_back(s.differential);
      a->owner_.emplace_back(i);
    }
  }
  for (auto& g : extra_generators) {
    a->generators_.push_back(std::move(g));
    a->owner_.emplace_back(std::nullopt);
  }
  for (std::size_t g = 0; g < a->generators_.size(); ++g)
    for (std::size_t h = 0; h < g; ++h)
      if (a->generators_[g] == a->generators_[h])
        throw InvalidArgument("duplicate generator '" + a->generators_[g] + "'");
  if (a->generators_.size() > max_generators) throw InvalidArgument("too many generators");

  for (std::size_t i = 0; i < n; ++i) {
    const auto& conj = a->symbols_[i].conjugate;
    if (conj.empty()) {
      a->conjugate_[i] = i;
      continue;
    }
    auto j = a->find_symbol(conj);
    if (!j) throw InvalidArgument("conjugate '" + conj + "' of '" + a->symbols_[i].name + "' is not declared");
    a->conjugate_[i] = *j;
  }
  return a;
}

std::optional<std::size_t> Algebra::find_symbol(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Algebra::find_generator(std::string_view name) const {
  for (std::size_t g = 0; g < generators_.size(); ++g)
    if (generators_[g] == name) return g;
  return std::nullopt;
}

std::size_t Algebra::symbol_index(std::string_view name) const {
  if (auto i = find_symbol(name)) return *i;
  throw InvalidArgument("unknown coordinate symbol '" + std::string(name) + "'");
}

std::size_t Algebra::generator_index(std::string_view name) const {
  if (auto g = find_generator(name)) return *g;
  throw InvalidArgument("unknown generator '" + std::string(name) + "'");
}

AlgebraPtr Algebra::unify(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  throw AlgebraMismatch("operands belong to different exterior algebras");
}

// ---------------------------------------------------------------------------

namespace {

Poly::Monomial trimmed(Poly::Monomial m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
  return m;
}

}  // namespace

Poly::Poly(Complex c) {
  if (c != Complex{}) terms_.emplace(Monomial{}, c);
}

Poly Poly::variable(const AlgebraPtr& algebra, std::size_t symbol) {
  if (!algebra || symbol >= algebra->num_symbols()) throw InvalidArgument("symbol index out of range");
  Poly p;
  p.algebra_ = algebra;
  Monomial m(symbol + 1, 0);
  m[symbol] = 1;
  p.terms_.emplace(std::move(m), Complex{1.0, 0.0});
  return p;
}

Poly Poly::variable(const AlgebraPtr& algebra, std::string_view name) {
  return variable(algebra, algebra->symbol_index(name));
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Complex Poly::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Complex{} : it->second;
}

int Poly::total_degree() const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [m, c] : terms_) {
    int k = 0;
    for (auto e : m) k += e;
    d = std::max(d, k);
  }
  return d;
}

void Poly::bind(const AlgebraPtr& other) { algebra_ = Algebra::unify(algebra_, other); }

void Poly::add_term(const Monomial& m, Complex c) {
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& other) {
  bind(other.algebra_);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  bind(other.algebra_);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  out.algebra_ = Algebra::unify(a.algebra_, b.algebra_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Poly::Monomial m(std::max(ma.size(), mb.size()), 0);
      for (std::size_t k = 0; k < ma.size(); ++k) m[k] += ma[k];
      for (std::size_t k = 0; k < mb.size(); ++k) m[k] += mb[k];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

Poly& Poly::operator*=(const Poly& other) { return *this = *this * other; }

Poly& Poly::operator*=(Complex c) {
  if (c == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= c;
    it = (it->second == Complex{}) ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Poly Poly::derivative(std::size_t symbol) const {
  Poly out;
  out.algebra_ = algebra_;
  for (const auto& [m, c] : terms_) {
    if (symbol >= m.size() || m[symbol] == 0) continue;
    Monomial d = m;
    const double e = d[symbol];
    d[symbol] -= 1;
    out.add_term(trimmed(std::move(d)), c * e);
  }
  return out;
}

Complex Poly::evaluate(std::span<const Complex> values) const {
  Complex sum{};
  for (const auto& [m, c] : terms_) {
    if (m.size() > values.size()) throw EvaluationError("too few coordinate values for polynomial");
    Complex term = c;
    for (std::size_t k = 0; k < m.size(); ++k)
      for (unsigned e = 0; e < m[k]; ++e) term *= values[k];
    sum += term;
  }
  return sum;
}

Poly Poly::conjugate() const {
  Poly out;
  out.algebra_ = algebra_;
  for (const auto& [m, c] : terms_) {
    if (m.empty()) {
      out.add_term(m, std::conj(c));
      continue;
    }
    Monomial n(algebra_->num_symbols(), 0);
    for (std::size_t k = 0; k < m.size(); ++k) n[algebra_->conjugate_of(k)] += m[k];
    out.add_term(trimmed(std::move(n)), std::conj(c));
  }
  return out;
}

Poly Poly::substitute(std::span<const Poly> images, const AlgebraPtr& target) const {
  Poly out;
  out.algebra_ = target;
  for (const auto& [m, c] : terms_) {
    Poly term(c);
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] == 0) continue;
      if (k >= images.size()) throw EvaluationError("substitution has no image for symbol");
      for (unsigned e = 0; e < m[k]; ++e) term *= images[k];
    }
    out += term;
  }
  out.algebra_ = Algebra::unify(target, out.algebra_);
  return out;
}

Poly Poly::chop(double tol) const {
  Poly out;
  out.algebra_ = algebra_;
  for (const auto& [m, c] : terms_)
    if (std::abs(c) > tol) out.terms_.emplace(m, c);
  return out;
}

std::string format_complex(Complex c) {
  char buf[96];
  if (c.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", c.real());
  } else if (c.real() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17gi", c.imag());
  } else {
    std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", c.real(), c.imag());
  }
  return buf;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << format_complex(c);
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] == 0) continue;
      os << '*' << (algebra_ ? algebra_->symbol_name(k) : "x" + std::to_string(k));
      if (m[k] > 1) os << '^' << m[k];
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

std::string coefficient_string(const Complex& c) { return format_complex(c); }
std::string coefficient_string(const Poly& p) { return "(" + p.to_string() + ")"; }

}  // namespace

template <class C>
std::string Form<C>::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mask, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << coefficient_string(c);
    for (Mask rest = mask; rest != 0; rest &= rest - 1) {
      const int g = std::countr_zero(rest);
      os << (rest == mask ? " " : "^") << (algebra_ ? algebra_->generator_name(g) : "e" + std::to_string(g));
    }
  }
  return os.str();
}

template class Form<Complex>;
template class Form<Poly>;

SymbolicForm exterior_derivative(const SymbolicForm& a) {
  const auto& alg = a.algebra();
  SymbolicForm out(alg);
  if (!alg) return out;
  std::vector<SymbolicForm::Term> products;
  for (const auto& [mask, c] : a.terms()) {
    for (std::size_t s = 0; s < alg->num_symbols(); ++s) {
      auto g = alg->differential_of(s);
      if (!g || (mask >> *g & 1U) != 0) continue;
      Poly dc = c.derivative(s);
      if (dc.is_zero()) continue;
      // dx_g ∧ e_mask: move dx_g past the generators of mask below it.
      if ((std::popcount(mask & ((Mask{1} << *g) - 1)) & 1) != 0) dc = -dc;
      products.emplace_back(mask | (Mask{1} << *g), std::move(dc));
    }
  }
  out.collect(std::move(products));
  return out;
}

NumericForm evaluate(const SymbolicForm& a, std::span<const Complex> values) {
  std::vector<NumericForm::Term> terms;
  for (const auto& [mask, c] : a.terms()) terms.emplace_back(mask, c.evaluate(values));
  NumericForm out(a.algebra());
  out.collect(std::move(terms));
  return out;
}

NumericForm evaluate(const SymbolicForm& a, const std::map<std::string, Complex>& point) {
  const auto& alg = a.algebra();
  const std::size_t n = alg ? alg->num_symbols() : 0;
  std::vector<Complex> values(n);
  std::vector<bool> used(n, false);
  for (const auto& [mask, c] : a.terms())
    for (const auto& [m, coeff] : c.terms())
      for (std::size_t k = 0; k < m.size(); ++k)
        if (m[k] != 0) used[k] = true;
  for (std::size_t k = 0; k < n; ++k) {
    auto it = point.find(alg->symbol_name(k));
    if (it != point.end()) {
      values[k] = it->second;
    } else if (used[k]) {
      throw EvaluationError("no value assigned to coordinate '" + alg->symbol_name(k) + "'");
    }
  }
  return evaluate(a, values);
}

SymbolicForm to_symbolic(const NumericForm& a) {
  std::vector<SymbolicForm::Term> terms;
  for (const auto& [mask, c] : a.terms()) terms.emplace_back(mask, Poly(c));
  SymbolicForm out(a.algebra());
  out.collect(std::move(terms));
  return out;
}

double max_abs_coefficient(const NumericForm& a) {
  double m = 0.0;
  for (const auto& t : a.terms()) m = std::max(m, std::abs(t.second));
  return m;
}

double l1_norm(const NumericForm& a) {
  double s = 0.0;
  for (const auto& t : a.terms()) s += std::abs(t.second);
  return s;
}

SymbolicForm pullback(const SymbolicForm& a, std::span<const Poly> images, const AlgebraPtr& target) {
  const auto& source = a.algebra();
  SymbolicForm out(target);
  if (!source) return out;
  std::vector<SymbolicForm> generator_images(source->num_generators());
  for (std::size_t g = 0; g < source->num_generators(); ++g) {
    auto s = source->symbol_of_generator(g);
    if (!s) throw InvalidArgument("pullback: generator '" + source->generator_name(g) + "' has no coordinate");
    generator_images[g] = exterior_derivative(SymbolicForm::scalar(target, images[*s]));
  }
  for (const auto& [mask, c] : a.terms()) {
    SymbolicForm term = SymbolicForm::scalar(target, c.substitute(images, target));
    for (Mask rest = mask; rest != 0; rest &= rest - 1) term = term * generator_images[std::countr_zero(rest)];
    out += term;
  }
  return out;
}

}  // namespace eqchern
