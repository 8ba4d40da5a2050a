#include "eqchern/model_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace eqchern {

namespace {

constexpr Complex I{0.0, 1.0};

struct ExprError {
  std::size_t pos;
  std::string message;
};

class ExprParser {
 public:
  ExprParser(std::string_view text, const AlgebraPtr& algebra) : s_(text), alg_(algebra) {}

  SymbolicForm parse() {
    SymbolicForm f = expr();
    skip();
    if (p_ != s_.size()) fail("unexpected '" + std::string(1, s_[p_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ExprError{p_, msg}; }

  void skip() {
    while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
  }

  bool eat(char c) {
    skip();
    if (p_ < s_.size() && s_[p_] == c) {
      ++p_;
      return true;
    }
    return false;
  }

  SymbolicForm scalar(Complex c) const { return SymbolicForm::scalar(alg_, Poly(c)); }

  SymbolicForm expr() {
    SymbolicForm f = term();
    for (;;) {
      if (eat('+')) f += term();
      else if (eat('-')) f -= term();
      else return f;
    }
  }

  SymbolicForm term() {
    SymbolicForm f = unary();
    while (eat('*')) f = wedge(f, unary());
    return f;
  }

  SymbolicForm unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  SymbolicForm power() {
    SymbolicForm base = atom();
    if (!eat('^')) return base;
    skip();
    const std::size_t start = p_;
    while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
    if (start == p_) fail("expected a non-negative integer exponent");
    int n = 0;
    std::from_chars(s_.data() + start, s_.data() + p_, n);
    if (n > 64) fail("exponent too large");
    SymbolicForm out = scalar(1.0);
    for (int k = 0; k < n; ++k) out = wedge(out, base);
    return out;
  }

  SymbolicForm atom() {
    skip();
    if (p_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[p_];
    if (c == '(') {
      ++p_;
      SymbolicForm f = expr();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  SymbolicForm number() {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s_.data() + p_, s_.data() + s_.size(), v);
    if (ec != std::errc{}) fail("malformed number");
    p_ = static_cast<std::size_t>(end - s_.data());
    if (p_ < s_.size() && s_[p_] == 'i' &&
        (p_ + 1 == s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[p_ + 1])) || s_[p_ + 1] == '_'))) {
      ++p_;
      return scalar(Complex{0.0, v});
    }
    return scalar(v);
  }

  SymbolicForm name() {
    const std::size_t start = p_;
    while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) ++p_;
    const std::string id(s_.substr(start, p_ - start));
    if (id == "i") return scalar(I);
    if (id == "conj") {
      if (!eat('(')) fail("expected '(' after conj");
      SymbolicForm f = expr();
      if (!eat(')')) fail("expected ')'");
      if (f.max_degree() > 0) fail("conj applies to functions, not forms");
      return SymbolicForm::scalar(alg_, f.scalar_part().conjugate());
    }
    if (auto k = alg_->find_symbol(id)) return SymbolicForm::scalar(alg_, Poly::variable(alg_, *k));
    if (auto g = alg_->find_generator(id)) return SymbolicForm::generator(alg_, *g);
    p_ = start;
    fail("unknown name '" + id + "'");
  }

  std::string_view s_;
  std::size_t p_ = 0;
  AlgebraPtr alg_;
};

struct Line {
  std::size_t number;
  std::string key;
  std::string value;
  std::size_t value_column;  // 1-based column of value[0]
};

struct Section {
  std::size_t header_line = 0;
  std::vector<Line> lines;
};

std::string trim(std::string_view s, std::size_t* lead = nullptr) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  if (lead) *lead = a;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

int parse_int(const std::string& w, const Line& line) {
  int v = 0;
  const auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
  if (ec != std::errc{} || end != w.data() + w.size())
    throw ParseError("'" + line.key + "': expected an integer, got '" + w + "'", line.number, line.value_column);
  return v;
}

std::vector<int> parse_ints(const Line& line) {
  std::vector<int> out;
  if (trim(line.value) == "none") return out;
  for (const auto& w : words(line.value)) out.push_back(parse_int(w, line));
  return out;
}

Parity parse_parity(const std::string& w, const Line& line) {
  if (w == "even" || w == "+") return Parity::even;
  if (w == "odd" || w == "-") return Parity::odd;
  throw ParseError("parity must be even or odd, got '" + w + "'", line.number, line.value_column);
}

const Line* find_key(const Section& s, const std::string& key) {
  const Line* found = nullptr;
  for (const auto& l : s.lines) {
    if (l.key != key) continue;
    if (found) throw ParseError("duplicate key '" + key + "'", l.number, 1);
    found = &l;
  }
  return found;
}

void only_keys(const Section& s, const std::string& name, std::initializer_list<std::string_view> keys) {
  for (const auto& l : s.lines)
    if (std::find(keys.begin(), keys.end(), l.key) == keys.end())
      throw ParseError("unknown key '" + l.key + "' in [" + name + "]", l.number, 1);
}

BundleData parse_bundle(const Section& s, const std::string& name) {
  only_keys(s, name, {"weights", "parities"});
  const Line* w = find_key(s, "weights");
  const Line* p = find_key(s, "parities");
  if (!w || !p) throw ParseError("[" + name + "] needs weights and parities", s.header_line, 1);
  BundleData b;
  b.weights = parse_ints(*w);
  for (const auto& word : words(p->value)) b.parities.push_back(parse_parity(word, *p));
  if (b.weights.size() != b.parities.size() || b.weights.empty())
    throw ParseError("[" + name + "]: weights and parities differ in length", p->number, 1);
  return b;
}

// Splits a row at top-level commas; returns (entry, column offset) pairs.
std::vector<std::pair<std::string, std::size_t>> split_row(const Line& line) {
  std::vector<std::pair<std::string, std::size_t>> out;
  int depth = 0;
  std::size_t start = 0;
  const std::string& v = line.value;
  for (std::size_t k = 0; k <= v.size(); ++k) {
    if (k < v.size() && v[k] == '(') ++depth;
    if (k < v.size() && v[k] == ')' && depth > 0) --depth;
    if (k == v.size() || (v[k] == ',' && depth == 0)) {
      std::size_t lead = 0;
      const std::string entry = trim(std::string_view(v).substr(start, k - start), &lead);
      out.emplace_back(entry, start + lead);
      start = k + 1;
    }
  }
  return out;
}

SymbolicSuperMatrix parse_matrix(const Section& s, const std::string& what, const AlgebraPtr& algebra,
                                 const Grading& grading, bool functions_only) {
  std::vector<const Line*> rows;
  for (const auto& l : s.lines) rows.push_back(&l);
  const std::size_t n = grading.size();
  if (rows.size() != n)
    throw ParseError(what + ": expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()),
                     s.header_line, 1);
  SymbolicSuperMatrix m(algebra, grading);
  for (std::size_t i = 0; i < n; ++i) {
    const auto entries = split_row(*rows[i]);
    if (entries.size() != n)
      throw ParseError(what + " row " + std::to_string(i + 1) + ": expected " + std::to_string(n) + " entries",
                       rows[i]->number, rows[i]->value_column);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& [text, offset] = entries[j];
      const std::string label = what + " entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      const std::size_t column = rows[i]->value_column + offset;
      if (text.empty()) throw ParseError(label + ": empty entry", rows[i]->number, column);
      try {
        m(i, j) = ExprParser(text, algebra).parse();
      } catch (const ExprError& e) {
        throw ParseError(label + " '" + text + "': " + e.message, rows[i]->number, column + e.pos);
      }
      if (functions_only && m(i, j).max_degree() > 0)
        throw ParseError(label + ": symbol entries must be functions", rows[i]->number, column);
    }
  }
  return m;
}

}  // namespace

SymbolicForm parse_form(std::string_view text, const AlgebraPtr& algebra) {
  if (!algebra) throw InvalidArgument("parse_form: no algebra");
  try {
    return ExprParser(text, algebra).parse();
  } catch (const ExprError& e) {
    throw ParseError(e.message, 1, e.pos + 1);
  }
}

Poly parse_polynomial(std::string_view text, const AlgebraPtr& algebra) {
  const SymbolicForm f = parse_form(text, algebra);
  if (f.max_degree() > 0) throw ParseError("expected a function, got a form", 1, 1);
  return f.scalar_part();
}

ActionModel parse_model(std::string_view text) {
  Section top;
  std::map<std::string, Section> sections;
  Section* current = &top;
  std::istringstream in{std::string(text)};
  std::size_t number = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++number;
    const std::string body = raw.substr(0, raw.find('#'));
    std::size_t lead = 0;
    const std::string line = trim(body, &lead);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", number, lead + 1);
      std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      static const std::vector<std::string> known{"coordinates", "bundle E", "bundle W", "symbol",
                                                  "superconnection", "options"};
      if (std::find(known.begin(), known.end(), name) == known.end())
        throw ParseError("unknown section [" + name + "]", number, lead + 1);
      if (sections.count(name)) throw ParseError("duplicate section [" + name + "]", number, lead + 1);
      current = &sections[name];
      current->header_line = number;
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", number, lead + 1);
    std::size_t vlead = 0;
    Line l{number, trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1), &vlead),
           eq + 2 + vlead};
    if (l.key.empty()) throw ParseError("missing key", number, lead + 1);
    current->lines.push_back(std::move(l));
  }

  ActionModel m;
  only_keys(top, "top level", {"name"});
  m.name = "model";
  if (const Line* n = find_key(top, "name")) m.name = n->value;

  for (const char* required : {"coordinates", "bundle E", "symbol"})
    if (!sections.count(required))
      throw ParseError(std::string("missing section [") + required + "]", number == 0 ? 1 : number, 1);

  for (const auto& l : sections["coordinates"].lines) {
    const auto w = words(l.value);
    if (w.size() != 3) throw ParseError("coordinate '" + l.key + "': expected 'kind role weight'", l.number, l.value_column);
    if (l.key == "i" || l.key == "conj" || !std::isalpha(static_cast<unsigned char>(l.key[0])))
      throw ParseError("invalid coordinate name '" + l.key + "'", l.number, 1);
    Coordinate c;
    c.name = l.key;
    if (w[0] == "complex") c.kind = CoordinateKind::complex;
    else if (w[0] == "real") c.kind = CoordinateKind::real;
    else if (w[0] == "angle") c.kind = CoordinateKind::angle;
    else throw ParseError("coordinate kind must be complex, real or angle", l.number, l.value_column);
    if (w[1] == "base") c.role = CoordinateRole::base;
    else if (w[1] == "fiber") c.role = CoordinateRole::fiber;
    else if (w[1] == "mixed") c.role = CoordinateRole::mixed;
    else throw ParseError("coordinate role must be base, fiber or mixed", l.number, l.value_column);
    c.weight = parse_int(w[2], l);
    m.coordinates.push_back(c);
  }
  if (m.coordinates.empty()) throw ParseError("no coordinates", sections["coordinates"].header_line, 1);
  try {
    m.algebra = make_model_algebra(m.coordinates);
  } catch (const Error& e) {
    throw ParseError(e.what(), sections["coordinates"].header_line, 1);
  }

  m.bundle_e = parse_bundle(sections["bundle E"], "bundle E");
  m.bundle_w = sections.count("bundle W") ? parse_bundle(sections["bundle W"], "bundle W")
                                          : BundleData{{0}, {Parity::even}};
  only_keys(sections["symbol"], "symbol", {"row"});
  m.symbol = parse_matrix(sections["symbol"], "symbol", m.algebra, m.bundle_e.parities, true);

  m.orientation = symplectic_orientation(m.coordinates);
  if (sections.count("options")) {
    const Section& s = sections["options"];
    only_keys(s, "options", {"tangent_weights", "symbol_order", "orientation"});
    if (const Line* l = find_key(s, "tangent_weights")) m.tangent_weights = parse_ints(*l);
    if (const Line* l = find_key(s, "symbol_order")) m.symbol_order = parse_int(l->value, *l);
    if (const Line* l = find_key(s, "orientation"); l && l->value != "auto") {
      m.orientation = parse_int(l->value, *l);
      if (m.orientation != 1 && m.orientation != -1)
        throw ParseError("orientation must be auto, 1 or -1", l->number, l->value_column);
    }
  }

  try {
    validate_model(m);
    if (sections.count("superconnection")) {
      const Section& s = sections["superconnection"];
      if (s.lines.size() == 1 && s.lines[0].key == "odd") {
        if (s.lines[0].value != "homotopy")
          throw ParseError("odd must be 'homotopy' or given as rows", s.lines[0].number, s.lines[0].value_column);
        m.odd_term = superconnection_from_homotopy(m);
      } else {
        only_keys(s, "superconnection", {"row"});
        m.odd_term = parse_matrix(s, "superconnection", m.algebra, total_bundle(m).grading, false);
      }
      validate_model(m);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("invalid model: ") + e.what(), sections["symbol"].header_line, 1);
  }
  return m;
}

ActionModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace eqchern
