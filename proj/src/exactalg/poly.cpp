#include "hodgejet/exactalg/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "hodgejet/errors.hpp"

namespace hodgejet {

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw InputError("empty rational");
  Rational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw InputError("bad rational '" + s + "'");
  q.canonicalize();
  return q;
}

SymbolTable::SymbolTable(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!lookup_.emplace(names_[i], i).second)
      throw InputError("duplicate variable '" + names_[i] + "'");
  }
}

std::optional<std::size_t> SymbolTable::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t SymbolTable::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw InputError("unknown variable '" + std::string(name) + "'");
}

Symbols make_symbols(std::vector<std::string> names) {
  return std::make_shared<const SymbolTable>(std::move(names));
}

bool same_symbols(const Symbols& a, const Symbols& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

int monomial_degree(const Monomial& m) {
  int d = 0;
  for (Exponent e : m) d += e;
  return d;
}

int grevlex_compare(const Monomial& a, const Monomial& b) {
  const int da = monomial_degree(a), db = monomial_degree(b);
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  return 0;
}

namespace {

bool term_greater(const Term& x, const Term& y) { return grevlex_compare(x.mono, y.mono) > 0; }

}  // namespace

MultiPoly::MultiPoly(Symbols symbols) : symbols_(std::move(symbols)) {}

MultiPoly::MultiPoly(Symbols symbols, const Rational& c) : symbols_(std::move(symbols)) {
  if (c != 0) terms_.push_back({Monomial(symbols_ ? symbols_->size() : 0, 0), c});
}

MultiPoly MultiPoly::constant(const Rational& c) { return MultiPoly(nullptr, c); }

MultiPoly MultiPoly::variable(Symbols symbols, std::size_t index) {
  MultiPoly p(symbols);
  Monomial m(symbols->size(), 0);
  m.at(index) = 1;
  p.terms_.push_back({std::move(m), Rational(1)});
  return p;
}

MultiPoly MultiPoly::variable(Symbols symbols, std::string_view name) {
  const std::size_t i = symbols->index(name);
  return variable(std::move(symbols), i);
}

MultiPoly MultiPoly::from_terms(Symbols symbols, std::vector<Term> terms) {
  MultiPoly p(std::move(symbols));
  p.terms_ = std::move(terms);
  p.canonicalize();
  return p;
}

void MultiPoly::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), term_greater);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff == 0) out.pop_back();
  terms_ = std::move(out);
}

void MultiPoly::adopt(const Symbols& other) {
  if (!other || same_symbols(symbols_, other)) {
    if (!symbols_ && other) symbols_ = other;
    return;
  }
  if (!symbols_) {
    // Constant (or zero) without a table.
    symbols_ = other;
    for (auto& t : terms_) t.mono.assign(other->size(), 0);
    return;
  }
  throw ShapeError("polynomials over different symbol tables");
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && monomial_degree(terms_[0].mono) == 0);
}

Rational MultiPoly::constant_term() const {
  if (terms_.empty()) return 0;
  const Term& last = terms_.back();
  return monomial_degree(last.mono) == 0 ? last.coeff : Rational(0);
}

int MultiPoly::total_degree() const {
  return terms_.empty() ? -1 : monomial_degree(terms_.front().mono);
}

int MultiPoly::degree_in(std::size_t var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& t : terms_) d = std::max<int>(d, t.mono[var]);
  return d;
}

bool MultiPoly::depends_on(std::size_t var) const {
  return std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.mono[var] > 0; });
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  if (other.terms_.empty()) {
    adopt(other.symbols_);
    return *this;
  }
  MultiPoly o = other;
  adopt(o.symbols_);
  o.adopt(symbols_);
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() && j < o.terms_.size()) {
    const int c = grevlex_compare(terms_[i].mono, o.terms_[j].mono);
    if (c > 0) {
      out.push_back(std::move(terms_[i++]));
    } else if (c < 0) {
      out.push_back(std::move(o.terms_[j++]));
    } else {
      Rational s = terms_[i].coeff + o.terms_[j].coeff;
      if (s != 0) out.push_back({std::move(terms_[i].mono), std::move(s)});
      ++i;
      ++j;
    }
  }
  for (; i < terms_.size(); ++i) out.push_back(std::move(terms_[i]));
  for (; j < o.terms_.size(); ++j) out.push_back(std::move(o.terms_[j]));
  terms_ = std::move(out);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) { return *this += -other; }

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly x = a, y = b;
  x.adopt(y.symbols_);
  y.adopt(x.symbols_);
  MultiPoly r(x.symbols_);
  if (x.terms_.empty() || y.terms_.empty()) return r;
  if (y.terms_.size() == 1) return x.mul_term(y.terms_[0].mono, y.terms_[0].coeff);
  if (x.terms_.size() == 1) return y.mul_term(x.terms_[0].mono, x.terms_[0].coeff);
  std::map<Monomial, Rational> acc;
  const std::size_t n = x.symbols_ ? x.symbols_->size() : 0;
  Monomial m(n);
  for (const auto& s : x.terms_) {
    for (const auto& t : y.terms_) {
      for (std::size_t v = 0; v < n; ++v) m[v] = s.mono[v] + t.mono[v];
      auto [it, fresh] = acc.try_emplace(m, 0);
      it->second += s.coeff * t.coeff;
    }
  }
  r.terms_.reserve(acc.size());
  for (auto& [mono, c] : acc)
    if (c != 0) r.terms_.push_back({mono, c});
  std::sort(r.terms_.begin(), r.terms_.end(), term_greater);
  return r;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& other) { return *this = *this * other; }

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (a.terms_.empty()) return true;
  if (!same_symbols(a.symbols_, b.symbols_)) {
    // Constants without a table compare by value.
    if (a.is_constant() && b.is_constant()) return a.constant_term() == b.constant_term();
    return false;
  }
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].coeff != b.terms_[i].coeff || a.terms_[i].mono != b.terms_[i].mono)
      return false;
  }
  return true;
}

MultiPoly MultiPoly::mul_term(const Monomial& mono, const Rational& c) const {
  MultiPoly r(symbols_);
  if (c == 0) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m = t.mono;
    for (std::size_t v = 0; v < m.size() && v < mono.size(); ++v) m[v] += mono[v];
    r.terms_.push_back({std::move(m), t.coeff * c});
  }
  return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly result(symbols_, 1);
  MultiPoly base = *this;
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e) base *= base;
  }
  return result;
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
  MultiPoly r(symbols_);
  for (const auto& t : terms_) {
    if (t.mono[var] == 0) continue;
    Monomial m = t.mono;
    const Exponent e = m[var]--;
    r.terms_.push_back({std::move(m), t.coeff * e});
  }
  std::sort(r.terms_.begin(), r.terms_.end(), term_greater);
  return r;
}

MultiPoly MultiPoly::monic() const {
  if (terms_.empty()) return *this;
  MultiPoly r = *this;
  const Rational lc = terms_.front().coeff;
  for (auto& t : r.terms_) t.coeff /= lc;
  return r;
}

Rational MultiPoly::evaluate(std::span<const Rational> values) const {
  return evaluate_in<Rational>(values, [](const Rational& q) { return q; }, Rational(0));
}

MultiPoly MultiPoly::substitute(std::span<const MultiPoly> images, const Symbols& target) const {
  return evaluate_in<MultiPoly>(
      images, [&](const Rational& q) { return MultiPoly(target, q); }, MultiPoly(target));
}

MultiPoly MultiPoly::rebased(const Symbols& target) const {
  MultiPoly r(target);
  if (terms_.empty()) return r;
  if (!symbols_) return MultiPoly(target, constant_term());
  std::vector<std::size_t> map(symbols_->size(), SIZE_MAX);
  for (std::size_t v = 0; v < symbols_->size(); ++v) {
    if (auto j = target->find(symbols_->name(v))) map[v] = *j;
  }
  for (const auto& t : terms_) {
    Monomial m(target->size(), 0);
    for (std::size_t v = 0; v < t.mono.size(); ++v) {
      if (t.mono[v] == 0) continue;
      if (map[v] == SIZE_MAX)
        throw ShapeError("variable '" + symbols_->name(v) + "' missing from target table");
      m[map[v]] = t.mono[v];
    }
    r.terms_.push_back({std::move(m), t.coeff});
  }
  r.canonicalize();
  return r;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    const bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t v = 0; v < t.mono.size(); ++v) {
      if (t.mono[v] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += symbols_->name(v);
      if (t.mono[v] > 1) mono += "^" + std::to_string(t.mono[v]);
    }
    if (mono.empty()) {
      out += hodgejet::to_string(c);
    } else if (c == 1) {
      out += mono;
    } else {
      out += hodgejet::to_string(c) + "*" + mono;
    }
  }
  return out;
}

DivisionResult divide(const MultiPoly& f, const MultiPoly& g) {
  if (g.is_zero()) throw Error("division by zero polynomial");
  Symbols s = f.symbols() ? f.symbols() : g.symbols();
  DivisionResult out{MultiPoly(s), MultiPoly(s)};
  MultiPoly p = f;
  if (!p.symbols()) p = MultiPoly(s, p.constant_term());
  MultiPoly gg = g;
  if (!gg.symbols()) gg = MultiPoly(s, gg.constant_term());
  const Term& lt = gg.leading();
  while (!p.is_zero()) {
    const Term& pt = p.leading();
    bool divisible = true;
    for (std::size_t v = 0; v < pt.mono.size(); ++v) {
      if (pt.mono[v] < lt.mono[v]) {
        divisible = false;
        break;
      }
    }
    if (divisible) {
      Monomial q(pt.mono.size());
      for (std::size_t v = 0; v < q.size(); ++v) q[v] = pt.mono[v] - lt.mono[v];
      const Rational c = pt.coeff / lt.coeff;
      out.quotient += MultiPoly::from_terms(s, {{q, c}});
      p -= gg.mul_term(q, c);
    } else {
      out.remainder += MultiPoly::from_terms(s, {{pt.mono, pt.coeff}});
      p -= MultiPoly::from_terms(s, {{pt.mono, pt.coeff}});
    }
  }
  return out;
}

std::optional<MultiPoly> exact_divide(const MultiPoly& f, const MultiPoly& g) {
  auto r = divide(f, g);
  if (!r.remainder.is_zero()) return std::nullopt;
  return r.quotient;
}

// Recursive-descent parser: sums of products of powers of atoms. Division
// is only allowed by rational constants.
namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, const Symbols& symbols) : s_(text), symbols_(symbols) {}

  MultiPoly parse() {
    MultiPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return symbols_ && !p.symbols() ? MultiPoly(symbols_, p.constant_term()) : p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("cannot parse polynomial '" + std::string(s_) + "': " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MultiPoly expr() {
    MultiPoly acc(symbols_);
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    MultiPoly t = term();
    acc = neg ? -t : t;
    for (;;) {
      if (eat('+')) acc += term();
      else if (eat('-')) acc -= term();
      else break;
    }
    return acc;
  }

  MultiPoly term() {
    MultiPoly acc = power();
    for (;;) {
      if (eat('*')) {
        acc *= power();
      } else if (eat('/')) {
        MultiPoly d = power();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant");
        acc *= Rational(1) / d.constant_term();
      } else {
        break;
      }
    }
    return acc;
  }

  MultiPoly power() {
    MultiPoly base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start)))));
    }
    return base;
  }

  MultiPoly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (c == '-') {
      ++pos_;
      return -power();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return MultiPoly(symbols_, Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      int depth = 0;
      while (pos_ < s_.size()) {
        const char d = s_[pos_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
          ++pos_;
        } else if (d == '[') {
          ++depth;
          ++pos_;
        } else if (d == ']' && depth > 0) {
          --depth;
          ++pos_;
        } else if (d == ',' && depth > 0) {
          ++pos_;
        } else {
          break;
        }
      }
      const std::string name(s_.substr(start, pos_ - start));
      if (!symbols_) fail("variable '" + name + "' without a symbol table");
      auto idx = symbols_->find(name);
      if (!idx) fail("unknown variable '" + name + "'");
      return MultiPoly::variable(symbols_, *idx);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const Symbols& symbols_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_poly(std::string_view text, const Symbols& symbols) {
  return PolyParser(text, symbols).parse();
}

}  // namespace hodgejet
