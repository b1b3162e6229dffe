#include "hodgejet/exactalg/fraction.hpp"

#include <cctype>
#include <random>

namespace hodgejet {

ChartFraction::ChartFraction(MultiPoly numerator, std::vector<int> powers, UnitList units)
    : num_(std::move(numerator)), pow_(std::move(powers)), units_(std::move(units)) {
  if (units_ && pow_.size() != units_->size()) pow_.resize(units_->size(), 0);
  normalize();
}

ChartFraction ChartFraction::polynomial(MultiPoly p, UnitList units) {
  const std::size_t n = units ? units->size() : 0;
  return ChartFraction(std::move(p), std::vector<int>(n, 0), std::move(units));
}

void ChartFraction::adopt(const UnitList& u) {
  if (!units_ && u) {
    units_ = u;
    pow_.assign(u->size(), 0);
  }
}

void ChartFraction::normalize() {
  if (num_.is_zero()) {
    std::fill(pow_.begin(), pow_.end(), 0);
    return;
  }
  if (!units_) return;
  for (std::size_t i = 0; i < pow_.size(); ++i) {
    while (pow_[i] > 0 && !(*units_)[i].is_constant()) {
      auto q = exact_divide(num_, (*units_)[i]);
      if (!q) break;
      num_ = std::move(*q);
      --pow_[i];
    }
  }
}

bool ChartFraction::is_polynomial() const {
  return std::all_of(pow_.begin(), pow_.end(), [](int e) { return e == 0; });
}

MultiPoly ChartFraction::denominator() const {
  MultiPoly d(num_.symbols(), 1);
  for (std::size_t i = 0; i < pow_.size(); ++i)
    if (pow_[i] > 0) d *= (*units_)[i].pow(static_cast<unsigned>(pow_[i]));
  return d;
}

ChartFraction ChartFraction::operator-() const {
  ChartFraction r = *this;
  r.num_ = -r.num_;
  return r;
}

ChartFraction operator+(const ChartFraction& a, const ChartFraction& b) {
  ChartFraction x = a, y = b;
  x.adopt(y.units_);
  y.adopt(x.units_);
  if (x.num_.is_zero()) return y;
  if (y.num_.is_zero()) return x;
  std::vector<int> e(x.pow_.size());
  MultiPoly nx = x.num_, ny = y.num_;
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = std::max(x.pow_[i], y.pow_[i]);
    const MultiPoly& u = (*x.units_)[i];
    if (e[i] > x.pow_[i]) nx *= u.pow(static_cast<unsigned>(e[i] - x.pow_[i]));
    if (e[i] > y.pow_[i]) ny *= u.pow(static_cast<unsigned>(e[i] - y.pow_[i]));
  }
  return ChartFraction(nx + ny, std::move(e), x.units_);
}

ChartFraction operator-(const ChartFraction& a, const ChartFraction& b) { return a + (-b); }

ChartFraction operator*(const ChartFraction& a, const ChartFraction& b) {
  ChartFraction x = a, y = b;
  x.adopt(y.units_);
  y.adopt(x.units_);
  std::vector<int> e(x.pow_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = x.pow_[i] + y.pow_[i];
  return ChartFraction(x.num_ * y.num_, std::move(e), x.units_);
}

bool operator==(const ChartFraction& a, const ChartFraction& b) {
  ChartFraction d = a - b;
  return d.num_.is_zero();
}

ChartFraction ChartFraction::derivative(std::size_t var) const {
  if (num_.is_zero()) return *this;
  const Symbols& s = num_.symbols();
  MultiPoly U(s, 1);
  std::vector<int> e = pow_;
  for (std::size_t i = 0; i < pow_.size(); ++i) {
    if (pow_[i] > 0) {
      U *= (*units_)[i];
      ++e[i];
    }
  }
  MultiPoly n = num_.derivative(var) * U;
  for (std::size_t i = 0; i < pow_.size(); ++i) {
    if (pow_[i] == 0) continue;
    const MultiPoly& u = (*units_)[i];
    MultiPoly du = u.derivative(var);
    if (du.is_zero()) continue;
    MultiPoly rest(s, 1);
    for (std::size_t j = 0; j < pow_.size(); ++j)
      if (j != i && pow_[j] > 0) rest *= (*units_)[j];
    n -= num_ * du * rest * Rational(pow_[i]);
  }
  return ChartFraction(std::move(n), std::move(e), units_);
}

Rational ChartFraction::evaluate(std::span<const Rational> point) const {
  Rational v = num_.evaluate(point);
  for (std::size_t i = 0; i < pow_.size(); ++i) {
    if (pow_[i] == 0) continue;
    const Rational u = (*units_)[i].evaluate(point);
    if (u == 0) throw PoleError("unit '" + (*units_)[i].to_string() + "' vanishes at the point");
    for (int k = 0; k < pow_[i]; ++k) v /= u;
  }
  return v;
}

std::string ChartFraction::to_string() const {
  if (is_polynomial()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + denominator().to_string() + ")";
}

namespace {

// Rational expressions: like the polynomial grammar, with '/' allowed by
// anything whose numerator factors into declared units.
class FractionParser {
 public:
  FractionParser(std::string_view text, const Symbols& symbols, const UnitList& units)
      : s_(text), symbols_(symbols), units_(units) {}

  ChartFraction parse() {
    ChartFraction f = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("cannot parse fraction '" + std::string(s_) + "': " + msg);
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
  ChartFraction poly(MultiPoly p) const { return ChartFraction::polynomial(std::move(p), units_); }

  ChartFraction expr() {
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    ChartFraction acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else break;
    }
    return acc;
  }

  ChartFraction term() {
    ChartFraction acc = power();
    for (;;) {
      if (eat('*')) acc = acc * power();
      else if (eat('/')) acc = acc * invert(power());
      else break;
    }
    return acc;
  }

  // 1/f, defined when f's numerator is c * prod(units^k).
  ChartFraction invert(const ChartFraction& f) const {
    if (f.is_zero()) fail("division by zero");
    MultiPoly rest = f.numerator();
    const std::size_t nu = units_ ? units_->size() : 0;
    std::vector<int> k(nu, 0);
    for (std::size_t i = 0; i < nu; ++i) {
      const MultiPoly& u = (*units_)[i];
      if (u.is_constant()) continue;
      while (!rest.is_constant()) {
        auto q = exact_divide(rest, u);
        if (!q) break;
        rest = std::move(*q);
        ++k[i];
      }
    }
    if (!rest.is_constant())
      throw InputError("denominator factor '" + rest.to_string() + "' is not a declared unit");
    // 1/f = prod(units^powers(f)) / (c * prod(units^k))
    MultiPoly num(symbols_, Rational(1) / rest.constant_term());
    for (std::size_t i = 0; i < nu; ++i)
      if (f.powers()[i] > 0) num *= (*units_)[i].pow(static_cast<unsigned>(f.powers()[i]));
    return ChartFraction(std::move(num), k, units_);
  }

  ChartFraction power() {
    ChartFraction base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const unsigned e = static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start))));
      ChartFraction r = poly(MultiPoly(symbols_, 1));
      for (unsigned i = 0; i < e; ++i) r = r * base;
      return r;
    }
    return base;
  }

  ChartFraction atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ChartFraction e = expr();
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
      return poly(MultiPoly(symbols_, Rational(Integer(std::string(s_.substr(start, pos_ - start))))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      auto idx = symbols_->find(name);
      if (!idx) fail("unknown variable '" + name + "'");
      return poly(MultiPoly::variable(symbols_, *idx));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const Symbols& symbols_;
  const UnitList& units_;
  std::size_t pos_ = 0;
};

}  // namespace

ChartFraction parse_fraction(std::string_view text, const Symbols& symbols, const UnitList& units) {
  return FractionParser(text, symbols, units).parse();
}

std::size_t symbolic_rank(Matrix<MultiPoly> m) {
  // Fraction-free Gaussian elimination (Bareiss); entries stay polynomial.
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  MultiPoly prev = MultiPoly::constant(1);
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m(p, c).is_zero()) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t k = 0; k < cols; ++k) std::swap(m(p, k), m(r, k));
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        MultiPoly v = m(r, c) * m(i, k) - m(i, c) * m(r, k);
        auto q = exact_divide(v, prev);
        if (!q) throw Error("Bareiss division failed");
        m(i, k) = std::move(*q);
      }
      m(i, c) = MultiPoly();
    }
    prev = m(r, c);
    ++r;
  }
  return r;
}

namespace {

std::size_t rank_modulo(const Matrix<MultiPoly>& m, const Chart& chart) {
  auto basis = groebner(chart.relations);
  const std::size_t kmax = std::min(m.rows(), m.cols());
  std::size_t best = 0;
  for (std::size_t k = 1; k <= kmax; ++k) {
    bool found = false;
    for (const auto& rs : combinations(m.rows(), k)) {
      for (const auto& cs : combinations(m.cols(), k)) {
        MultiPoly d = determinant_expand(m.select(rs, cs), MultiPoly(chart.symbols));
        if (!normal_form(d, basis).is_zero()) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) break;
    best = k;
  }
  return best;
}

}  // namespace

RankResult generic_rank(const FractionMatrix& m, const Chart& chart, RankStrategy strategy,
                        std::uint64_t seed) {
  RankResult out;
  const bool free_chart = chart.relations.is_zero_ideal();
  if (strategy != RankStrategy::Sampled) {
    // Clear denominators row by row; units are generically nonzero.
    Matrix<MultiPoly> pm(m.rows(), m.cols(), MultiPoly(chart.symbols));
    for (std::size_t r = 0; r < m.rows(); ++r) {
      std::vector<int> emax(chart.units.size(), 0);
      for (std::size_t c = 0; c < m.cols(); ++c) {
        const auto& p = m(r, c).powers();
        for (std::size_t i = 0; i < p.size() && i < emax.size(); ++i) emax[i] = std::max(emax[i], p[i]);
      }
      for (std::size_t c = 0; c < m.cols(); ++c) {
        const ChartFraction& f = m(r, c);
        MultiPoly v = f.numerator().symbols() ? f.numerator()
                                              : MultiPoly(chart.symbols, f.numerator().constant_term());
        const auto& p = f.powers();
        for (std::size_t i = 0; i < emax.size(); ++i) {
          const int have = i < p.size() ? p[i] : 0;
          if (emax[i] > have) v *= chart.units[i].pow(static_cast<unsigned>(emax[i] - have));
        }
        pm(r, c) = std::move(v);
      }
    }
    out.rank = free_chart ? symbolic_rank(pm) : rank_modulo(pm, chart);
  }
  if (strategy != RankStrategy::Symbolic) {
    if (!free_chart) {
      if (strategy == RankStrategy::Sampled)
        throw SamplingError("cannot sample rational points on a chart with relations");
      return out;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-40, 40), den(1, 7);
    const std::size_t n = chart.symbols ? chart.symbols->size() : 0;
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::vector<Rational> pt(n);
      for (auto& x : pt) {
        x = Rational(num(rng), den(rng));
        x.canonicalize();
      }
      bool ok = std::all_of(chart.units.begin(), chart.units.end(),
                            [&](const MultiPoly& u) { return u.evaluate(pt) != 0; });
      if (!ok) continue;
      QMatrix q(m.rows(), m.cols());
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) q(r, c) = m(r, c).evaluate(pt);
      out.sample_rank = rank(q);
      out.sample_point = pt;
      if (strategy == RankStrategy::Sampled) out.rank = *out.sample_rank;
      out.certified = *out.sample_rank == out.rank;
      if (out.certified || strategy == RankStrategy::Sampled) return out;
    }
    if (!out.sample_rank) throw SamplingError("every sampled point hit a denominator zero");
  }
  return out;
}

}  // namespace hodgejet
