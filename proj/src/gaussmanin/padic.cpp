#include "hodgejet/gaussmanin/padic.hpp"

#include <algorithm>

namespace hodgejet {

namespace {

Integer ipow(long p, int e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::max(e, 0)));
  return out;
}

// Strip factors of p; returns the count.
int strip(Integer& x, long p) {
  if (x == 0) return 0;
  int k = 0;
  const Integer pp(p);
  while (mpz_divisible_p(x.get_mpz_t(), pp.get_mpz_t())) {
    x /= pp;
    ++k;
  }
  return k;
}

Integer mod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

long joint_prime(const Padic& a, const Padic& b) {
  if (a.prime() && b.prime() && a.prime() != b.prime()) throw ShapeError("p-adic numbers with different primes");
  return a.prime() ? a.prime() : b.prime();
}

}  // namespace

int padic_valuation(const Rational& q, long p) {
  if (q == 0) throw InputError("valuation of zero");
  Integer num = q.get_num(), den = q.get_den();
  return strip(num, p) - strip(den, p);
}

Padic Padic::from_rational(const Rational& q, long p, int precision) {
  if (p < 2) throw InputError("p-adic prime must be at least 2");
  if (precision < 1) throw InputError("p-adic precision must be positive");
  Padic x;
  x.p_ = p;
  if (q == 0) return x;
  Integer num = q.get_num(), den = q.get_den();
  x.kind_ = Kind::Value;
  x.v_ = strip(num, p) - strip(den, p);
  x.n_ = precision;
  const Integer pn = ipow(p, precision);
  Integer inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pn.get_mpz_t());
  x.u_ = mod(num * inv, pn);
  return x;
}

Padic Padic::bounded_zero(long p, int valuation) {
  Padic x;
  x.kind_ = Kind::Bounded;
  x.p_ = p;
  x.v_ = valuation;
  return x;
}

std::optional<int> Padic::valuation() const {
  if (kind_ == Kind::Zero) return std::nullopt;
  return v_;
}

Padic Padic::operator-() const {
  Padic x = *this;
  if (kind_ == Kind::Value) x.u_ = mod(-u_, ipow(p_, n_));
  return x;
}

Padic operator+(const Padic& a, const Padic& b) {
  using K = Padic::Kind;
  if (a.kind_ == K::Zero) return b;
  if (b.kind_ == K::Zero) return a;
  const long p = joint_prime(a, b);
  auto abs_prec = [](const Padic& x) { return x.kind_ == K::Value ? x.v_ + x.n_ : x.v_; };
  const int A = std::min(abs_prec(a), abs_prec(b));
  int vmin = A;
  for (const Padic* x : {&a, &b})
    if (x->kind_ == K::Value) vmin = std::min(vmin, x->v_);
  if (A <= vmin) return Padic::bounded_zero(p, A);
  const Integer modulus = ipow(p, A - vmin);
  Integer s = 0;
  for (const Padic* x : {&a, &b})
    if (x->kind_ == K::Value) s += x->u_ * ipow(p, x->v_ - vmin);
  s = mod(s, modulus);
  if (s == 0) return Padic::bounded_zero(p, A);
  Padic out;
  out.kind_ = K::Value;
  out.p_ = p;
  const int k = strip(s, p);
  out.v_ = vmin + k;
  out.n_ = A - out.v_;
  out.u_ = mod(s, ipow(p, out.n_));
  return out;
}

Padic operator*(const Padic& a, const Padic& b) {
  using K = Padic::Kind;
  if (a.kind_ == K::Zero || b.kind_ == K::Zero) {
    Padic z;
    z.p_ = a.p_ ? a.p_ : b.p_;
    return z;
  }
  const long p = joint_prime(a, b);
  if (a.kind_ == K::Bounded || b.kind_ == K::Bounded) return Padic::bounded_zero(p, a.v_ + b.v_);
  Padic out;
  out.kind_ = K::Value;
  out.p_ = p;
  out.v_ = a.v_ + b.v_;
  out.n_ = std::min(a.n_, b.n_);
  out.u_ = mod(a.u_ * b.u_, ipow(p, out.n_));
  return out;
}

Padic operator*(const Padic& a, const Rational& q) {
  if (a.kind_ == Padic::Kind::Zero || q == 0) {
    Padic z;
    z.p_ = a.p_;
    return z;
  }
  const int n = a.kind_ == Padic::Kind::Value ? a.n_ : 1;
  return a * Padic::from_rational(q, a.p_, n);
}

Padic Padic::inverse() const {
  if (kind_ != Kind::Value) throw PrecisionError("inverse of a p-adic zero (no significant digits left)");
  Padic out = *this;
  out.v_ = -v_;
  const Integer pn = ipow(p_, n_);
  mpz_invert(out.u_.get_mpz_t(), u_.get_mpz_t(), pn.get_mpz_t());
  return out;
}

bool Padic::agrees_with(const Rational& q) const {
  switch (kind_) {
    case Kind::Zero:
      return q == 0;
    case Kind::Bounded:
      return q == 0 || padic_valuation(q, p_) >= v_;
    case Kind::Value:
      break;
  }
  if (q == 0) return false;
  const Padic x = from_rational(q, p_, n_);
  return x.v_ == v_ && x.u_ == u_;
}

std::string Padic::to_string() const {
  switch (kind_) {
    case Kind::Zero:
      return "0";
    case Kind::Bounded:
      return "O(" + std::to_string(p_) + "^" + std::to_string(v_) + ")";
    case Kind::Value:
      break;
  }
  return u_.get_str() + "*" + std::to_string(p_) + "^" + std::to_string(v_) + " + O(" + std::to_string(p_) + "^" +
         std::to_string(v_ + n_) + ")";
}

Jet coordinate_jet(const Chart& chart, const std::vector<Rational>& s0, int r) {
  const std::size_t n = chart.symbols->size();
  if (s0.size() != n) throw ShapeError("base point needs one value per chart variable");
  std::vector<QSeries> coords;
  for (std::size_t i = 0; i < n; ++i) {
    QSeries s = QSeries::constant(static_cast<int>(n), r, s0[i]);
    if (r >= 1) s[s.algebra().unit_index(static_cast<int>(i))] = 1;
    coords.push_back(s);
  }
  return Jet{chart, static_cast<int>(n), r, std::move(coords)};
}

PadicFrame padic_frame(const ConnectionData& conn, long p, const std::vector<Rational>& s0, const QMatrix& P, int r,
                       int precision) {
  if (!conn.flat) throw Error("connection is not flat; the frame equations have no solution");
  if (!conn.chart.relations.is_zero_ideal())
    throw InputError("the p-adic solver needs a chart without relations");
  if (r < 0) throw InputError("order must be non-negative");
  const std::size_t n = conn.n();
  if (s0.size() != n) throw ShapeError("base point needs one value per chart variable");
  for (std::size_t i = 0; i < n; ++i)
    if (s0[i] != 0 && padic_valuation(s0[i], p) < 0)
      throw BadReductionError("base point coordinate " + conn.chart.symbols->name(i) + " is not " +
                              std::to_string(p) + "-integral");
  std::vector<Padic> unit_inv;
  for (const auto& u : *conn.units) {
    const Rational v = u.evaluate(s0);
    if (v == 0 || padic_valuation(v, p) != 0)
      throw BadReductionError("unit " + u.to_string() + " is not a " + std::to_string(p) + "-adic unit at the base point");
    unit_inv.push_back(Padic::from_rational(v, p, precision).inverse());
  }
  for (const auto& cl : conn.c)
    for (const auto& q : cl.data())
      for (const auto& t : q.numerator().terms())
        if (padic_valuation(t.coeff, p) < 0)
          throw BadReductionError("connection coefficient " + q.to_string() + " is not " + std::to_string(p) +
                                  "-integral");
  for (const auto& x : P.data())
    if (x != 0 && padic_valuation(x, p) < 0) throw BadReductionError("initial frame is not p-integral");
  const Rational det = determinant(P);
  if (det == 0 || padic_valuation(det, p) != 0) throw BadReductionError("initial frame is not invertible over Z_p");

  const SeriesRing<Padic> R{Padic(), Padic::from_rational(1, p, precision),
                            [p, precision](const Rational& q) { return Padic::from_rational(q, p, precision); }};
  const Jet j = coordinate_jet(conn.chart, s0, r);
  std::vector<TruncSeries<Padic>> z;
  for (const auto& c : j.coords) {
    TruncSeries<Padic> s(c.d(), c.r(), R.zero);
    for (std::size_t a = 0; a < c.size(); ++a) s[a] = R.from(c[a]);
    z.push_back(s);
  }
  const auto B = pulled_back_connection<Padic>(conn, z, unit_inv, R);
  PadicFrame out;
  out.p = p;
  out.precision = precision;
  out.base = s0;
  out.f = solve_frame<Padic>(B, P.map([&](const Rational& q) { return R.from(q); }), static_cast<int>(n), r, R);
  return out;
}

std::map<int, std::optional<int>> padic_valuation_report(const PadicFrame& f) {
  std::map<int, std::optional<int>> table;
  if (f.f.rows() == 0) return table;
  const auto& alg = f.f(0, 0).algebra();
  for (int e = 0; e <= alg.r; ++e) table[e] = std::nullopt;
  for (const auto& s : f.f.data())
    for (std::size_t a = 0; a < s.size(); ++a) {
      const auto v = s[a].valuation();
      if (!v) continue;
      auto& slot = table[index_weight(alg.basis[a])];
      slot = slot ? std::min(*slot, *v) : *v;
    }
  return table;
}

nlohmann::json padic_report_json(const PadicFrame& f) {
  nlohmann::json js;
  js["p"] = f.p;
  js["precision"] = f.precision;
  nlohmann::json table = nlohmann::json::object(), bound = nlohmann::json::object();
  bool ok = true;
  for (const auto& [e, v] : padic_valuation_report(f)) {
    const int b = -(e / static_cast<int>(f.p - 1));
    table[std::to_string(e)] = v ? nlohmann::json(*v) : nlohmann::json("+inf");
    bound[std::to_string(e)] = b;
    if (v && *v < b) ok = false;
  }
  js["min_valuation"] = table;
  js["bound"] = bound;
  js["bound_check"] = ok ? "PASS" : "FAIL";
  return js;
}

}  // namespace hodgejet
