#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hodgejet/gaussmanin/padic.hpp"

using namespace hodgejet;

namespace {

nlohmann::json legendre_json() {
  return nlohmann::json::parse(R"JS({
    "variables": ["lambda"], "relations": [], "units": ["lambda", "1-lambda"],
    "m": 2, "filtration": [1],
    "c": {"lambda": [["0", "1"], ["1/(4*lambda*(1-lambda))", "(2*lambda-1)/(lambda*(1-lambda))"]]}
  })JS");
}

ConnectionData scalar_connection(const std::string& c) {
  return connection_from_json(nlohmann::json{
      {"variables", {"z"}}, {"m", 1}, {"filtration", {1}}, {"c", {{"z", {{c}}}}}});
}

Jet line_jet(const Chart& chart, std::vector<Rational> base, const std::vector<std::vector<Rational>>& L, int d, int r) {
  std::vector<QSeries> coords;
  for (std::size_t i = 0; i < base.size(); ++i) {
    QSeries s = QSeries::constant(d, r, base[i]);
    if (r >= 1)
      for (int a = 0; a < d; ++a) s[s.algebra().unit_index(a)] = L[i][static_cast<std::size_t>(a)];
    coords.push_back(s);
  }
  return Jet{chart, d, r, coords};
}

// Power series solutions of the Picard-Fuchs equation
// lambda(1-lambda)u'' + (1-2 lambda)u' - u/4 = 0 around lambda = 2, by the
// coefficient recurrence of the equation in t = lambda - 2.
std::vector<Rational> pf_solution(Rational a0, Rational a1, int order) {
  std::vector<Rational> a{a0, a1};
  for (int n = 0; static_cast<int>(a.size()) <= order; ++n) {
    const Rational k(n);
    const Rational next = -(3 * (k + 1) * (k + 1) * a[static_cast<std::size_t>(n + 1)] +
                            (k + Rational(1, 2)) * (k + Rational(1, 2)) * a[static_cast<std::size_t>(n)]) /
                          (2 * (k + 1) * (k + 2));
    a.push_back(next);
  }
  return a;
}

Rational factorial(int n) { return n <= 1 ? Rational(1) : Rational(n) * factorial(n - 1); }

MultiPoly random_poly(std::mt19937& rng, const Symbols& s, int degree) {
  std::uniform_int_distribution<int> coeff(-2, 2);
  MultiPoly p(s);
  const std::size_t n = s->size();
  std::vector<Monomial> monos{Monomial(n, 0)};
  for (int deg = 1; deg <= degree; ++deg)
    for (std::size_t v = 0; v < n; ++v) {
      Monomial mo(n, 0);
      mo[v] = static_cast<Exponent>(deg);
      monos.push_back(mo);
      if (n == 2 && deg == 2) monos.push_back(Monomial{1, 1});
    }
  std::vector<Term> terms;
  for (const auto& mo : monos)
    if (int c = coeff(rng)) terms.push_back({mo, Rational(c)});
  return MultiPoly::from_terms(s, terms);
}

QMatrix random_invertible(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> dist(-3, 3);
  for (;;) {
    QMatrix x(n, n, Rational(0));
    for (auto& v : const_cast<std::vector<Rational>&>(x.data())) v = dist(rng);
    if (determinant(x) != 0) return x;
  }
}

// Flat connection from a known frame K exp(h) G(z), G unipotent upper
// triangular with polynomial entries: -C_l^T = K (d_l G) G^-1 K^-1 + d_l h.
ConnectionData random_flat_connection(std::mt19937& rng, std::size_t m, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("z" + std::to_string(i + 1));
  const Symbols s = make_symbols(names);
  const MultiPoly zero(s), one(s, Rational(1));
  const UnitList none = std::make_shared<const std::vector<MultiPoly>>();
  std::vector<FractionMatrix> c;
  if (n == 1 && rng() % 2 == 0) {
    // No compatibility condition on a curve: any polynomial matrix works.
    FractionMatrix cl(m, m, ChartFraction::polynomial(zero, none));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) cl(i, j) = ChartFraction::polynomial(random_poly(rng, s, 2), none);
    c.push_back(cl);
  } else {
    Matrix<MultiPoly> G = Matrix<MultiPoly>::identity(m, zero, one);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) G(i, j) = random_poly(rng, s, 1);
    Matrix<MultiPoly> N = Matrix<MultiPoly>::identity(m, zero, one) - G, Ginv = Matrix<MultiPoly>::identity(m, zero, one),
                      power = Ginv;
    for (std::size_t k = 1; k < m; ++k) {
      power = power * N;
      Ginv = Ginv + power;
    }
    const QMatrix K = random_invertible(rng, m), Kinv = inverse(K);
    auto lift = [&](const QMatrix& x) { return x.map([&](const Rational& q) { return MultiPoly(s, q); }); };
    const MultiPoly h = random_poly(rng, s, 2);
    for (std::size_t l = 0; l < n; ++l) {
      Matrix<MultiPoly> minus_ct =
          lift(K) * G.map([&](const MultiPoly& p) { return p.derivative(l); }) * Ginv * lift(Kinv);
      for (std::size_t i = 0; i < m; ++i) minus_ct(i, i) = minus_ct(i, i) + h.derivative(l);
      FractionMatrix cl(m, m, ChartFraction::polynomial(zero, none));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) cl(i, j) = ChartFraction::polynomial(-minus_ct(j, i), none);
      c.push_back(cl);
    }
  }
  FlagShape shape{static_cast<int>(m), {}};
  for (std::size_t i = 1; i <= m; ++i) shape.dims.push_back(static_cast<int>(i));
  return make_connection(Chart{s, Ideal(s), {}}, shape, std::move(c));
}

}  // namespace

TEST_CASE("connection validation examples") {
  const auto leg = connection_from_json(legendre_json());
  CHECK(leg.flat);
  CHECK(validate_connection(leg).valid());

  const auto trivial = connection_from_json(nlohmann::json::parse(R"JS({
    "variables": ["a", "b"], "m": 2, "filtration": [1], "c": {}})JS"));
  CHECK(validate_connection(trivial).valid());

  // Any connection on a curve is flat.
  CHECK(scalar_connection("z^3-2*z+7").flat);

  // Constant non-commuting matrices on a surface are curved.
  const auto curved = connection_from_json(nlohmann::json::parse(R"JS({
    "variables": ["a", "b"], "m": 2, "filtration": [1, 2],
    "c": {"a": [["0", "1"], ["0", "0"]], "b": [["0", "0"], ["1", "0"]]}})JS"));
  CHECK_FALSE(curved.flat);
  const auto rep = validate_connection(curved);
  CHECK_FALSE(rep.valid());
  CHECK_FALSE(rep.failures.empty());

  // Transversality: the first step may only move into the second.
  const auto jump = connection_from_json(nlohmann::json::parse(R"JS({
    "variables": ["z"], "m": 3, "filtration": [1, 2], "c": {"z": [["0", "0", "1"], ["0", "0", "0"], ["0", "0", "0"]]}})JS"));
  CHECK(jump.flat);
  CHECK_FALSE(validate_connection(jump).transversal);
  CHECK(validate_connection(jump, false).valid());
}

TEST_CASE("undeclared denominators are rejected with a location") {
  auto js = legendre_json();
  js["units"] = {"lambda"};
  try {
    connection_from_json(js);
    FAIL("expected an input error");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("/c/lambda/1/") != std::string::npos);
    CHECK(msg.find("c-entry") != std::string::npos);
  }
}

TEST_CASE("connection JSON round trip") {
  const auto leg = connection_from_json(legendre_json());
  const auto again = connection_from_json(connection_to_json(leg));
  CHECK(connection_to_json(again) == connection_to_json(leg));
}

TEST_CASE("xi examples") {
  const auto conn = scalar_connection("z^2+1");
  const Symbols s = conn.chart.symbols;
  const auto c = parse_poly("z^2+1", s);
  CHECK(xi_polynomials(conn, {0})(0, 0).numerator() == -c);
  CHECK(xi_polynomials(conn, {0, 0})(0, 0).numerator() == c * c - c.derivative(0));
  const auto zero = connection_from_json(nlohmann::json::parse(R"JS({
    "variables": ["a", "b"], "m": 2, "filtration": [1], "c": {}})JS"));
  for (const auto& w : std::vector<std::vector<int>>{{0}, {1, 0}, {0, 1, 1}})
    for (const auto& q : xi_polynomials(zero, w).data()) CHECK(q.is_zero());
}

TEST_CASE("flat frame examples") {
  // Trivial connection: the frame is constant.
  const auto zero = connection_from_json(nlohmann::json::parse(R"JS({
    "variables": ["a"], "m": 2, "filtration": [1], "c": {}})JS"));
  const Jet j0 = line_jet(zero.chart, {Rational(3)}, {{Rational(2)}}, 1, 3);
  const QMatrix P = [] {
    QMatrix x(2, 2, Rational(0));
    x(0, 0) = 2;
    x(0, 1) = 1;
    x(1, 1) = -1;
    return x;
  }();
  const auto F0 = flat_frame_jet(zero, j0, P);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) CHECK(F0.f(i, k) == QSeries::constant(1, 3, P(i, k)));

  // Constant scalar connection: exp(-alpha t).
  const Rational alpha(3, 2);
  const auto sc = scalar_connection("3/2");
  const auto F = flat_frame_jet(sc, line_jet(sc.chart, {Rational(5)}, {{Rational(1)}}, 1, 2), identity_q(1));
  CHECK(F.f(0, 0)[0] == 1);
  CHECK(F.f(0, 0)[1] == -alpha);
  CHECK(F.f(0, 0)[2] == alpha * alpha / 2);

  // Legendre: A = f^-1 is the transposed fundamental matrix of the
  // Picard-Fuchs equation.
  const auto leg = connection_from_json(legendre_json());
  const int r = 3;
  const Jet j = line_jet(leg.chart, {Rational(2)}, {{Rational(1)}}, 1, r);
  const auto pj = period_jet(leg, j);
  const auto u1 = pf_solution(1, 0, r + 1), u2 = pf_solution(0, 1, r + 1);
  for (int e = 0; e <= r; ++e) {
    const auto i = static_cast<std::size_t>(e);
    CHECK(pj.A(0, 0)[i] == u1[i]);
    CHECK(pj.A(1, 0)[i] == u2[i]);
    CHECK(pj.A(0, 1)[i] == (e + 1) * u1[i + 1]);
    CHECK(pj.A(1, 1)[i] == (e + 1) * u2[i + 1]);
  }
  const auto frame = flat_frame_jet(leg, j, identity_q(2));
  const auto prod = frame.f * pj.A;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) CHECK(prod(a, b) == QSeries::constant(1, r, Rational(a == b ? 1 : 0)));

  CHECK_THROWS_AS(flat_frame_jet(leg, line_jet(leg.chart, {Rational(1)}, {{Rational(1)}}, 1, 2), identity_q(2)),
                  PoleError);
}

TEST_CASE("xi words agree with the solver") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> small(-3, 3);
  int instances = 0;
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 1 + static_cast<std::size_t>(t % 3), n = 1 + static_cast<std::size_t>((t / 3) % 2);
    const ConnectionData conn = random_flat_connection(rng, m, n);
    REQUIRE(conn.flat);
    const int d = 1 + (t % 2);
    std::vector<Rational> base;
    std::vector<std::vector<Rational>> L(n, std::vector<Rational>(static_cast<std::size_t>(d)));
    for (std::size_t i = 0; i < n; ++i) {
      base.push_back(small(rng));
      for (auto& x : L[i]) x = small(rng);
    }
    const int r = 3;
    const Jet j = line_jet(conn.chart, base, L, d, r);
    const QMatrix P = random_invertible(rng, m);
    const auto F = flat_frame_jet(conn, j, P);
    XiTable xi(conn);
    const auto& alg = F.f(0, 0).algebra();
    for (std::size_t idx = 1; idx < alg.size(); ++idx) {
      const MultiIndex& alpha = alg.basis[idx];
      // d_t^alpha = prod_a (sum_l L[l][a] d_l)^alpha_a on a linear arc.
      std::vector<int> slots;
      for (int a = 0; a < d; ++a)
        for (int k = 0; k < alpha[static_cast<std::size_t>(a)]; ++k) slots.push_back(a);
      QMatrix expected(m, m, Rational(0));
      std::vector<int> word(slots.size(), 0);
      for (;;) {
        Rational weight(1);
        for (std::size_t s = 0; s < slots.size(); ++s)
          weight *= L[static_cast<std::size_t>(word[s])][static_cast<std::size_t>(slots[s])];
        if (weight != 0) {
          const auto& X = xi.get(word);
          QMatrix at(m, m, Rational(0));
          for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) at(a, b) = X(a, b).evaluate(base);
          const QMatrix contrib = at * P;
          for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) expected(a, b) += weight * contrib(a, b);
        }
        std::size_t pos = 0;
        while (pos < word.size() && ++word[pos] == static_cast<int>(n)) word[pos++] = 0;
        if (pos == word.size()) break;
      }
      Rational alpha_fact(1);
      for (int v : alpha) alpha_fact *= factorial(v);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) CHECK(alpha_fact * F.f(a, b)[idx] == expected(a, b));
    }
    ++instances;
  }
  CHECK(instances >= 50);
}

TEST_CASE("gauge equivariance of the frame") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> small(-3, 3);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 1 + static_cast<std::size_t>(t % 3), n = 1 + static_cast<std::size_t>(t % 2);
    const ConnectionData conn = random_flat_connection(rng, m, n);
    std::vector<Rational> base;
    std::vector<std::vector<Rational>> L(n, std::vector<Rational>(2));
    for (std::size_t i = 0; i < n; ++i) {
      base.push_back(small(rng));
      for (auto& x : L[i]) x = small(rng);
    }
    Jet j = line_jet(conn.chart, base, L, 2, 3);
    // Add a random quadratic part so the arc is not a line.
    for (auto& c : j.coords) c[3] = small(rng);
    const QMatrix P = random_invertible(rng, m);
    const auto Fid = flat_frame_jet(conn, j, identity_q(m));
    const auto FP = flat_frame_jet(conn, j, P);
    const auto lifted = P.map([&](const Rational& q) { return QSeries::constant(2, 3, q); });
    // d f = -C^T f is linear on the left, so constants act on the right of
    // f and on the left of A = f^-1.
    CHECK(Fid.f * lifted == FP.f);
    const auto Pinv = inverse(P).map([&](const Rational& q) { return QSeries::constant(2, 3, q); });
    const SeriesRing<Rational> R{Rational(0), Rational(1), [](const Rational& q) { return q; }};
    CHECK(Pinv * series_matrix_inverse<Rational>(Fid.f, identity_q(m), R) ==
          series_matrix_inverse<Rational>(FP.f, inverse(P), R));
  }
}

TEST_CASE("curvature makes the solve order matter") {
  const auto curved = connection_from_json(nlohmann::json::parse(R"JS({
    "variables": ["a", "b"], "m": 2, "filtration": [1, 2],
    "c": {"a": [["0", "1"], ["0", "0"]], "b": [["0", "0"], ["1", "0"]]}})JS"));
  const Jet j = line_jet(curved.chart, {Rational(0), Rational(0)}, {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}, 2, 2);
  const SeriesRing<Rational> R{Rational(0), Rational(1), [](const Rational& q) { return q; }};
  const auto B = pulled_back_connection<Rational>(curved, j.coords, {}, R);
  const auto first = solve_frame<Rational>(B, identity_q(2), 2, 2, R, false);
  const auto last = solve_frame<Rational>(B, identity_q(2), 2, 2, R, true);
  const std::size_t mixed = first(0, 0).algebra().position({1, 1});
  bool differs = false;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) differs = differs || first(a, b)[mixed] != last(a, b)[mixed];
  CHECK(differs);
  CHECK_THROWS_AS(flat_frame_jet(curved, j, identity_q(2)), Error);
}

TEST_CASE("period jet examples") {
  const auto zero = connection_from_json(nlohmann::json::parse(R"JS({
    "variables": ["a"], "m": 2, "filtration": [1], "c": {}})JS"));
  const auto pz = period_jet(zero, line_jet(zero.chart, {Rational(1)}, {{Rational(1)}}, 1, 2));
  CHECK(pz.chart.pivots == standard_chart(zero.shape).pivots);
  for (const auto& c : pz.coords) CHECK(c == QSeries(1, 2));

  const auto leg = connection_from_json(legendre_json());
  const auto p1 = period_jet(leg, line_jet(leg.chart, {Rational(2)}, {{Rational(1)}}, 1, 1));
  REQUIRE(p1.coords.size() == 1);
  CHECK(p1.coords[0][0] == 0);
  CHECK(p1.coords[0][1] != 0);

  // Restriction commutes with the period jet.
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> small(-4, 4);
  for (int t = 0; t < 10; ++t) {
    Jet j = line_jet(leg.chart, {Rational(2 + t % 3 + 1)}, {{Rational(small(rng)), Rational(small(rng))}}, 2, 3);
    for (std::size_t a = 3; a < j.coords[0].size(); ++a) j.coords[0][a] = small(rng);
    const auto full = period_jet(leg, j);
    for (int e = 0; e <= 2; ++e) {
      const auto part = period_jet(leg, restrict_jet(j, e));
      REQUIRE(part.coords.size() == full.coords.size());
      for (std::size_t v = 0; v < part.coords.size(); ++v) CHECK(part.coords[v] == full.coords[v].restrict_to(e, 3));
    }
  }
}

TEST_CASE("p-adic arithmetic") {
  const auto a = Padic::from_rational(Rational(10, 3), 5, 6);
  CHECK(a.valuation() == 1);
  CHECK((a * a.inverse()).agrees_with(1));
  CHECK((a - a).is_bounded_zero());
  CHECK_THROWS_AS((a - a).inverse(), PrecisionError);
  CHECK((a + Padic()).agrees_with(Rational(10, 3)));
  const auto b = Padic::from_rational(Rational(7, 25), 5, 6);
  CHECK((a + b).agrees_with(Rational(10, 3) + Rational(7, 25)));
  CHECK((a * b).agrees_with(Rational(70, 75)));
}

TEST_CASE("p-adic frames") {
  // Trivial connection: constant integral frame.
  const auto zero = connection_from_json(nlohmann::json::parse(R"JS({
    "variables": ["a"], "m": 2, "filtration": [1], "c": {}})JS"));
  const auto fz = padic_frame(zero, 5, {Rational(2)}, identity_q(2), 4, 10);
  for (const auto& [deg, v] : padic_valuation_report(fz)) {
    if (deg == 0) CHECK(v == 0);
    else CHECK_FALSE(v.has_value());
  }
  CHECK(padic_report_json(fz)["min_valuation"]["1"] == "+inf");

  // exp(-t) at p = 3: valuations are -v_3(e!).
  const auto one = scalar_connection("1");
  const auto f1 = padic_frame(one, 3, {Rational(0)}, identity_q(1), 9, 12);
  for (int e = 0; e <= 9; ++e) {
    const Rational expect = Rational(e % 2 ? -1 : 1) / factorial(e);
    CHECK(f1.f(0, 0)[static_cast<std::size_t>(e)].agrees_with(expect));
    CHECK(f1.f(0, 0)[static_cast<std::size_t>(e)].valuation() == padic_valuation(expect, 3));
  }

  // Legendre at p = 5, lambda = 2: bound check and agreement with the exact solve.
  const auto leg = connection_from_json(legendre_json());
  const int r = 8;
  const auto fp = padic_frame(leg, 5, {Rational(2)}, identity_q(2), r, 20);
  const auto exact = flat_frame_jet(leg, coordinate_jet(leg.chart, {Rational(2)}, r), identity_q(2));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t a = 0; a <= static_cast<std::size_t>(r); ++a) CHECK(fp.f(i, k)[a].agrees_with(exact.f(i, k)[a]));
  const auto table = padic_valuation_report(fp);
  for (const auto& [deg, v] : table)
    if (v) CHECK(*v >= -(deg / 4));
  CHECK(padic_report_json(fp)["bound_check"] == "PASS");

  CHECK_THROWS_AS(padic_frame(leg, 2, {Rational(2)}, identity_q(2), 3, 10), BadReductionError);
  CHECK_THROWS_AS(padic_frame(leg, 5, {Rational(1, 5)}, identity_q(2), 3, 10), BadReductionError);
}
