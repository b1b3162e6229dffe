#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hodgejet/jetcalc/jet.hpp"

using namespace hodgejet;

namespace {

Chart free_chart(std::vector<std::string> names, std::vector<const char*> rels = {},
                 std::vector<const char*> units = {}) {
  auto s = make_symbols(std::move(names));
  std::vector<MultiPoly> r, u;
  for (auto* t : rels) r.push_back(parse_poly(t, s));
  for (auto* t : units) u.push_back(parse_poly(t, s));
  return Chart{s, Ideal(s, r), u};
}

QSeries series1(int r, std::vector<long> c) {
  QSeries s(1, r, Rational(0));
  for (std::size_t i = 0; i < c.size() && i < s.size(); ++i) s[i] = c[i];
  return s;
}

// Independent oracle: expand in K[t_1..t_d] without truncation, then drop
// monomials of degree > r.
MultiPoly naive_compose(const MultiPoly& f, const Jet& j) {
  std::vector<std::string> tn;
  for (int i = 0; i < j.d; ++i) tn.push_back("t" + std::to_string(i + 1));
  auto ts = make_symbols(tn);
  std::vector<MultiPoly> images;
  for (const auto& c : j.coords) {
    std::vector<Term> terms;
    for (std::size_t a = 0; a < c.size(); ++a) {
      if (c[a] == 0) continue;
      Monomial m;
      for (int v : c.algebra().basis[a]) m.push_back(static_cast<std::uint16_t>(v));
      terms.push_back({m, c[a]});
    }
    images.push_back(MultiPoly::from_terms(ts, terms));
  }
  MultiPoly full = f.substitute(images, ts);
  std::vector<Term> kept;
  for (const auto& t : full.terms())
    if (monomial_degree(t.mono) <= j.r) kept.push_back(t);
  return MultiPoly::from_terms(ts, kept);
}

}  // namespace

TEST_CASE("disk basis") {
  CHECK(disk_basis(1, 2) == std::vector<MultiIndex>{{0}, {1}, {2}});
  CHECK(disk_basis(2, 1) == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}});
  CHECK(disk_basis(2, 2).size() == 6);
  CHECK(disk_basis(0, 3).size() == 1);
  // binomial(d+r, d) bookkeeping
  for (int d = 0; d <= 3; ++d) {
    for (int r = 0; r <= 4; ++r) {
      long b = 1;
      for (int k = 1; k <= d; ++k) b = b * (r + k) / k;
      CHECK(static_cast<long>(disk_basis(d, r).size()) == b);
      CHECK(QSeries(d, r, Rational(0)).size() == static_cast<std::size_t>(b));
    }
  }
}

TEST_CASE("series composition examples") {
  auto ch = free_chart({"x"}, {}, {"x"});
  Jet j = make_jet(ch, 1, 2, {series1(2, {1, 1})});
  auto x = parse_poly("x", ch.symbols);
  CHECK(series_compose(x * x, j) == series1(2, {1, 2, 1}));
  auto units = std::make_shared<const std::vector<MultiPoly>>(ch.units);
  auto inv = parse_fraction("1/x", ch.symbols, units);
  CHECK(series_compose(inv, j) == series1(2, {1, -1, 1}));

  Jet at_pole = make_jet(ch, 1, 2, {series1(2, {0, 1})});
  CHECK_THROWS_AS(series_compose(inv, at_pole), PoleError);

  auto ch2 = free_chart({"x", "y"});
  QSeries tx(2, 1, Rational(0)), ty(2, 1, Rational(0));
  tx.coefficient({1, 0}) = 1;
  ty.coefficient({0, 1}) = 1;
  Jet j2 = make_jet(ch2, 2, 1, {tx, ty});
  auto xy = series_compose(parse_poly("x*y", ch2.symbols), j2);
  for (std::size_t a = 0; a < xy.size(); ++a) CHECK(xy[a] == 0);
}

TEST_CASE("prolongation examples") {
  auto ch = free_chart({"x", "y"}, {"x^2 - y"});
  auto sp = prolong_ideal(ch, 1, 1);
  std::vector<std::string> gens;
  for (const auto& g : sp.ideal.generators()) gens.push_back(g.to_string());
  CHECK(gens == std::vector<std::string>{"x[0]^2 - y[0]", "2*x[0]*x[1] - y[1]"});
  CHECK(sp.symbols->names() == std::vector<std::string>{"x[0]", "x[1]", "y[0]", "y[1]"});

  auto free3 = prolong_ideal(free_chart({"a", "b", "c"}), 2, 2);
  CHECK(free3.symbols->size() == 3 * 6);
  CHECK(free3.ideal.is_zero_ideal());

  auto r0 = prolong_ideal(ch, 2, 0);
  REQUIRE(r0.ideal.generators().size() == 1);
  CHECK(r0.ideal.generators()[0].to_string() == "x[0,0]^2 - y[0,0]");
}

TEST_CASE("prolonged units live on order-zero coordinates") {
  auto ch = free_chart({"lambda"}, {}, {"lambda", "lambda - 1"});
  auto sp = prolong_ideal(ch, 1, 2);
  REQUIRE(sp.units.size() == 2);
  CHECK(sp.units[1].to_string() == "lambda[0] - 1");
}

TEST_CASE("restriction and truncation") {
  auto ch = free_chart({"x"});
  QSeries s(2, 1, Rational(0));
  s.coefficient({0, 0}) = 1;
  s.coefficient({1, 0}) = 1;
  s.coefficient({0, 1}) = 1;
  Jet j = make_jet(ch, 2, 1, {s});
  Jet e1 = restrict_jet(j, 1);
  CHECK(e1.coords[0] == series1(1, {1, 1}));
  CHECK(restrict_jet(j, 2).coords[0] == s);
  Jet e0 = restrict_jet(j, 0);
  CHECK(e0.coords[0].size() == 1);
  CHECK(e0.coords[0][0] == 1);
}

TEST_CASE("non-degeneracy families") {
  auto a2 = prolong_ideal(free_chart({"x", "y"}), 1, 2);
  auto nd = nondegeneracy_stratum(a2, 1);
  std::vector<std::string> g;
  for (const auto& p : nd.generators()) g.push_back(p.to_string());
  CHECK(g == std::vector<std::string>{"x[1]", "y[1]"});

  auto a1 = prolong_ideal(free_chart({"x"}), 2, 1);
  CHECK(nondegeneracy_stratum(a1, 2).is_zero_ideal());

  auto a3 = prolong_ideal(free_chart({"x", "y", "z"}), 2, 1);
  CHECK(nondegeneracy_stratum(a3, 2).generators().size() == 3);

  auto r0 = prolong_ideal(free_chart({"x"}), 1, 0);
  CHECK_THROWS_AS(nondegeneracy_stratum(r0, 1), InputError);
}

TEST_CASE("jets on varieties") {
  auto ch = free_chart({"x", "y"}, {"y - x^2"});
  Jet on = make_jet(ch, 1, 2, {series1(2, {1, 1}), series1(2, {1, 2, 1})});
  CHECK(is_jet_on_variety(on, ch.relations));
  Jet off = make_jet(ch, 1, 2, {series1(2, {0, 1}), series1(2, {0, 1})});
  CHECK_FALSE(is_jet_on_variety(off, ch.relations));

  // Arc on the cusp z^2 = y^3 from y = s^2, z = s^3 with s a random series.
  auto cusp = free_chart({"y", "z"}, {"z^2 - y^3"});
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    QSeries sarc(2, 4, Rational(0));
    for (std::size_t a = 0; a < sarc.size(); ++a) sarc[a] = Rational(static_cast<long>(rng() % 11) - 5, 1 + rng() % 3);
    Jet arc = make_jet(cusp, 2, 4, {sarc * sarc, sarc * sarc * sarc});
    CHECK(is_jet_on_variety(arc, cusp.relations));
  }
}

TEST_CASE("prolongation agrees with composition on random instances") {
  std::mt19937_64 rng(99);
  auto rnd = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); };
  int on_count = 0, off_count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rnd(2, 3);
    std::vector<std::string> names{"x", "y", "z"};
    names.resize(static_cast<std::size_t>(n));
    auto s = make_symbols(names);
    const int d = rnd(1, 2), r = rnd(1, 3);
    // Triangular relations x_k = q_k(x_0..x_{k-1}) of degree <= 3, multiplied
    // by random factors, so jets on the variety can be built directly.
    auto random_poly = [&](int upto, int maxdeg) {
      std::vector<Term> terms;
      for (int k = 0; k < 3; ++k) {
        Monomial m(static_cast<std::size_t>(n), 0);
        int left = rnd(0, maxdeg);
        for (int v = 0; v < upto && left > 0; ++v) {
          const int e = rnd(0, left);
          m[static_cast<std::size_t>(v)] = static_cast<std::uint16_t>(e);
          left -= e;
        }
        terms.push_back({m, Rational(rnd(-3, 3))});
      }
      return MultiPoly::from_terms(s, terms);
    };
    std::vector<MultiPoly> qs, gens;
    for (int k = 1; k < n; ++k) {
      qs.push_back(random_poly(k, 3));
      MultiPoly rel = MultiPoly::variable(s, static_cast<std::size_t>(k)) - qs.back();
      if (rnd(0, 1)) rel = rel * (random_poly(n, 1) + MultiPoly(s, Rational(1)));
      gens.push_back(rel);
    }
    Chart ch{s, Ideal(s, gens), {}};
    auto sp = prolong_ideal(ch, d, r);

    QSeries x0(d, r, Rational(0));
    for (std::size_t a = 0; a < x0.size(); ++a) x0[a] = Rational(rnd(-4, 4), rnd(1, 3));
    std::vector<QSeries> coords{x0};
    Jet partial{Chart{s, Ideal(s), {}}, d, r, {}};
    for (int k = 1; k < n; ++k) {
      std::vector<QSeries> padded = coords;
      while (padded.size() < static_cast<std::size_t>(n)) padded.emplace_back(d, r, Rational(0));
      partial.coords = padded;
      coords.push_back(series_compose(qs[static_cast<std::size_t>(k - 1)], partial));
    }
    Jet j = make_jet(ch, d, r, coords);
    if (trial % 2) {
      auto& c = j.coords[static_cast<std::size_t>(rnd(0, n - 1))];
      c[static_cast<std::size_t>(rnd(0, static_cast<int>(c.size()) - 1))] += 1;
    }

    std::vector<Rational> flat;
    for (const auto& c : j.coords)
      for (std::size_t a = 0; a < c.size(); ++a) flat.push_back(c[a]);
    bool prolonged_ok = true;
    for (const auto& g : sp.ideal.generators())
      if (g.evaluate(flat) != 0) prolonged_ok = false;
    bool oracle_ok = true;
    for (const auto& g : gens)
      if (!naive_compose(g, j).is_zero()) oracle_ok = false;
    const bool direct = is_jet_on_variety(j, ch.relations);
    CHECK(prolonged_ok == direct);
    CHECK(oracle_ok == direct);
    (direct ? on_count : off_count)++;

    // Tower compatibility: truncation stays on the lower prolongation.
    if (direct && r > 1) CHECK(is_jet_on_variety(truncate_jet(j, r - 1), ch.relations));
  }
  CHECK(on_count >= 90);
  CHECK(off_count >= 50);
}

TEST_CASE("functoriality of restriction") {
  auto src = free_chart({"x", "y"});
  auto s = src.symbols;
  auto units = std::make_shared<const std::vector<MultiPoly>>();
  std::vector<ChartFraction> map{parse_fraction("x*y + 1", s, units), parse_fraction("x^2 - y^3", s, units),
                                 parse_fraction("2*x", s, units)};
  auto tgt = free_chart({"u", "v", "w"});
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<QSeries> c;
    for (int v = 0; v < 2; ++v) {
      QSeries q(2, 3, Rational(0));
      for (std::size_t a = 0; a < q.size(); ++a) q[a] = Rational(static_cast<long>(rng() % 9) - 4);
      c.push_back(q);
    }
    Jet j = make_jet(src, 2, 3, c);
    Jet img = make_jet(tgt, 2, 3, push_forward(map, j));
    Jet lhs = restrict_jet(img, 1);
    Jet rhs = make_jet(tgt, 1, 3, push_forward(map, restrict_jet(j, 1)));
    for (std::size_t v = 0; v < 3; ++v) CHECK(lhs.coords[v] == rhs.coords[v]);
  }
}

TEST_CASE("jet json round trip") {
  auto ch = free_chart({"x", "y"});
  QSeries a(2, 2, Rational(0)), b(2, 2, Rational(0));
  a.coefficient({1, 0}) = Rational(1, 2);
  b.coefficient({0, 2}) = Rational(-3);
  Jet j = make_jet(ch, 2, 2, {a, b});
  auto js = jet_to_json(j);
  CHECK(js["x"]["1,0"] == "1/2");
  Jet back = jet_from_json(js, ch);
  CHECK(back.d == 2);
  CHECK(back.r == 2);
  CHECK(back.coords[0] == a);
  CHECK(back.coords[1] == b);
  CHECK_THROWS_AS(jet_from_json(nlohmann::json{{"q", {{"0", "1"}}}}, ch), InputError);
}
