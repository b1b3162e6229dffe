#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "hodgejet/hodgeflags/catalog.hpp"

using namespace hodgejet;

namespace {

QMatrix q(std::vector<std::vector<long>> rows) {
  QMatrix x(rows.size(), rows[0].size(), Rational(0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) x(i, j) = Rational(rows[i][j]);
  return x;
}

QMatrix random_matrix(std::mt19937& rng, std::size_t n, int lo = -3, int hi = 3) {
  std::uniform_int_distribution<int> dist(lo, hi);
  QMatrix x(n, n, Rational(0));
  for (auto r = 0u; r < n; ++r)
    for (auto c = 0u; c < n; ++c) x(r, c) = Rational(dist(rng));
  return x;
}

QMatrix random_invertible(std::mt19937& rng, std::size_t n) {
  for (;;) {
    QMatrix x = random_matrix(rng, n);
    if (determinant(x) != 0) return x;
  }
}

// Column spans compared directly: rank of [A | B] equals rank of each.
bool same_spans(const QMatrix& a, const QMatrix& b, const FlagShape& shape) {
  for (int ik : shape.dims) {
    std::vector<std::size_t> rows, cols;
    for (int i = 0; i < shape.m; ++i) rows.push_back(static_cast<std::size_t>(i));
    for (int j = 0; j < ik; ++j) cols.push_back(static_cast<std::size_t>(j));
    const QMatrix sa = a.select(rows, cols), sb = b.select(rows, cols);
    QMatrix both(rows.size(), 2 * cols.size(), Rational(0));
    for (auto r : rows)
      for (std::size_t c = 0; c < cols.size(); ++c) {
        both(r, c) = sa(r, c);
        both(r, c + cols.size()) = sb(r, c);
      }
    if (rank(sa) != static_cast<std::size_t>(ik) || rank(both) != static_cast<std::size_t>(ik)) return false;
  }
  return true;
}

// exp(s X) for nilpotent X, nullopt otherwise.
std::optional<QMatrix> nilpotent_exp(const QMatrix& x, const Rational& s) {
  const std::size_t n = x.rows();
  const QMatrix zero(n, n, Rational(0));
  QMatrix term = identity_q(n), acc = identity_q(n);
  for (std::size_t k = 1; k <= n; ++k) {
    term = (term * x).map([&](const Rational& v) -> Rational { return v * s / Rational(static_cast<long>(k)); });
    if (term == zero) return acc;
    acc = acc + term;
  }
  return std::nullopt;
}

std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// Tangent of exp(eps X) at the point (1, z) of P^1 in the affine coordinate z.
Rational p1_tangent(const QMatrix& x, const Rational& z) {
  return x(1, 0) + (x(1, 1) - x(0, 0)) * z - x(0, 1) * z * z;
}

}  // namespace

TEST_CASE("charts of P1") {
  const FlagShape shape{2, {1}};
  const FlagChart top = flag_chart(shape, {0});
  REQUIRE(top.symbols->size() == 1);
  const auto b = top.basis_matrix();
  CHECK(b(0, 0) == MultiPoly(top.symbols, Rational(1)));
  CHECK(b(1, 0) == MultiPoly::variable(top.symbols, 0));
  const FlagChart low = flag_chart(shape, {1});
  const auto c = low.basis_matrix();
  CHECK(c(1, 0) == MultiPoly(low.symbols, Rational(1)));
  CHECK(c(0, 0) == MultiPoly::variable(low.symbols, 0));
  CHECK(flag_atlas(shape).size() == 2);
}

TEST_CASE("full flag atlas counts pivot chains") {
  for (int m = 2; m <= 4; ++m) {
    FlagShape shape{m, {}};
    for (int i = 1; i < m; ++i) shape.dims.push_back(i);
    const auto atlas = flag_atlas(shape);
    CHECK(atlas.size() == factorial(static_cast<std::size_t>(m)));
    std::set<std::string> ids;
    for (const auto& ch : atlas) {
      ids.insert(ch.id());
      CHECK(static_cast<int>(ch.symbols->size()) == shape.variety_dimension());
    }
    CHECK(ids.size() == atlas.size());
  }
  // Grassmannian Gr(2,4): binomial(4,2) charts.
  CHECK(flag_atlas(FlagShape{4, {2}}).size() == 6);
}

TEST_CASE("pivot validation") {
  const FlagShape shape{3, {1, 2}};
  CHECK_THROWS_AS(parse_pivots(nlohmann::json::parse("[[1],[2,3]]"), shape), ShapeError);
  CHECK_NOTHROW(parse_pivots(nlohmann::json::parse("[[1],[1,3]]"), shape));
  CHECK_THROWS_AS(flag_chart(shape, parse_pivots(nlohmann::json::parse("[1,1]"), shape)), ShapeError);
}

TEST_CASE("q_flag examples") {
  const FlagShape shape{2, {1}};
  const FlagPoint id = q_flag(identity_q(2), shape);
  CHECK(id == standard_flag(shape));
  const FlagPoint f = q_flag(q({{1, 0}, {1, 1}}), shape);
  REQUIRE(f.coordinates().size() == 1);
  CHECK(f.coordinates()[0] == Rational(1));
  CHECK_THROWS(q_flag(q({{1, 2}, {2, 4}}), shape));
}

TEST_CASE("q_flag is invariant under filtration-compatible matrices") {
  std::mt19937 rng(2024);
  const std::vector<FlagShape> shapes{{2, {1}}, {4, {2}}, {4, {1, 2, 3}}, {5, {2, 3}}};
  int trials = 0;
  for (int t = 0; t < 100; ++t) {
    const FlagShape& shape = shapes[static_cast<std::size_t>(t) % shapes.size()];
    const auto m = static_cast<std::size_t>(shape.m);
    const QMatrix M = random_invertible(rng, m);
    QMatrix C = random_invertible(rng, m);
    // Column c may only draw on the frame vectors of its own step.
    for (std::size_t c = 0; c < static_cast<std::size_t>(shape.top()); ++c) {
      const int span = shape.dims[static_cast<std::size_t>(shape.block_of(static_cast<int>(c)))];
      for (std::size_t r = static_cast<std::size_t>(span); r < m; ++r) C(r, c) = Rational(0);
    }
    if (determinant(C) == 0) continue;
    ++trials;
    const FlagPoint a = q_flag(M, shape), b = q_flag(M * C, shape);
    CHECK(a == b);
    CHECK(same_spans(M, a.basis, shape));
  }
  CHECK(trials >= 50);
}

TEST_CASE("orbit dimension of sl2 on P1") {
  const FlagShape shape{2, {1}};
  const auto gens = sl2_basis();
  for (long z : {-2L, 0L, 3L}) {
    const FlagPoint F = q_flag(q({{1, 0}, {z, 1}}), shape);
    QMatrix oracle(3, 1, Rational(0));
    for (std::size_t i = 0; i < 3; ++i) oracle(i, 0) = p1_tangent(gens[i], Rational(z));
    CHECK(orbit_dimension(gens, F) == static_cast<int>(rank(oracle)));
    CHECK(orbit_dimension(gens, F) == 1);
  }
  CHECK(orbit_dimension({}, standard_flag(shape)) == 0);
  CHECK(orbit_dimension({QMatrix(2, 2, Rational(0))}, standard_flag(shape)) == 0);
}

TEST_CASE("orbit dimension of the diagonal sl2 on P1 x P1") {
  const FlagShape shape{4, {2}};
  std::vector<QMatrix> diag;
  for (const auto& x : sl2_basis()) diag.push_back(embed_block(x, 4, {0, 2}) + embed_block(x, 4, {1, 3}));
  auto point = [&](long x, long y) {
    QMatrix b(4, 2, Rational(0));
    b(0, 0) = Rational(1);
    b(2, 0) = Rational(x);
    b(1, 1) = Rational(1);
    b(3, 1) = Rational(y);
    return flag_from_basis(b, shape);
  };
  for (auto [x, y] : std::vector<std::pair<long, long>>{{0, 0}, {2, 2}, {1, 3}, {-1, 4}}) {
    QMatrix oracle(3, 2, Rational(0));
    const auto gens = sl2_basis();
    for (std::size_t i = 0; i < 3; ++i) {
      oracle(i, 0) = p1_tangent(gens[i], Rational(x));
      oracle(i, 1) = p1_tangent(gens[i], Rational(y));
    }
    const int od = orbit_dimension(diag, point(x, y));
    CHECK(od == static_cast<int>(rank(oracle)));
    CHECK(od == (x == y ? 1 : 2));
  }
}

TEST_CASE("orbit dimension of Sym3 and basis invariance") {
  const FlagShape shape{4, {1, 2, 3}};
  std::vector<QMatrix> gens;
  for (const auto& x : sl2_basis()) gens.push_back(sym3_matrix(x));
  CHECK(orbit_dimension(gens, standard_flag(shape)) == 1);

  std::mt19937 rng(11);
  const std::vector<std::pair<FlagShape, std::vector<QMatrix>>> cases{
      {shape, gens},
      {FlagShape{4, {2}}, product_legendre_catalog().find("P1xP1").lie_generators}};
  for (const auto& [sh, g] : cases) {
    for (int t = 0; t < 10; ++t) {
      const FlagPoint F = q_flag(random_invertible(rng, 4), sh);
      const QMatrix mix = random_invertible(rng, g.size());
      std::vector<QMatrix> h;
      for (std::size_t i = 0; i < g.size(); ++i) {
        QMatrix acc(4, 4, Rational(0));
        for (std::size_t j = 0; j < g.size(); ++j)
          acc = acc + g[j].map([&](const Rational& v) -> Rational { return mix(i, j) * v; });
        h.push_back(acc);
      }
      CHECK(orbit_dimension(g, F) == orbit_dimension(h, F));
    }
  }
}

TEST_CASE("type order examples") {
  const Catalog leg = legendre_catalog();
  CHECK(type_leq(leg.find("point"), leg.find("P1")) == Tri::True);
  CHECK(type_leq(leg.find("P1"), leg.find("point")) == Tri::False);

  const Catalog prod = product_legendre_catalog();
  CHECK(type_leq(prod.find("P1xP1"), prod.find("diagonal")) == Tri::False);
  CHECK(type_leq(prod.find("diagonal"), prod.find("P1xP1")) == Tri::True);
  CHECK(type_leq(prod.find("h-line"), prod.find("P1xP1")) == Tri::True);
  CHECK(type_leq(prod.find("point"), prod.find("diagonal")) == Tri::True);
  // Swapping the two factors is in GL4, so the two lines are equivalent.
  CHECK(type_leq(prod.find("h-line"), prod.find("v-line")) == Tri::True);
  // The diagonal planes share no common vector, while every h-line plane
  // contains the first frame vector.
  CHECK(type_leq(prod.find("diagonal"), prod.find("h-line")) == Tri::False);

  const Catalog s3 = sym3_catalog();
  CHECK(type_leq(s3.find("point"), s3.find("osculating-curve")) == Tri::True);
}

TEST_CASE("built-in catalogs validate") {
  for (const Catalog& c : {legendre_catalog(), product_legendre_catalog(), sym3_catalog()}) {
    const auto rep = catalog_validate(c);
    INFO(rep.to_json().dump());
    CHECK(rep.ok);
    for (const auto& t : c.types) CHECK(type_contains(t, standard_flag(c.shape)).value_or(false));
  }
}

TEST_CASE("validator reports faults") {
  Catalog bad = product_legendre_catalog();
  for (auto& t : bad.types)
    if (t.name == "diagonal") t.dim = 2;
  const auto rep = catalog_validate(bad);
  CHECK_FALSE(rep.ok);
  bool mentions = false;
  for (const auto& f : rep.failures) mentions = mentions || f.find("diagonal") != std::string::npos;
  CHECK(mentions);

  Catalog empty;
  empty.shape = FlagShape{2, {1}};
  const auto e = catalog_validate(empty);
  CHECK(e.ok);
  CHECK_FALSE(e.warnings.empty());

  Catalog dup = legendre_catalog();
  dup.types.push_back(dup.types[0]);
  CHECK_FALSE(catalog_validate(dup).ok);
}

TEST_CASE("catalog JSON round trip") {
  for (const Catalog& c : {legendre_catalog(), product_legendre_catalog(), sym3_catalog()}) {
    const auto js = catalog_to_json(c);
    const Catalog back = catalog_from_json(js, c.shape);
    CHECK(catalog_to_json(back) == js);
  }
  const auto js = nlohmann::json::parse(
      R"({"types":[{"name":"x","shape":[1,2],"dim":0,"charts":[]}]})");
  CHECK_THROWS_AS(catalog_from_json(js, FlagShape{2, {1}}), ShapeError);
}

TEST_CASE("membership does not depend on the chart") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> dist(-4, 4);
  for (const Catalog& c : {product_legendre_catalog(), sym3_catalog()}) {
    const auto atlas = flag_atlas(c.shape);
    for (const auto& t : c.types) {
      for (int trial = 0; trial < 12; ++trial) {
        // Half the trials use points of W (group translates of the base
        // flag), half use random flags.
        QMatrix M = random_invertible(rng, static_cast<std::size_t>(c.shape.m));
        if (trial % 2 == 0) {
          M = identity_q(static_cast<std::size_t>(c.shape.m));
          for (const auto& x : t.lie_generators) {
            const auto g = nilpotent_exp(x, Rational(dist(rng)));
            if (g) M = *g * M;
          }
        }
        const FlagPoint F = q_flag(M, c.shape);
        std::set<bool> answers;
        for (const auto& ch : atlas) {
          if (!ch.contains(F.basis)) continue;
          TypeRep only = t;
          const auto idx = t.find_chart(ch.pivots);
          if (!idx) {
            // A chart with no listed ideal misses W entirely.
            answers.insert(false);
            continue;
          }
          only.charts = {t.charts[*idx]};
          const auto r = type_contains(only, F);
          REQUIRE(r.has_value());
          answers.insert(*r);
        }
        CHECK(answers.size() == 1);
        if (trial % 2 == 0) CHECK(answers.count(true) == 1);
      }
    }
  }
}
