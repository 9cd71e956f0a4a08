#include <doctest.h>

#include "aq/exact_linalg.hpp"
#include "aq/parse.hpp"
#include "aq/poly_matrix.hpp"
#include "aq/series.hpp"

using namespace aq;

namespace {

ChartPtr xy() { return make_chart({"x", "y"}); }

PolyFn P(const char* s, const ChartPtr& c) { return parse_poly(s, c); }

} // namespace

TEST_CASE("chart rejects duplicate and malformed names") {
  CHECK_THROWS_AS(Chart({"x", "x"}), PreconditionError);
  CHECK_THROWS_AS(Chart({"1x"}), PreconditionError);
  const Chart c({"f", "x2"});
  CHECK(c.index_of("x2") == 1u);
  CHECK_FALSE(c.index_of("y").has_value());
}

TEST_CASE("parse builds canonical sparse form") {
  const auto c = make_chart({"f", "x2"});
  const PolyFn p = P("f", c);
  CHECK(p.size() == 1);
  CHECK(p.coeff({1, 0}) == 1);

  const auto c2 = xy();
  CHECK(to_string(P("(x+y)^2", c2)) == "x^2 + 2*x*y + y^2");
  CHECK(to_string(P("x - x", c2)) == "0");
  CHECK(to_string(P("1/2*x - 3/4", c2)) == "1/2*x - 3/4");
  CHECK(to_string(P("-(x*y)^0", c2)) == "-1");
  CHECK(to_string(P("2/4", c2)) == "1/2");
  CHECK(P("x*y", c2) == P("y*x", c2));
}

TEST_CASE("parse reports positions") {
  const auto c = xy();
  try {
    parse_poly("x + z", c);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4u);
    CHECK(std::string(e.what()).find("unknown identifier `z`") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_poly("x^", c), ParseError);
  CHECK_THROWS_AS(parse_poly("(x", c), ParseError);
  CHECK_THROWS_AS(parse_poly("1/0", c), ParseError);
  CHECK_THROWS_AS(parse_poly("x^-1", c), ParseError);
  CHECK_THROWS_AS(parse_poly("", c), ParseError);
  CHECK_THROWS_AS(parse_poly("x y", c), ParseError);
}

TEST_CASE("ring arithmetic is exact") {
  const auto c = xy();
  const PolyFn a = P("x + 1/3", c);
  const PolyFn b = P("x - 1/3", c);
  CHECK(a * b == P("x^2 - 1/9", c));
  CHECK((a - b) == P("2/3", c));
  CHECK(a.degree() == 1);
  CHECK(PolyFn(c).degree() == -1);
  CHECK(derive(P("x^3*y + y^2", c), 0) == P("3*x^2*y", c));
  CHECK(derive(P("x^3*y + y^2", c), 1) == P("x^3 + 2*y", c));
  const std::vector<Rational> pt{Rational(1, 2), Rational(3)};
  CHECK(P("x^2*y + 1", c).evaluate<Rational>(pt) == Rational(7, 4));
}

TEST_CASE("operations across charts throw") {
  const PolyFn a = P("x", xy());
  const PolyFn b = P("x", make_chart({"x"}));
  CHECK_THROWS_AS(a + b, ChartMismatch);
  CHECK_THROWS_AS(a * b, ChartMismatch);
}

TEST_CASE("gaussian rationals") {
  const GaussRational i = GaussRational::i();
  CHECK(i * i == GaussRational(-1));
  CHECK((GaussRational(1) / (GaussRational(1) + i)) == GaussRational(Rational(1, 2), Rational(-1, 2)));
  const auto c = xy();
  const GaussPoly g = to_gauss(P("x", c)) * i;
  CHECK(to_string(g) == "i*x");
  CHECK(conj(g) == -g);
}

TEST_CASE("formal series truncate products") {
  const auto c = xy();
  PolySeries<Rational> s(2, PolyFn(c));
  s[0] = P("1", c);
  s[1] = P("x", c);
  const auto sq = s * s;
  CHECK(sq[0] == P("1", c));
  CHECK(sq[1] == P("2*x", c));
  CHECK(sq[2] == P("x^2", c));
  CHECK(s.valuation() == 0);
  CHECK((s - s).valuation() == 3);
  PolySeries<Rational> t(3, PolyFn(c));
  CHECK_THROWS_AS(s + t, ChartMismatch);
}

TEST_CASE("eta laurent algebra") {
  const auto c = xy();
  const EtaLaurent<Rational> a(-1, P("x", c));
  const EtaLaurent<Rational> b(1, P("y", c));
  const auto ab = a * b;
  CHECK(ab.terms().size() == 1);
  CHECK(ab.coeff(0) == P("x*y", c));
  CHECK((a - a).is_zero());
  CHECK(a.shifted(1).coeff(0) == P("x", c));
}

TEST_CASE("polynomial matrices") {
  const auto c = xy();
  PolyMatrix<Rational> m(c, 2, 2);
  m(0, 0) = P("1", c);
  m(0, 1) = P("x", c);
  m(1, 1) = P("1", c);
  CHECK(m.determinant() == P("1", c));
  const auto inv = m.inverse();
  CHECK(inv(0, 1) == P("-x", c));
  CHECK(m * inv == PolyMatrix<Rational>::identity(c, 2));

  PolyMatrix<Rational> s(c, 2, 2);
  s(0, 1) = P("x", c);
  s(1, 0) = P("-x", c);
  CHECK(s.is_antisymmetric());
  CHECK(s.determinant() == P("x^2", c));
  CHECK_THROWS_AS(s.inverse(), PreconditionError);
}

TEST_CASE("exact linear algebra") {
  RatMatrix a(3, 3);
  a << 2, 1, 0, 1, 2, 1, 0, 1, 2;
  CHECK(exact_rank(a) == 3);
  CHECK(exact_determinant(a) == 4);
  CHECK(a * exact_inverse(a) == RatMatrix::Identity(3, 3));
  CHECK(is_positive_definite(a));
  RatMatrix b(2, 2);
  b << 1, 1, 1, 1;
  CHECK(exact_rank(b) == 1);
  CHECK_THROWS_AS(exact_inverse(b), PreconditionError);
  CHECK_FALSE(is_positive_definite(b));
  CHECK(is_positive_semidefinite(b));
  RatMatrix n(2, 2);
  n << 0, 0, 0, -1;
  CHECK_FALSE(is_positive_semidefinite(n));
}
