#include <doctest.h>

#include "aq/parse.hpp"
#include "aq/spec_file.hpp"
#include "aq/star.hpp"
#include "aq/symplectic.hpp"

using namespace aq;

namespace {

AlgebroidSpec example(const std::string& name) { return load_spec(std::string(AQ_DATA_DIR) + "/" + name); }

RatMatrix std_omega() {
  RatMatrix w(2, 2);
  w << 0, 1, -1, 0;
  return w;
}

FlatFrameConfig config(const AlgebroidSpec& s) {
  RatMatrix w(s.omega.rows(), s.omega.cols());
  for (std::size_t i = 0; i < s.omega.rows(); ++i)
    for (std::size_t j = 0; j < s.omega.cols(); ++j) w(i, j) = s.omega(i, j).constant_term();
  return FlatFrameConfig::make(s.algebroid, s.omega, wick_tensor(w, frame_complex_structure(s)));
}

GaussPoly G(const char* src, const ChartPtr& c) { return to_gauss(parse_poly(src, c)); }

const GaussRational I = GaussRational::i();

} // namespace

TEST_CASE("wick tensor of the standard plane") {
  const GaussMatrix L = wick_tensor(std_omega(), std_omega());
  const GaussRational half(Rational(-1, 2));
  CHECK(L[0][0] == half);
  CHECK(L[1][1] == half);
  CHECK(L[0][1] == GaussRational(Rational(0), Rational(-1, 2)));
  CHECK(L[1][0] == GaussRational(Rational(0), Rational(1, 2)));
  RatMatrix bad(2, 2);
  bad << 1, 0, 0, 1;
  CHECK_THROWS_AS(wick_tensor(std_omega(), bad), PreconditionError);
  CHECK_THROWS_AS(wick_tensor(std_omega(), RatMatrix(-std_omega())), PreconditionError);
}

TEST_CASE("star product on the plane by hand") {
  const auto s = example("tangent_r2.json");
  const auto cfg = config(s);
  const auto xy = star(cfg, G("x", s.chart), G("y", s.chart), 2);
  CHECK(xy[0] == G("x*y", s.chart));
  CHECK(xy[1] == GaussPoly::constant(s.chart, GaussRational(Rational(0), Rational(-1, 2))));
  CHECK(xy[2].is_zero());
  const auto sq = star(cfg, G("x^2", s.chart), G("y^2", s.chart), 3);
  CHECK(sq[1] == G("x*y", s.chart) * GaussRational(Rational(0), Rational(-2)));
  CHECK(sq[2] == GaussPoly::constant(s.chart, GaussRational(Rational(-1, 2))));
  CHECK(sq[3].is_zero());
  // the symmetric part of Lambda contributes -1/2 (d_x f d_x g + d_y f d_y g)
  const auto xx = star(cfg, G("x", s.chart), G("x", s.chart), 1);
  CHECK(xx[1] == GaussPoly::constant(s.chart, GaussRational(Rational(-1, 2))));
}

TEST_CASE("constants are units") {
  const auto s = example("b_symplectic_n1.json");
  const auto cfg = config(s);
  const GaussPoly f = G("f^2*x2 - 3*x2", s.chart);
  const auto r = star(cfg, GaussPoly::constant(s.chart, GaussRational(1)), f, 4);
  CHECK(r[0] == f);
  for (std::size_t k = 1; k <= 4; ++k) CHECK(r[k].is_zero());
}

TEST_CASE("commutator leading term is the Poisson bracket") {
  const auto s = example("b_symplectic_n1.json");
  const auto cfg = config(s);
  const auto P = induced_poisson(s.algebroid, s.omega);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const PolyFn f = random_polynomial(s.chart, 4, rng);
    const PolyFn g = random_polynomial(s.chart, 4, rng);
    const auto fg = star(cfg, f, g, 2);
    const auto gf = star(cfg, g, f, 2);
    CHECK(fg[0] == to_gauss(f * g));
    CHECK((fg[0] - gf[0]).is_zero());
    CHECK(fg[1] - gf[1] == to_gauss(poisson_bracket(P, f, g)) * (-I));
  }
}

TEST_CASE("associativity of the flat star product") {
  const auto r = check_associativity(config(example("tangent_r2.json")), 4, 5, 3, 1);
  CHECK(r.passed());
  CHECK(r.first_nonzero_order == 5);
  CHECK(check_associativity(config(example("b_symplectic_n2.json")), 3, 3, 2, 2).passed());
}

TEST_CASE("position-dependent Lambda breaks associativity") {
  const auto s = example("tangent_r2.json");
  PolyMatrix<GaussRational> L(s.chart, 2, 2);
  const GaussRational half(Rational(-1, 2));
  L(0, 0) = GaussPoly::constant(s.chart, half);
  L(1, 1) = GaussPoly::constant(s.chart, half);
  L(0, 1) = G("x", s.chart) * GaussRational(Rational(0), Rational(-1, 2));
  L(1, 0) = G("x", s.chart) * GaussRational(Rational(0), Rational(1, 2));
  const auto cfg = FlatFrameConfig::unchecked(s.algebroid, s.omega, L);
  const auto r = check_associativity(cfg, 3, 5, 3, 4);
  CHECK_FALSE(r.passed());
  CHECK(r.first_nonzero_order == 2);
  CHECK_FALSE(r.witness.empty());
}

TEST_CASE("flat-frame validation") {
  const auto ball = example("scaled_ball.json");
  try {
    config(ball);
    FAIL("expected a flat-frame violation");
  } catch (const FlatFrameViolation& e) {
    CHECK(std::string(e.what()).find("flat-frame violation: [e_1,e_2]") == 0);
  }
  const auto t = example("tangent_r2.json");
  GaussMatrix L = wick_tensor(std_omega(), std_omega());
  L[0][0] = GaussRational(Rational(1, 2));
  L[1][1] = GaussRational(Rational(1, 2));
  CHECK_THROWS_AS(FlatFrameConfig::make(t.algebroid, t.omega, L), PreconditionError);
}

TEST_CASE("series arguments") {
  const auto s = example("tangent_r2.json");
  const auto cfg = config(s);
  FormalFunction F(1, GaussPoly(s.chart));
  F[0] = G("x", s.chart);
  FormalFunction Gs(1, GaussPoly(s.chart));
  Gs[0] = G("y", s.chart);
  Gs[1] = G("1", s.chart);
  const auto r = star(cfg, F, Gs);
  CHECK(r[0] == G("x*y", s.chart));
  CHECK(r[1] == G("x", s.chart) + GaussPoly::constant(s.chart, GaussRational(Rational(0), Rational(-1, 2))));
}

TEST_CASE("oracle comparison with Toeplitz operators") {
  const auto s = example("tangent_r2.json");
  const auto cfg = config(s);
  const auto grid = geometric_grid(1.0 / 64, 0.25, 5);
  CHECK(grid.size() == 5);
  CHECK(grid.front() == doctest::Approx(1.0 / 64));
  CHECK(grid.back() == doctest::Approx(0.25));
  const auto r1 = oracle_compare(cfg, G("x^2", s.chart), G("y^2", s.chart), 1, grid);
  REQUIRE(r1.slope.has_value());
  CHECK(*r1.slope == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r1.passed());
  const auto r0 = oracle_compare(cfg, G("x^2", s.chart), G("y^2", s.chart), 0, grid);
  REQUIRE(r0.slope.has_value());
  CHECK(*r0.slope >= 0.8);
  const auto r2 = oracle_compare(cfg, G("x", s.chart), G("y", s.chart), 2, grid);
  CHECK(r2.degenerate);
  CHECK(r2.passed());
  const auto b = example("b_symplectic_n1.json");
  CHECK_THROWS_AS(oracle_compare(config(b), G("f", b.chart), G("x2", b.chart), 1, grid), PreconditionError);
}

TEST_CASE("total symbol extraction recovers a commutator") {
  const auto chart = make_chart({"x", "y"});
  const auto space = make_fock_space(1, 40);
  auto comm = [&](double hbar) {
    const double h = bargmann_h(hbar);
    const auto tx = bargmann_toeplitz(ComplexPoly::variable(chart, 0), h, space);
    const auto ty = bargmann_toeplitz(ComplexPoly::variable(chart, 1), h, space);
    return tx * ty - ty * tx;
  };
  const auto est = total_symbol_extract(comm, geometric_grid(1.0 / 64, 1.0 / 8, 4), default_base_points(1), 1,
                                        chart);
  REQUIRE(est.coefficients.size() == 2);
  CHECK(est.coefficients[0].is_zero());
  CHECK(est.coefficients[1].size() == 1);
  CHECK(std::abs(est.coefficients[1].constant_term() - Complex(0, -1)) < 1e-4);
}
