#include <doctest.h>

#include "aq/heisenberg.hpp"

#include <random>

using namespace aq;

namespace {

RatVector random_vector(std::mt19937_64& rng, Eigen::Index d) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  RatVector v(d);
  for (Eigen::Index k = 0; k < d; ++k) v(k) = Rational(num(rng), den(rng));
  return v;
}

Matrix<double> standard_omega(Eigen::Index n) {
  Matrix<double> w = Matrix<double>::Zero(2 * n, 2 * n);
  w.topRightCorner(n, n) = Matrix<double>::Identity(n, n);
  w.bottomLeftCorner(n, n) = -Matrix<double>::Identity(n, n);
  return w;
}

} // namespace

TEST_CASE("osculating fiber rejects non-antisymmetric forms") {
  RatMatrix w(2, 2);
  w << 0, 1, 1, 0;
  CHECK_THROWS_AS(OsculatingFiber<Rational>(RatVector::Zero(2), w), PreconditionError);
  CHECK_THROWS_AS(OsculatingFiber<Rational>(RatVector::Zero(2), RatMatrix::Zero(2, 3)), ChartMismatch);
}

TEST_CASE("group law on a hand example") {
  RatMatrix w(2, 2);
  w << 0, 1, -1, 0;
  const OsculatingFiber<Rational> F(RatVector::Zero(2), w);
  GroupElement<Rational> g{RatVector(2), Rational(1)};
  g.xi << 1, 0;
  GroupElement<Rational> h{RatVector(2), Rational(0)};
  h.xi << 0, 2;
  const auto gh = bch_multiply(F, g, h);
  CHECK(gh.t == Rational(2));
  CHECK(bch_multiply(F, h, g).t == Rational(0));
  CHECK(bch_multiply(F, g, group_inverse(g)) == GroupElement<Rational>::identity(2));
  const auto d = dilation(F, Rational(3), g);
  CHECK(d.xi(0) == 3);
  CHECK(d.t == 9);
  CHECK_THROWS_AS(dilation(F, Rational(0), g), PreconditionError);
}

TEST_CASE("group law is associative and dilations are homomorphisms") {
  std::mt19937_64 rng(11);
  RatMatrix w(4, 4);
  w << 0, 1, 2, 0, -1, 0, 0, 3, -2, 0, 0, 1, 0, -3, -1, 0;
  const OsculatingFiber<Rational> F(RatVector::Zero(4), w);
  for (int k = 0; k < 50; ++k) {
    const GroupElement<Rational> a{random_vector(rng, 4), Rational(k, 7)};
    const GroupElement<Rational> b{random_vector(rng, 4), Rational(-k, 3)};
    const GroupElement<Rational> c{random_vector(rng, 4), Rational(1, k + 1)};
    CHECK(bch_multiply(F, bch_multiply(F, a, b), c) == bch_multiply(F, a, bch_multiply(F, b, c)));
    const Rational lambda(k + 1, 4);
    CHECK(dilation(F, lambda, bch_multiply(F, a, b)) ==
          bch_multiply(F, dilation(F, lambda, a), dilation(F, lambda, b)));
  }
}

TEST_CASE("fiber decomposition of a degenerate form") {
  RatMatrix w = RatMatrix::Zero(4, 4);
  w(0, 1) = 2;
  w(1, 0) = -2;
  w(0, 3) = 1;
  w(3, 0) = -1;
  w(1, 3) = Rational(1, 2);
  w(3, 1) = Rational(-1, 2);
  const OsculatingFiber<Rational> F(RatVector::Zero(4), w);
  const auto s = fiber_decompose(F);
  CHECK(s.V.cols() == 2);
  CHECK(s.K.cols() == 2);
  CHECK((w * s.K).isZero());
  CHECK(reconstruct_omega(s) == w);

  const OsculatingFiber<Rational> zero(RatVector::Zero(3), RatMatrix::Zero(3, 3));
  const auto z = fiber_decompose(zero);
  CHECK(z.V.cols() == 0);
  CHECK(reconstruct_omega(z) == RatMatrix::Zero(3, 3));
}

TEST_CASE("compatibility checks name the failing condition") {
  const Matrix<double> w = standard_omega(1);
  Matrix<double> J(2, 2);
  J << 0, 1, -1, 0;
  CHECK_FALSE(compatibility_failure(w, J).has_value());
  CHECK(compatibility_failure(w, Matrix<double>::Identity(2, 2)).has_value());
  CHECK(compatibility_failure(w, -J).has_value());
}

TEST_CASE("ground-state symbol") {
  const Matrix<double> w = standard_omega(1);
  Matrix<double> J(2, 2);
  J << 0, 1, -1, 0;
  const OsculatingFiber<double> F(Vector<double>::Zero(1), w);
  const HomogeneousSymbol s0 = ground_state_symbol(F, J);
  CHECK(s0.order() == 0);
  REQUIRE(s0.closed_form().has_value());
  CHECK(s0.closed_form()->Q.isApprox(Matrix<double>::Identity(2, 2)));

  Vector<double> xi(2);
  xi << 1, 2;
  CHECK(s0.evaluate(xi, 1.0) == doctest::Approx(std::exp(-5.0)));
  CHECK(s0.evaluate(xi, -1.0) == 0.0);
  CHECK(s0.evaluate(xi, 0.0) == 0.0);
  CHECK_THROWS_AS(s0.evaluate(Vector<double>::Zero(2), 0.0), PreconditionError);
  for (double lambda : {0.5, 2.0, 7.0})
    CHECK(std::abs(s0.evaluate(lambda * xi, lambda * lambda * 0.3) - s0.evaluate(xi, 0.3)) <= 1e-12);
  CHECK_THROWS_AS(ground_state_symbol(F, Matrix<double>::Identity(2, 2)), PreconditionError);
  CHECK(HomogeneousSymbol::zero().is_zero());
}
