#pragma once

#include "aq/exact_linalg.hpp"

#include <cmath>
#include <functional>
#include <optional>

namespace aq {

namespace detail {
inline bool is_zero_scalar(const Rational& x, const Rational&) { return x.is_zero(); }
inline bool is_zero_scalar(double x, double scale) { return std::abs(x) <= 1e-12 * scale; }
inline double magnitude(const Rational& x) { return std::abs(x.convert_to<double>()); }
inline double magnitude(double x) { return std::abs(x); }
} // namespace detail

/// One fiber of the osculating bundle: a base point and the (possibly degenerate) ω_x.
template <class T>
struct OsculatingFiber {
  Vector<T> base_point;
  Matrix<T> omega;

  OsculatingFiber(Vector<T> point, Matrix<T> w) : base_point(std::move(point)), omega(std::move(w)) {
    if (omega.rows() != omega.cols()) throw ChartMismatch("osculating fiber: omega must be square");
    const Matrix<T> sym = omega + omega.transpose();
    if constexpr (std::is_same_v<T, Rational>) {
      if (!sym.isZero()) throw PreconditionError("osculating fiber: omega is not antisymmetric");
    } else {
      if (sym.cwiseAbs().maxCoeff() > 1e-14) throw PreconditionError("osculating fiber: omega is not antisymmetric");
    }
  }

  Eigen::Index dim() const { return omega.rows(); }
  T form(const Vector<T>& u, const Vector<T>& v) const { return u.dot(omega * v); }
};

/// Point (ξ, t) of the step-2 nilpotent group; t is the central coordinate.
template <class T>
struct GroupElement {
  Vector<T> xi;
  T t;

  static GroupElement identity(Eigen::Index dim) { return {Vector<T>::Zero(dim), T(0)}; }
  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.xi == b.xi && a.t == b.t; }
};

/// (ξ, t)·(ξ', t') = (ξ + ξ', t + t' + ½ω(ξ, ξ')).
template <class T>
GroupElement<T> bch_multiply(const OsculatingFiber<T>& F, const GroupElement<T>& g, const GroupElement<T>& h) {
  if (g.xi.size() != F.dim() || h.xi.size() != F.dim())
    throw ChartMismatch("bch_multiply: element dimension differs from fiber");
  return {g.xi + h.xi, g.t + h.t + F.form(g.xi, h.xi) / T(2)};
}

template <class T>
GroupElement<T> group_inverse(const GroupElement<T>& g) {
  return {-g.xi, -g.t};
}

/// δ_λ(ξ, t) = (λξ, λ²t).
template <class T>
GroupElement<T> dilation(const OsculatingFiber<T>& F, const T& lambda, const GroupElement<T>& g) {
  if (!(lambda > 0)) throw PreconditionError("dilation: lambda must be positive");
  if (g.xi.size() != F.dim()) throw ChartMismatch("dilation: element dimension differs from fiber");
  return {g.xi * lambda, g.t * lambda * lambda};
}

/// Columns of `V` span a symplectic block ordered [u_1..u_m, v_1..v_m] with ω(u_a, v_b) = δ_ab;
/// columns of `K` span the ω-null complement.
template <class T>
struct FiberSplitting {
  Matrix<T> V;
  Matrix<T> K;
};

/// Symplectic Gram-Schmidt. Exact for rationals; for doubles pairs are accepted above a
/// relative threshold.
template <class T>
FiberSplitting<T> fiber_decompose(const OsculatingFiber<T>& F) {
  const Eigen::Index d = F.dim();
  std::vector<Vector<T>> pool;
  for (Eigen::Index k = 0; k < d; ++k) pool.push_back(Vector<T>::Unit(d, k));
  double scale = 0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) scale = std::max(scale, detail::magnitude(F.omega(i, j)));
  if (scale == 0) scale = 1;

  std::vector<Vector<T>> us, vs;
  for (;;) {
    std::size_t bi = 0, bj = 0;
    double best = 0;
    bool found = false;
    for (std::size_t i = 0; i < pool.size() && !(found && std::is_same_v<T, Rational>); ++i)
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        const T w = F.form(pool[i], pool[j]);
        if (detail::is_zero_scalar(w, T(scale))) continue;
        if (detail::magnitude(w) > best) {
          best = detail::magnitude(w);
          bi = i;
          bj = j;
          found = true;
          if constexpr (std::is_same_v<T, Rational>) break;
        }
      }
    if (!found) break;
    const Vector<T> u = pool[bi];
    const Vector<T> v = pool[bj] / F.form(pool[bi], pool[bj]);
    std::vector<Vector<T>> rest;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (k == bi || k == bj) continue;
      const Vector<T>& w = pool[k];
      rest.push_back(w - u * F.form(w, v) + v * F.form(w, u));
    }
    pool = std::move(rest);
    us.push_back(u);
    vs.push_back(v);
  }
  FiberSplitting<T> s{Matrix<T>(d, 2 * us.size()), Matrix<T>(d, pool.size())};
  for (std::size_t a = 0; a < us.size(); ++a) {
    s.V.col(a) = us[a];
    s.V.col(us.size() + a) = vs[a];
  }
  for (std::size_t k = 0; k < pool.size(); ++k) s.K.col(k) = pool[k];
  return s;
}

/// Rebuilds ω from a splitting: B⁻ᵀ (J_std ⊕ 0) B⁻¹ with B = [V | K].
template <class T>
Matrix<T> reconstruct_omega(const FiberSplitting<T>& s) {
  const Eigen::Index d = s.V.rows();
  const Eigen::Index m = s.V.cols() / 2;
  Matrix<T> B(d, d);
  B << s.V, s.K;
  Matrix<T> normal = Matrix<T>::Zero(d, d);
  for (Eigen::Index a = 0; a < m; ++a) {
    normal(a, m + a) = T(1);
    normal(m + a, a) = T(-1);
  }
  Matrix<T> Binv;
  if constexpr (std::is_same_v<T, Rational>)
    Binv = exact_inverse(B);
  else
    Binv = B.inverse();
  return Binv.transpose() * normal * Binv;
}

/// Checks J² = −I, ω(J·,J·) = ω and positivity of ω(J·,·); returns the failing check name.
std::optional<std::string> compatibility_failure(const Matrix<double>& omega, const Matrix<double>& J,
                                                 double tol = 1e-10);

/// Homogeneous function on the dual fiber; `evaluate(ξ, η)` is defined for η ≠ 0.
/// A Gaussian closed form exp(−ξᵀQξ/η) (η > 0) is kept when available.
class HomogeneousSymbol {
public:
  struct Gaussian {
    Matrix<double> omega;
    Matrix<double> J;
    Matrix<double> Q; // Jᵀ Ω, the metric ω(J·,·)
  };

  HomogeneousSymbol(int order, std::function<double(const Vector<double>&, double)> f,
                    std::optional<Gaussian> closed_form = std::nullopt)
      : order_(order), f_(std::move(f)), closed_(std::move(closed_form)) {}

  int order() const { return order_; }
  double evaluate(const Vector<double>& xi, double eta) const { return f_(xi, eta); }
  const std::optional<Gaussian>& closed_form() const { return closed_; }
  bool is_zero() const { return zero_; }

  static HomogeneousSymbol zero() {
    HomogeneousSymbol s(0, [](const Vector<double>&, double) { return 0.0; });
    s.zero_ = true;
    return s;
  }

private:
  int order_;
  std::function<double(const Vector<double>&, double)> f_;
  std::optional<Gaussian> closed_;
  bool zero_ = false;
};

/// s₀(ξ, η) = exp(−ω(Jξ, ξ)/η) for η > 0 and 0 for η < 0; order 0.
HomogeneousSymbol ground_state_symbol(const OsculatingFiber<double>& F, const Matrix<double>& J);

} // namespace aq
