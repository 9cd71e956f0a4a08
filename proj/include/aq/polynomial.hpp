#pragma once

#include "aq/chart.hpp"
#include "aq/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace aq {

/// Exponent multi-index of a monomial; length equals the chart dimension.
using Exponent = std::vector<std::uint32_t>;

inline std::uint32_t total_degree(const Exponent& e) {
  return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

/// Graded-lexicographic order, ascending (lowest degree first, first axis most significant).
struct GrlexLess {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const auto da = total_degree(a);
    const auto db = total_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

/// Sparse multivariate polynomial with coefficients in `Scalar` on a chart.
/// No zero coefficient is ever stored.
template <class Scalar>
class Polynomial {
public:
  using scalar_type = Scalar;
  using Terms = std::map<Exponent, Scalar, GrlexLess>;

  explicit Polynomial(ChartPtr chart) : chart_(std::move(chart)) {}

  static Polynomial constant(ChartPtr chart, const Scalar& c) {
    Polynomial p(std::move(chart));
    p.add_term(Exponent(p.dim(), 0), c);
    return p;
  }

  static Polynomial variable(ChartPtr chart, std::size_t axis) {
    Polynomial p(std::move(chart));
    if (axis >= p.dim()) throw PreconditionError("variable: axis out of range");
    Exponent e(p.dim(), 0);
    e[axis] = 1;
    p.add_term(std::move(e), Scalar(1));
    return p;
  }

  static Polynomial monomial(ChartPtr chart, Exponent e, const Scalar& c) {
    Polynomial p(std::move(chart));
    if (e.size() != p.dim()) throw ChartMismatch("monomial: exponent length differs from chart");
    p.add_term(std::move(e), c);
    return p;
  }

  const ChartPtr& chart() const { return chart_; }
  std::size_t dim() const { return chart_->dim(); }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
  }
  Scalar constant_term() const { return coeff(Exponent(dim(), 0)); }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.rbegin()->first));
  }

  Scalar coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  /// Adds c·x^e in place, dropping the entry if it cancels.
  void add_term(Exponent e, const Scalar& c) {
    if (aq::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (aq::is_zero(it->second)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    require_same_chart(chart_, o.chart_, "polynomial +");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    require_same_chart(chart_, o.chart_, "polynomial -");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(const Scalar& s) {
    if (aq::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& [e, c] : a.terms_) c = -c;
    return a;
  }
  friend Polynomial operator*(Polynomial a, const Scalar& s) { return a *= s; }
  friend Polynomial operator*(const Scalar& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    require_same_chart(a.chart_, b.chart_, "polynomial *");
    Polynomial r(a.chart_);
    Exponent e(a.dim());
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return same_chart(a.chart_, b.chart_) && a.terms_ == b.terms_;
  }

  /// Evaluates at a point whose entries live in any ring containing the coefficients.
  template <class T>
  T evaluate(std::span<const T> point) const {
    if (point.size() != dim()) throw ChartMismatch("evaluate: point dimension differs from chart");
    T acc(0);
    for (const auto& [e, c] : terms_) {
      T term = convert<T>(c);
      for (std::size_t k = 0; k < e.size(); ++k)
        for (std::uint32_t p = 0; p < e[k]; ++p) term *= point[k];
      acc += term;
    }
    return acc;
  }

  /// Applies `f` to every coefficient, producing a polynomial over another scalar.
  template <class Other, class F>
  Polynomial<Other> map_coefficients(F&& f) const {
    Polynomial<Other> r(chart_);
    for (const auto& [e, c] : terms_) r.add_term(e, f(c));
    return r;
  }

private:
  template <class T>
  static T convert(const Scalar& c) {
    if constexpr (std::is_same_v<T, Scalar>) {
      return c;
    } else if constexpr (std::is_same_v<T, std::complex<double>>) {
      return to_complex(c);
    } else {
      static_assert(std::is_same_v<T, double>, "unsupported evaluation ring");
      return to_complex(c).real();
    }
  }

  ChartPtr chart_;
  Terms terms_;
};

using PolyFn = Polynomial<Rational>;
using GaussPoly = Polynomial<GaussRational>;
using ComplexPoly = Polynomial<std::complex<double>>;

/// Exact partial derivative along `axis`.
template <class Scalar>
Polynomial<Scalar> derive(const Polynomial<Scalar>& p, std::size_t axis) {
  if (axis >= p.dim()) throw PreconditionError("derive: axis out of range");
  Polynomial<Scalar> r(p.chart());
  for (const auto& [e, c] : p.terms()) {
    if (e[axis] == 0) continue;
    Exponent d = e;
    d[axis] -= 1;
    r.add_term(std::move(d), c * Scalar(static_cast<int>(e[axis])));
  }
  return r;
}

/// Same polynomial with coefficients promoted to Gaussian rationals.
inline GaussPoly to_gauss(const PolyFn& p) {
  return p.map_coefficients<GaussRational>([](const Rational& c) { return GaussRational(c); });
}

template <class Scalar>
ComplexPoly to_complex_poly(const Polynomial<Scalar>& p) {
  return p.template map_coefficients<std::complex<double>>(
      [](const Scalar& c) { return to_complex(c); });
}

template <class Scalar>
Polynomial<Scalar> conj(const Polynomial<Scalar>& p) {
  return p.template map_coefficients<Scalar>([](const Scalar& c) { return aq::conj(c); });
}

/// Canonical text: explicit `*` and `^`, terms in descending graded-lex order.
template <class Scalar>
std::string to_string(const Polynomial<Scalar>& p);

extern template std::string to_string(const Polynomial<Rational>&);
extern template std::string to_string(const Polynomial<GaussRational>&);
extern template std::string to_string(const Polynomial<std::complex<double>>&);

/// Re-embeds a polynomial into a larger chart; `axis_map[k]` is the target axis of source axis k.
template <class Scalar>
Polynomial<Scalar> embed(const Polynomial<Scalar>& p, ChartPtr target,
                         std::span<const std::size_t> axis_map) {
  if (axis_map.size() != p.dim()) throw ChartMismatch("embed: axis map size differs from chart");
  Polynomial<Scalar> r(target);
  for (const auto& [e, c] : p.terms()) {
    Exponent t(target->dim(), 0);
    for (std::size_t k = 0; k < e.size(); ++k) t.at(axis_map[k]) += e[k];
    r.add_term(std::move(t), c);
  }
  return r;
}

} // namespace aq
