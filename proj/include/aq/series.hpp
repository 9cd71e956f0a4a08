#pragma once

#include "aq/polynomial.hpp"

#include <map>
#include <vector>

namespace aq {

/// Zero element with the same chart as `x` (identity for plain scalars).
template <class Scalar>
Polynomial<Scalar> zero_like(const Polynomial<Scalar>& x) {
  return Polynomial<Scalar>(x.chart());
}
inline Rational zero_like(const Rational&) { return Rational(0); }
inline GaussRational zero_like(const GaussRational&) { return GaussRational(0); }

inline bool same_ring(const Rational&, const Rational&) { return true; }
inline bool same_ring(const GaussRational&, const GaussRational&) { return true; }
template <class Scalar>
bool same_ring(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
  return same_chart(a.chart(), b.chart());
}

/// Truncated formal power series c_0 + c_1 ħ + ... + c_N ħ^N over a ring element type.
template <class Coeff>
class FormalSeries {
public:
  /// Series of order `order` with every coefficient equal to `zero`.
  FormalSeries(std::size_t order, const Coeff& zero) : coeffs_(order + 1, zero) {}
  explicit FormalSeries(std::vector<Coeff> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw PreconditionError("formal series needs at least one coefficient");
  }

  std::size_t order() const { return coeffs_.size() - 1; }
  const Coeff& operator[](std::size_t k) const { return coeffs_.at(k); }
  Coeff& operator[](std::size_t k) { return coeffs_.at(k); }
  const std::vector<Coeff>& coefficients() const { return coeffs_; }

  FormalSeries& operator+=(const FormalSeries& o) {
    require_compatible(o, "series +");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  FormalSeries& operator-=(const FormalSeries& o) {
    require_compatible(o, "series -");
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
  friend FormalSeries operator-(FormalSeries a, const FormalSeries& b) { return a -= b; }
  friend bool operator==(const FormalSeries& a, const FormalSeries& b) { return a.coeffs_ == b.coeffs_; }

  /// Cauchy product truncated at the common order.
  friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) {
    a.require_compatible(b, "series *");
    FormalSeries r(a.order(), zero_like(a.coeffs_[0]));
    for (std::size_t i = 0; i <= a.order(); ++i)
      for (std::size_t j = 0; i + j <= a.order(); ++j) r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return r;
  }

  /// Index of the first nonzero coefficient, or order()+1 when all vanish.
  std::size_t valuation() const {
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
      if (!is_zero_coeff(coeffs_[k])) return k;
    return coeffs_.size();
  }

private:
  static bool is_zero_coeff(const Coeff& c) {
    if constexpr (requires { c.is_zero(); })
      return c.is_zero();
    else
      return aq::is_zero(c);
  }

  void require_compatible(const FormalSeries& o, const char* what) const {
    if (o.order() != order()) throw ChartMismatch(std::string(what) + ": truncation orders differ");
    if (!same_ring(coeffs_[0], o.coeffs_[0])) throw ChartMismatch(std::string(what) + ": chart mismatch");
  }

  std::vector<Coeff> coeffs_;
};

template <class Scalar>
using PolySeries = FormalSeries<Polynomial<Scalar>>;

/// The star-product carrier: polynomial coefficients with Gaussian-rational entries.
using FormalFunction = FormalSeries<GaussPoly>;

/// Finite Laurent expansion Σ_k η^k p_k in a fiber variable η (negative k allowed).
template <class Scalar>
class EtaLaurent {
public:
  explicit EtaLaurent(ChartPtr chart) : chart_(std::move(chart)) {}
  EtaLaurent(int power, Polynomial<Scalar> p) : chart_(p.chart()) { add(power, std::move(p)); }

  const ChartPtr& chart() const { return chart_; }
  const std::map<int, Polynomial<Scalar>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Polynomial<Scalar> coeff(int power) const {
    auto it = terms_.find(power);
    return it == terms_.end() ? Polynomial<Scalar>(chart_) : it->second;
  }

  void add(int power, const Polynomial<Scalar>& p) {
    require_same_chart(chart_, p.chart(), "eta-laurent add");
    if (p.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(power, p);
    if (!inserted) {
      it->second += p;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  EtaLaurent& operator+=(const EtaLaurent& o) {
    for (const auto& [k, p] : o.terms_) add(k, p);
    return *this;
  }
  EtaLaurent& operator-=(const EtaLaurent& o) {
    for (const auto& [k, p] : o.terms_) add(k, -p);
    return *this;
  }
  friend EtaLaurent operator+(EtaLaurent a, const EtaLaurent& b) { return a += b; }
  friend EtaLaurent operator-(EtaLaurent a, const EtaLaurent& b) { return a -= b; }
  friend EtaLaurent operator*(const EtaLaurent& a, const EtaLaurent& b) {
    require_same_chart(a.chart_, b.chart_, "eta-laurent *");
    EtaLaurent r(a.chart_);
    for (const auto& [ka, pa] : a.terms_)
      for (const auto& [kb, pb] : b.terms_) r.add(ka + kb, pa * pb);
    return r;
  }
  friend EtaLaurent operator*(EtaLaurent a, const Scalar& s) {
    EtaLaurent r(a.chart_);
    for (const auto& [k, p] : a.terms_) r.add(k, p * s);
    return r;
  }
  friend bool operator==(const EtaLaurent& a, const EtaLaurent& b) {
    return same_chart(a.chart_, b.chart_) && a.terms_ == b.terms_;
  }

  /// Multiplies by η^shift.
  EtaLaurent shifted(int shift) const {
    EtaLaurent r(chart_);
    for (const auto& [k, p] : terms_) r.terms_.emplace(k + shift, p);
    return r;
  }

  /// Applies a coefficientwise polynomial map (e.g. restriction to a sub-chart).
  template <class F>
  EtaLaurent map(ChartPtr target, F&& f) const {
    EtaLaurent r(std::move(target));
    for (const auto& [k, p] : terms_) r.add(k, f(p));
    return r;
  }

private:
  ChartPtr chart_;
  std::map<int, Polynomial<Scalar>> terms_;
};

template <class Scalar>
std::string to_string(const EtaLaurent<Scalar>& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    if (!s.empty()) s += " + ";
    s += "(" + to_string(it->second) + ")";
    if (it->first != 0) s += "*eta^" + std::to_string(it->first);
  }
  return s;
}

} // namespace aq
