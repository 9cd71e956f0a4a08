#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <complex>
#include <ostream>
#include <string>

namespace aq {

/// Arbitrary-precision rational used for every exact identity in the toolkit.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Rational complex number a + b i.
class GaussRational {
public:
  GaussRational() = default;
  GaussRational(Rational re) : re_(std::move(re)) {}
  GaussRational(int re) : re_(re) {}
  GaussRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussRational i() { return {Rational(0), Rational(1)}; }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  GaussRational conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }

  GaussRational& operator+=(const GaussRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    return *this;
  }
  GaussRational& operator/=(const GaussRational& o) {
    const Rational n = o.norm();
    *this *= o.conj();
    re_ /= n;
    im_ /= n;
    return *this;
  }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

private:
  Rational re_{0};
  Rational im_{0};
};

// Scalar helpers shared by the coefficient-generic containers.

inline bool is_zero(const Rational& r) { return r.is_zero(); }
inline bool is_zero(const GaussRational& z) { return z.real().is_zero() && z.imag().is_zero(); }
inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const std::complex<double>& z) { return z == std::complex<double>(0.0, 0.0); }

inline std::complex<double> to_complex(const Rational& r) { return {r.convert_to<double>(), 0.0}; }
inline std::complex<double> to_complex(const GaussRational& z) {
  return {z.real().convert_to<double>(), z.imag().convert_to<double>()};
}
inline std::complex<double> to_complex(double x) { return {x, 0.0}; }
inline std::complex<double> to_complex(const std::complex<double>& z) { return z; }

inline Rational conj(const Rational& r) { return r; }
inline GaussRational conj(const GaussRational& z) { return z.conj(); }
inline double conj(double x) { return x; }
inline std::complex<double> conj(const std::complex<double>& z) { return std::conj(z); }

/// Canonical text of a coefficient.
std::string scalar_to_string(const Rational& r);
std::string scalar_to_string(const GaussRational& z);
std::string scalar_to_string(double x);
std::string scalar_to_string(const std::complex<double>& z);

/// True when the printed coefficient would start with a minus sign
/// and can be rendered as " - |c|" inside a sum.
bool is_negative_real(const Rational& r);
bool is_negative_real(const GaussRational& z);
bool is_negative_real(double x);
bool is_negative_real(const std::complex<double>& z);

inline std::ostream& operator<<(std::ostream& os, const GaussRational& z) {
  return os << scalar_to_string(z);
}

} // namespace aq
