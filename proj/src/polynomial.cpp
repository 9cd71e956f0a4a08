#include "aq/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace aq {

Chart::Chart(std::vector<std::string> coord_names) : names_(std::move(coord_names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!is_identifier(n)) throw PreconditionError("chart: invalid coordinate name `" + n + "`");
    if (!seen.insert(n).second) throw PreconditionError("chart: duplicate coordinate `" + n + "`");
  }
}

std::optional<std::size_t> Chart::index_of(const std::string& name) const {
  for (std::size_t k = 0; k < names_.size(); ++k)
    if (names_[k] == name) return k;
  return std::nullopt;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::string scalar_to_string(const Rational& r) { return r.str(); }

std::string scalar_to_string(const GaussRational& z) {
  const bool has_re = !z.real().is_zero();
  const bool has_im = !z.imag().is_zero();
  auto imag_text = [](const Rational& im) {
    if (im == 1) return std::string("i");
    if (im == -1) return std::string("-i");
    return im.str() + "*i";
  };
  if (!has_im) return z.real().str();
  if (!has_re) return imag_text(z.imag());
  std::string s = "(" + z.real().str();
  if (z.imag() < 0)
    s += " - " + imag_text(-z.imag());
  else
    s += " + " + imag_text(z.imag());
  return s + ")";
}

namespace {
std::string double_text(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}
} // namespace

std::string scalar_to_string(double x) { return double_text(x); }

std::string scalar_to_string(const std::complex<double>& z) {
  if (z.imag() == 0.0) return double_text(z.real());
  std::string s = "(" + double_text(z.real());
  s += z.imag() < 0 ? " - " + double_text(-z.imag()) : " + " + double_text(z.imag());
  return s + "*i)";
}

bool is_negative_real(const Rational& r) { return r < 0; }
bool is_negative_real(const GaussRational& z) { return z.real() <= 0 && z.imag() <= 0 && !is_zero(z); }
bool is_negative_real(double x) { return x < 0; }
bool is_negative_real(const std::complex<double>& z) { return z.imag() == 0.0 && z.real() < 0; }

namespace {

template <class Scalar>
std::string monomial_text(const Chart& chart, const Exponent& e) {
  std::string s;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    if (!s.empty()) s += "*";
    s += chart.name(k);
    if (e[k] > 1) s += "^" + std::to_string(e[k]);
  }
  return s;
}

template <class Scalar>
bool is_one(const Scalar& c) {
  return c == Scalar(1);
}

} // namespace

template <class Scalar>
std::string to_string(const Polynomial<Scalar>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    const bool negative = is_negative_real(c);
    const Scalar mag = negative ? Scalar(-c) : c;
    const std::string mono = monomial_text<Scalar>(*p.chart(), e);
    std::string body;
    if (mono.empty())
      body = scalar_to_string(mag);
    else if (is_one(mag))
      body = mono;
    else
      body = scalar_to_string(mag) + "*" + mono;
    if (first)
      out += negative ? "-" + body : body;
    else
      out += negative ? " - " + body : " + " + body;
    first = false;
  }
  return out;
}

template std::string to_string(const Polynomial<Rational>&);
template std::string to_string(const Polynomial<GaussRational>&);
template std::string to_string(const Polynomial<std::complex<double>>&);

} // namespace aq
