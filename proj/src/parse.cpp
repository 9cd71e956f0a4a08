#include "aq/parse.hpp"

#include <cctype>

namespace aq {
namespace {

class Parser {
public:
  Parser(std::string_view src, const ChartPtr& chart) : src_(src), chart_(chart) {}

  PolyFn parse() {
    PolyFn p = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected `" + std::string(1, src_[pos_]) + "`");
    return p;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  PolyFn expr() {
    PolyFn acc = term();
    for (;;) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  PolyFn term() {
    PolyFn acc = unary();
    while (accept('*')) acc = acc * unary();
    return acc;
  }

  PolyFn unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  PolyFn power() {
    PolyFn base = primary();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t start = pos_;
    std::string digits = read_digits();
    if (digits.empty()) {
      pos_ = start;
      fail("expected nonnegative integer exponent");
    }
    if (digits.size() > 4) {
      pos_ = start;
      fail("exponent too large");
    }
    const int n = std::stoi(digits);
    PolyFn r = PolyFn::constant(chart_, Rational(1));
    for (int k = 0; k < n; ++k) r = r * base;
    return r;
  }

  std::string read_digits() {
    std::string d;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) d += src_[pos_++];
    return d;
  }

  PolyFn primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      PolyFn inner = expr();
      if (!accept(')')) fail("expected `)`");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = read_digits();
      std::string den = "1";
      if (pos_ < src_.size() && src_[pos_] == '/') {
        ++pos_;
        den = read_digits();
        if (den.empty()) fail("expected denominator digits");
        if (den.find_first_not_of('0') == std::string::npos) fail("zero denominator");
      }
      return PolyFn::constant(chart_, Rational(num) / Rational(den));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      std::string id;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        id += src_[pos_++];
      auto axis = chart_->index_of(id);
      if (!axis) throw ParseError("unknown identifier `" + id + "`", start);
      return PolyFn::variable(chart_, *axis);
    }
    fail("unexpected `" + std::string(1, c) + "`");
  }

  std::string_view src_;
  const ChartPtr& chart_;
  std::size_t pos_ = 0;
};

} // namespace

PolyFn parse_poly(std::string_view src, const ChartPtr& chart) { return Parser(src, chart).parse(); }

} // namespace aq
