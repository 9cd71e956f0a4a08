#pragma once

#include "aq/polynomial.hpp"

#include <string>
#include <string_view>

namespace aq {

/// Malformed expression; `position` is the 0-based character offset of the offending token.
class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

/// Parses the expression grammar
///
///   expr    := term (('+' | '-') term)*
///   term    := unary ('*' unary)*
///   unary   := '-' unary | '+' unary | power
///   power   := primary ('^' integer)?
///   primary := rational | identifier | '(' expr ')'
///   rational:= digits ('/' digits)?
///
/// into canonical sparse form over `chart`.
PolyFn parse_poly(std::string_view src, const ChartPtr& chart);

} // namespace aq
