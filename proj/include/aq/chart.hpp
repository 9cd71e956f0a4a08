#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aq {

/// Base class of all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different charts or have incompatible shapes.
class ChartMismatch : public Error {
public:
  using Error::Error;
};

/// Input violates an operation's precondition.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// An iterative or numeric procedure did not reach its tolerance.
class NonConvergence : public Error {
public:
  using Error::Error;
};

/// Local coordinate chart: an ordered list of distinct identifiers.
class Chart {
public:
  explicit Chart(std::vector<std::string> coord_names);

  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t axis) const { return names_.at(axis); }
  std::optional<std::size_t> index_of(const std::string& name) const;

  friend bool operator==(const Chart& a, const Chart& b) { return a.names_ == b.names_; }

private:
  std::vector<std::string> names_;
};

using ChartPtr = std::shared_ptr<const Chart>;

inline ChartPtr make_chart(std::vector<std::string> names) {
  return std::make_shared<const Chart>(std::move(names));
}

/// Identifier grammar `[a-zA-Z][a-zA-Z0-9_]*`.
bool is_identifier(const std::string& s);

inline bool same_chart(const ChartPtr& a, const ChartPtr& b) {
  return a == b || (a && b && *a == *b);
}

inline void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* what) {
  if (!same_chart(a, b)) throw ChartMismatch(std::string(what) + ": chart mismatch");
}

} // namespace aq
