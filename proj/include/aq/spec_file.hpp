#pragma once

#include "aq/algebroid.hpp"
#include "aq/exact_linalg.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>

namespace aq {

/// Malformed or inconsistent algebroid file; the message carries the location.
class SpecError : public Error {
public:
  using Error::Error;
};

struct FockSettings {
  std::size_t modes = 1;
  std::size_t cutoff = 32;
  std::size_t buffer = 8;
};

struct StarSettings {
  std::size_t order = 2;
  std::uint64_t seed = 1;
  std::size_t trials = 20;
  /// Frame complex structure; when absent it defaults to Ω itself if Ω is orthogonal.
  std::optional<RatMatrix> J;
};

/// An algebroid presentation with its symplectic form, read from a JSON document.
/// Frame indices in the file are 1-based. A structure entry (i, j, k) also sets (j, i, k)
/// to its negative unless that entry is listed explicitly.
struct AlgebroidSpec {
  ChartPtr chart;
  AlgebroidPresentation algebroid;
  PolyMatrix<Rational> omega;
  std::optional<FockSettings> fock;
  std::optional<StarSettings> star;
  std::vector<std::vector<Rational>> points;
  nlohmann::ordered_json source;
};

AlgebroidSpec parse_spec(const std::string& text, const std::string& origin = "<input>");
AlgebroidSpec load_spec(const std::filesystem::path& path);

/// Parses `-?digits(/digits)?`.
Rational parse_rational(const std::string& s);

/// The frame complex structure used for the Wick tensor.
RatMatrix frame_complex_structure(const AlgebroidSpec& spec);

} // namespace aq
