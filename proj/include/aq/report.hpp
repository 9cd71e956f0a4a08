#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace aq {

/// Human-readable and JSON report of one CLI run. Insertion order is preserved so that
/// reports are byte-identical for identical inputs.
class RunReport {
public:
  static constexpr int version = 1;

  explicit RunReport(std::string command);

  void set_config(nlohmann::ordered_json config) { config_ = std::move(config); }
  void check(const std::string& name, bool passed, const std::string& detail = "");
  void value(const std::string& key, nlohmann::ordered_json v);
  void line(const std::string& text) { lines_.push_back(text); }
  void set_timing(double seconds) { timing_ = seconds; }

  bool all_passed() const;
  const std::vector<std::string>& lines() const { return lines_; }
  nlohmann::ordered_json json() const;
  void write_json(const std::string& path) const;

private:
  std::string command_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json checks_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json values_ = nlohmann::ordered_json::object();
  std::vector<std::string> lines_;
  double timing_ = -1;
  bool all_passed_ = true;
};

} // namespace aq
