#include "aq/report.hpp"

#include "aq/chart.hpp"

#include <fstream>

namespace aq {

RunReport::RunReport(std::string command) : command_(std::move(command)) {}

void RunReport::check(const std::string& name, bool passed, const std::string& detail) {
  all_passed_ = all_passed_ && passed;
  nlohmann::ordered_json c;
  c["name"] = name;
  c["passed"] = passed;
  if (!detail.empty()) c["detail"] = detail;
  checks_.push_back(std::move(c));
  lines_.push_back(std::string(passed ? "[PASS] " : "[FAIL] ") + name + (detail.empty() ? "" : ": " + detail));
}

void RunReport::value(const std::string& key, nlohmann::ordered_json v) { values_[key] = std::move(v); }

bool RunReport::all_passed() const { return all_passed_; }

nlohmann::ordered_json RunReport::json() const {
  nlohmann::ordered_json j;
  j["report_version"] = version;
  j["command"] = command_;
  j["config"] = config_;
  j["checks"] = checks_;
  j["results"] = values_;
  j["passed"] = all_passed_;
  if (timing_ >= 0) j["timing_seconds"] = timing_;
  return j;
}

void RunReport::write_json(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write report to " + path);
  out << json().dump(2) << '\n';
}

} // namespace aq
