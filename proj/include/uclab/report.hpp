#pragma once

#include <string>
#include <utility>
#include <vector>

namespace uclab {

inline constexpr const char* kToolVersion = "uclab 1.0.0";
inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip decimal form, stable across runs.
std::string format_double(double x);

/// CSV with a leading "# schemaVersion=N" comment line; numeric cells go
/// through format_double so reruns are byte-identical.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  std::string str() const;
  int rows() const { return static_cast<int>(rows_.size()); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct RunReport {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> config;
  int rows_total = 0;
  int rows_passed = 0;
  long first_failure_row = -1;  // 1-based data row

  void count(bool pass);
};

/// "PASS 1000/1000", "FAIL 999/1000 (see row 412)",
/// "PASS 0/0 (no checks executed)".
std::string emit_summary(const RunReport& report);

}  // namespace uclab
