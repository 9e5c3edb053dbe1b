#include "uclab/report.hpp"

#include <cstdio>
#include <sstream>

namespace uclab {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvBuilder::CsvBuilder(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvBuilder::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::invalid_argument("csv row width mismatch");
  rows_.push_back(std::move(cells));
}

std::string CsvBuilder::str() const {
  std::ostringstream out;
  out << "# schemaVersion=" << kSchemaVersion << "\n";
  for (size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
  out << "\n";
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  return out.str();
}

void RunReport::count(bool pass) {
  ++rows_total;
  if (pass)
    ++rows_passed;
  else if (first_failure_row < 0)
    first_failure_row = rows_total;
}

std::string emit_summary(const RunReport& report) {
  std::ostringstream out;
  const bool ok = report.rows_passed == report.rows_total;
  out << (ok ? "PASS " : "FAIL ") << report.rows_passed << "/" << report.rows_total;
  if (!ok) out << " (see row " << report.first_failure_row << ")";
  if (report.rows_total == 0) out << " (no checks executed)";
  return out.str();
}

}  // namespace uclab
