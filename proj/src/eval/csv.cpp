/**
 * @file csv.cpp
 */
#include "semcom/eval/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace semcom::eval {

std::string csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), out_(path, std::ios::trunc), columns_(columns.size()) {
  if (!out_) throw std::runtime_error("csv: cannot open " + path);
  if (columns.empty()) throw std::invalid_argument("csv: no columns");
  row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::invalid_argument("csv: cell count does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  out_.flush();
}

}  // namespace semcom::eval
