/**
 * @file csv.hpp
 * @brief Minimal CSV emission with deterministic number formatting.
 *
 * Doubles are printed with %.17g so that equal values produce equal bytes,
 * which the reproducibility checks compare directly.
 */
#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace semcom::eval {

std::string csv_double(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t columns_ = 0;
};

}  // namespace semcom::eval
