/**
 * @file plot.hpp
 * @brief Line plots as standalone SVG files.
 *
 * Output is deterministic: fixed canvas, fixed palette, %.6g number
 * formatting. Good enough to eyeball experiment curves without pulling in a
 * plotting stack.
 */
#pragma once

#include <string>
#include <vector>

namespace semcom::eval {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<Series>& series);

}  // namespace semcom::eval
