/**
 * @file plot.cpp
 */
#include "semcom/eval/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace semcom::eval {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<Series>& series) {
  if (series.empty()) throw std::invalid_argument("plot: no series");
  double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
  for (const Series& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty())
      throw std::invalid_argument("plot: series '" + s.label + "' malformed");
    for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
    for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
  }
  if (xmax == xmin) { xmax += 1.0; xmin -= 1.0; }
  if (ymax == ymin) { ymax += 1.0; ymin -= 1.0; }
  const double pad_y = 0.05 * (ymax - ymin);
  ymin -= pad_y;
  ymax += pad_y;

  const double W = 800, H = 560;
  const double L = 80, R = 30, T = 50, B = 60;  // margins
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("plot: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"17\">" << escape(title) << "</text>\n";

  // axes
  out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R
      << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\""
      << H - B << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0;
    const double fy = ymin + (ymax - ymin) * i / 5.0;
    out << "<line x1=\"" << px(fx) << "\" y1=\"" << H - B << "\" x2=\"" << px(fx)
        << "\" y2=\"" << H - B + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(fx) << "\" y=\"" << H - B + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << num(fx) << "</text>\n";
    out << "<line x1=\"" << L - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << L
        << "\" y2=\"" << py(fy) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << L - 8 << "\" y=\"" << py(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << num(fy) << "</text>\n";
  }
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape(xlabel) << "</text>\n";
  out << "<text x=\"20\" y=\"" << (T + H - B) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
      << "transform=\"rotate(-90 20 " << (T + H - B) / 2 << ")\">" << escape(ylabel)
      << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out << ' ';
      out << num(px(s.x[i])) << ',' << num(py(s.y[i]));
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    const double ly = T + 18.0 * static_cast<double>(si);
    out << "<rect x=\"" << W - R - 170 << "\" y=\"" << ly << "\" width=\"12\" "
        << "height=\"12\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << W - R - 152 << "\" y=\"" << ly + 11
        << "\" font-family=\"sans-serif\" font-size=\"13\">" << escape(s.label)
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace semcom::eval
