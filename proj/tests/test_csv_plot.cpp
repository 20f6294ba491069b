#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "semcom/eval/csv.hpp"
#include "semcom/eval/plot.hpp"

using namespace semcom;
using namespace semcom::eval;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_path(const std::string& tag, const std::string& ext) {
  return fs::temp_directory_path() /
         (tag + "_" + std::to_string(::getpid()) + ext);
}

}  // namespace

TEST_CASE("csv_double round-trips doubles exactly") {
  for (double v : {0.0, 1.0, -1.5, 1.0 / 3.0, 3.141592653589793,
                   1e-12, 123456789.123456789, -2.2250738585072014e-308}) {
    const std::string s = csv_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(csv_double(2.0) == "2");
  // Equal values produce equal bytes.
  CHECK(csv_double(0.1 + 0.2) == csv_double(0.1 + 0.2));
  CHECK(csv_double(0.1 + 0.2) != csv_double(0.3));  // they differ in binary
}

TEST_CASE("csv writer emits a header and enforces column counts") {
  const fs::path p = temp_path("csv", ".csv");
  {
    CsvWriter w(p.string(), {"snr_db", "f1", "scheme"});
    CHECK(w.path() == p.string());
    w.row({csv_double(14.0), csv_double(0.5), "semantic_gnn"});
    w.row({csv_double(-6.0), csv_double(0.25), "huffman"});
    CHECK_THROWS_AS(w.row({"too", "few"}), std::invalid_argument);
  }
  const std::string text = slurp(p);
  CHECK(text ==
        "snr_db,f1,scheme\n"
        "14,0.5,semantic_gnn\n"
        "-6,0.25,huffman\n");
  fs::remove(p);
}

TEST_CASE("csv writer output is byte-deterministic across runs") {
  const fs::path a = temp_path("csv_a", ".csv");
  const fs::path b = temp_path("csv_b", ".csv");
  for (const fs::path& p : {a, b}) {
    CsvWriter w(p.string(), {"x", "y"});
    for (int i = 0; i < 50; ++i)
      w.row({csv_double(i * 0.1), csv_double(i * i / 7.0)});
  }
  CHECK(slurp(a) == slurp(b));
  fs::remove(a);
  fs::remove(b);
}

TEST_CASE("svg plot renders every series and axis labels") {
  const fs::path p = temp_path("plot", ".svg");
  Series s1{"semantic_gnn", {-6, 0, 6, 12}, {0.1, 0.4, 0.8, 0.95}};
  Series s2{"huffman", {-6, 0, 6, 12}, {0.0, 0.0, 0.2, 0.9}};
  write_svg_plot(p.string(), "Reconstruction vs SNR", "SNR (dB)", "Triple F1",
                 {s1, s2});

  const std::string svg = slurp(p);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.rfind("</svg>") != std::string::npos);
  CHECK(svg.find("Reconstruction vs SNR") != std::string::npos);
  CHECK(svg.find("SNR (dB)") != std::string::npos);
  CHECK(svg.find("Triple F1") != std::string::npos);
  CHECK(svg.find("semantic_gnn") != std::string::npos);
  CHECK(svg.find("huffman") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);

  // Deterministic bytes for identical input.
  const fs::path q = temp_path("plot2", ".svg");
  write_svg_plot(q.string(), "Reconstruction vs SNR", "SNR (dB)", "Triple F1",
                 {s1, s2});
  CHECK(slurp(p) == slurp(q));
  fs::remove(p);
  fs::remove(q);
}

TEST_CASE("svg plot tolerates degenerate inputs") {
  const fs::path p = temp_path("plot_degen", ".svg");
  // Single point and constant series must not divide by zero.
  write_svg_plot(p.string(), "t", "x", "y",
                 {Series{"dot", {1.0}, {2.0}},
                  Series{"flat", {0, 1, 2}, {5, 5, 5}}});
  const std::string svg = slurp(p);
  CHECK(svg.find("<svg") != std::string::npos);
  fs::remove(p);

  CHECK_THROWS(write_svg_plot(p.string(), "t", "x", "y",
                              {Series{"bad", {1, 2}, {1}}}));
}
