#pragma once

// CSV and static-SVG emission. Numbers serialized with 17 significant digits
// so runs are bit-reproducible across platforms up to the FP environment;
// comma separators, LF line endings, mandatory header row.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace diracmech::cli {

inline std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw ConfigError("cannot open output CSV: " + path);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

/// Single-series static line chart.
void write_svg_series(const std::string& path, const std::string& title,
                      const std::vector<double>& x, const std::vector<double>& y);

}  // namespace diracmech::cli
