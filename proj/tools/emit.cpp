#include "emit.hpp"

#include <algorithm>
#include <cmath>

namespace diracmech::cli {

void write_svg_series(const std::string& path, const std::string& title,
                      const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) {
    throw ConfigError("svg: series must be non-empty and equal-length");
  }
  const double W = 900, H = 500, ml = 80, mr = 20, mt = 40, mb = 50;
  double xmin = *std::min_element(x.begin(), x.end());
  double xmax = *std::max_element(x.begin(), x.end());
  double ymin = *std::min_element(y.begin(), y.end());
  double ymax = *std::max_element(y.begin(), y.end());
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) {
    ymax += 0.5;
    ymin -= 0.5;
  }
  auto px = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (v - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output SVG: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << title << "</text>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
      << H - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
      << "\" stroke=\"black\"/>\n";
  for (auto [v, anchor] : {std::pair{xmin, ml}, std::pair{xmax, W - mr}}) {
    out << "<text x=\"" << anchor << "\" y=\"" << H - mb + 24
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << num17(v)
        << "</text>\n";
  }
  for (auto [v, ypos] : {std::pair{ymin, H - mb}, std::pair{ymax, mt}}) {
    out << "<text x=\"" << ml - 8 << "\" y=\"" << ypos + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << num17(v)
        << "</text>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\" points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out << ' ';
    out << px(x[i]) << ',' << py(y[i]);
  }
  out << "\"/>\n</svg>\n";
}

}  // namespace diracmech::cli
