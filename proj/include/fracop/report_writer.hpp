#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracop {

/// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_number(double x);

/// Column-oriented numeric table written as CSV. Complex data goes in as two
/// columns (name_re, name_im).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  void add(std::string name, std::vector<double> values);
  void write_csv(std::ostream& os) const;
};

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  /// Markers only, no connecting line.
  bool points = false;
};

struct Plot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  std::vector<PlotSeries> series;
  /// Free text lines drawn in the upper right corner.
  std::vector<std::string> notes;

  /// Standalone SVG. Non-finite points and, on log axes, non-positive ones
  /// are skipped.
  void write_svg(std::ostream& os) const;
};

}  // namespace fracop
