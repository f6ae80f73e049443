#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ncsattack::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 480;
  bool equal_aspect = false;
};

/// Self-contained SVG document with one polyline per series and a legend.
std::string line_plot(const PlotSpec& spec, const std::vector<Series>& series);

/// Throws IoError with the path.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ncsattack::svg
