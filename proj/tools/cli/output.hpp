#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "beltrami/mesh.hpp"
#include "beltrami/xsection.hpp"
#include "config.hpp"

namespace beltrami::cli {

inline constexpr int kFormatVersion = 1;

Json report_header(const std::string& command, const Json& config, const Json& input_hash);

void write_file(const std::filesystem::path& path, const std::string& content);
std::string dump_report(const Json& report);

// Shortest representation that round-trips (printf %.17g).
std::string fmt(double v);

// Minimal SVG canvas mapping a data box onto a fixed-size viewport with
// z (or y) pointing up.
class Svg {
 public:
  Svg(double x0, double y0, double x1, double y1, int width = 640);

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                double width = 1.0, bool closed = false);
  void segment(double xa, double ya, double xb, double yb, const std::string& stroke,
               double width = 1.0);
  void dot(double x, double y, double radius, const std::string& fill);
  void text(double x, double y, const std::string& s, int size = 12);
  // Margin annotation in pixel coordinates.
  void label(int px, int py, const std::string& s, int size = 12);
  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;

  double x0_, y0_, scale_x_, scale_y_;
  int width_, height_;
  std::string body_;
};

std::string criterion_svg(const CrossSection& cs, const CriterionReport& rep);
std::string mesh_svg(const TriMesh& mesh);
// Contour lines of a piecewise-linear nodal field.
std::string contour_svg(const TriMesh& mesh, const Eigen::VectorXd& values, int levels = 12);
// Line chart of y against x with dots at the samples.
std::string chart_svg(const std::vector<std::pair<double, double>>& xy, const std::string& xlabel,
                      const std::string& ylabel);

}  // namespace beltrami::cli
