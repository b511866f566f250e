#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "beltrami/errors.hpp"

#ifndef BELTRAMI_VERSION
#define BELTRAMI_VERSION "unknown"
#endif

namespace beltrami::cli {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<std::pair<double, double>> as_xy(const Polyline& p) {
  std::vector<std::pair<double, double>> out;
  out.reserve(p.size());
  for (const Point& q : p) out.emplace_back(q.r, q.z);
  return out;
}

struct Box {
  double r0 = 1e300, z0 = 1e300, r1 = -1e300, z1 = -1e300;
  void add(Point p) {
    r0 = std::min(r0, p.r);
    r1 = std::max(r1, p.r);
    z0 = std::min(z0, p.z);
    z1 = std::max(z1, p.z);
  }
  Svg canvas() const {
    const double pad = 0.05 * std::max(r1 - r0, z1 - z0) + 1e-9;
    return Svg(r0 - pad, z0 - pad, r1 + pad, z1 + pad);
  }
};

}  // namespace

Json report_header(const std::string& command, const Json& config, const Json& input_hash) {
  return {{"format_version", kFormatVersion},
          {"tool", "beltrami"},
          {"tool_version", BELTRAMI_VERSION},
          {"command", command},
          {"config", config},
          {"input_sha256", input_hash}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Svg::Svg(double x0, double y0, double x1, double y1, int width)
    : x0_(x0), y0_(y0), width_(width) {
  const double w = std::max(x1 - x0, 1e-12), h = std::max(y1 - y0, 1e-12);
  // Equal aspect for geometry; charts pass boxes already normalised.
  height_ = std::clamp(static_cast<int>(std::lround(width * h / w)), 120, 4 * width);
  scale_x_ = width_ / w;
  scale_y_ = height_ / h;
}

double Svg::px(double x) const { return (x - x0_) * scale_x_; }
double Svg::py(double y) const { return height_ - (y - y0_) * scale_y_; }

void Svg::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                   double width, bool closed) {
  if (pts.empty()) return;
  body_ += closed ? "<polygon" : "<polyline";
  body_ += " fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) +
           "\" points=\"";
  for (const auto& [x, y] : pts) body_ += num(px(x)) + "," + num(py(y)) + " ";
  body_ += "\"/>\n";
}

void Svg::segment(double xa, double ya, double xb, double yb, const std::string& stroke,
                  double width) {
  body_ += "<line x1=\"" + num(px(xa)) + "\" y1=\"" + num(py(ya)) + "\" x2=\"" + num(px(xb)) +
           "\" y2=\"" + num(py(yb)) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
           num(width) + "\"/>\n";
}

void Svg::dot(double x, double y, double radius, const std::string& fill) {
  body_ += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"" + num(radius) +
           "\" fill=\"" + fill + "\"/>\n";
}

void Svg::text(double x, double y, const std::string& s, int size) {
  label(static_cast<int>(px(x)), static_cast<int>(py(y)), s, size);
}

void Svg::label(int x, int y, const std::string& s, int size) {
  body_ += "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
           "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) + "\">" +
           escape(s) + "</text>\n";
}

std::string Svg::str() const {
  const int m = 40;
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width_ + 2 * m) +
         "\" height=\"" + std::to_string(height_ + 2 * m) + "\" viewBox=\"" +
         std::to_string(-m) + " " + std::to_string(-m) + " " + std::to_string(width_ + 2 * m) +
         " " + std::to_string(height_ + 2 * m) + "\">\n<rect x=\"" + std::to_string(-m) +
         "\" y=\"" + std::to_string(-m) + "\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
         body_ + "</svg>\n";
}

std::string criterion_svg(const CrossSection& cs, const CriterionReport& rep) {
  Box box;
  for (const Point& p : cs.outer()) box.add(p);
  Svg svg = box.canvas();
  svg.polyline(as_xy(cs.outer()), "black", 1.0, true);
  for (const Polyline& h : cs.holes()) svg.polyline(as_xy(h), "purple", 1.0, true);
  if (rep.l_minus.size() > 1) svg.polyline(as_xy(rep.l_minus), "blue", 3.0);
  for (const LengthPiece& piece : rep.l_plus) {
    svg.segment(piece.from.r, piece.from.z, piece.to.r, piece.to.z, "red", 3.0);
  }
  for (const Point& p : rep.n0_points) svg.dot(p.r, p.z, 3.0, "green");
  svg.label(0, -10, std::string("verdict: ") + to_string(rep.verdict));
  return svg.str();
}

std::string mesh_svg(const TriMesh& mesh) {
  Box box;
  for (const Point& p : mesh.vertices) box.add(p);
  Svg svg = box.canvas();
  for (const Triangle& t : mesh.triangles) {
    std::vector<std::pair<double, double>> pts;
    for (int v : t) pts.emplace_back(mesh.vertices[v].r, mesh.vertices[v].z);
    svg.polyline(pts, "#555", 0.3, true);
  }
  for (const BoundaryRun& run : boundary_trace(mesh)) {
    const char* colour = run.kind == RunKind::axis ? "green" : run.kind == RunKind::hole ? "purple"
                                                                                         : "black";
    for (const BoundaryEdge& e : run.edges) {
      svg.segment(mesh.vertices[e.a].r, mesh.vertices[e.a].z, mesh.vertices[e.b].r,
                  mesh.vertices[e.b].z, colour, 1.5);
    }
  }
  return svg.str();
}

std::string contour_svg(const TriMesh& mesh, const Eigen::VectorXd& values, int levels) {
  Box box;
  for (const Point& p : mesh.vertices) box.add(p);
  Svg svg = box.canvas();
  for (const BoundaryRun& run : boundary_trace(mesh)) {
    for (const BoundaryEdge& e : run.edges) {
      svg.segment(mesh.vertices[e.a].r, mesh.vertices[e.a].z, mesh.vertices[e.b].r,
                  mesh.vertices[e.b].z, "black", 1.0);
    }
  }
  const double lo = values.minCoeff(), hi = values.maxCoeff();
  if (!(hi > lo)) return svg.str();
  for (int l = 1; l <= levels; ++l) {
    const double c = lo + (hi - lo) * l / (levels + 1);
    const char* colour = c >= 0 ? "#c0392b" : "#2c3e80";
    for (const Triangle& t : mesh.triangles) {
      std::vector<Point> cut;
      for (int e = 0; e < 3; ++e) {
        const int a = t[e], b = t[(e + 1) % 3];
        const double fa = values[a] - c, fb = values[b] - c;
        if ((fa < 0) != (fb < 0)) {
          const double s = fa / (fa - fb);
          const Point& pa = mesh.vertices[a];
          const Point& pb = mesh.vertices[b];
          cut.push_back({pa.r + s * (pb.r - pa.r), pa.z + s * (pb.z - pa.z)});
        }
      }
      if (cut.size() == 2) svg.segment(cut[0].r, cut[0].z, cut[1].r, cut[1].z, colour, 0.8);
    }
  }
  return svg.str();
}

std::string chart_svg(const std::vector<std::pair<double, double>>& xy, const std::string& xlabel,
                      const std::string& ylabel) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& [x, y] : xy) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  if (xy.empty()) x0 = y0 = 0, x1 = y1 = 1;
  if (y1 - y0 < 1e-12 * std::max(1.0, std::abs(y1))) {
    y0 -= 0.5 * std::max(1e-12, std::abs(y0));
    y1 += 0.5 * std::max(1e-12, std::abs(y1));
  }
  if (x1 <= x0) x1 = x0 + 1.0;
  // Map onto a unit box so both axes share the plot area.
  const int w = 640, h = 360;
  Svg svg(0.0, 0.0, 1.0, static_cast<double>(h) / w, w);
  auto nx = [&](double x) { return (x - x0) / (x1 - x0); };
  auto ny = [&](double y) { return (y - y0) / (y1 - y0) * h / w; };
  svg.segment(0, 0, 1, 0, "black");
  svg.segment(0, 0, 0, static_cast<double>(h) / w, "black");
  std::vector<std::pair<double, double>> pts;
  for (const auto& [x, y] : xy) pts.emplace_back(nx(x), ny(y));
  svg.polyline(pts, "#1f77b4", 1.5);
  for (const auto& [x, y] : pts) svg.dot(x, y, 2.5, "#1f77b4");
  svg.label(w / 2 - 30, h + 30, xlabel);
  svg.label(-35, -12, ylabel);
  svg.label(0, h + 15, fmt_short(x0), 10);
  svg.label(w - 40, h + 15, fmt_short(x1), 10);
  svg.label(-38, h, fmt_short(y0), 10);
  svg.label(-38, 10, fmt_short(y1), 10);
  return svg.str();
}

}  // namespace beltrami::cli
