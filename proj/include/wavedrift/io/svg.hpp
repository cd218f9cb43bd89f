#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace wavedrift::io {

/// Data-space rectangle mapped onto the drawing area.
struct Viewport {
  double x_min;
  double x_max;
  double y_min;
  double y_max;

  /// Smallest viewport containing all points, padded by `pad` of each span.
  static Viewport fit(const std::vector<Eigen::Vector2d>& points, double pad = 0.05);
  /// Grows the shorter span so that both axes share one scale on a
  /// width x height drawing area.
  Viewport equal_aspect(double width, double height) const;
};

/// Minimal SVG writer: paths, polylines, circles and text in data
/// coordinates, with a framed plot area and axis labels. Coordinates are
/// written with two decimals so output is stable and diffable.
class SvgDocument {
 public:
  SvgDocument(double width, double height, Viewport view, double margin = 60.0);

  /// One <path> element; each inner vector becomes an "M ... L ..." subpath.
  void path(const std::vector<std::vector<Eigen::Vector2d>>& subpaths, std::string_view stroke,
            std::string_view label = {}, double stroke_width = 1.5);
  void polyline(const std::vector<Eigen::Vector2d>& points, std::string_view stroke,
                double stroke_width = 1.0);
  void circle(const Eigen::Vector2d& centre, double radius_px, std::string_view fill);
  void text(const Eigen::Vector2d& at, std::string_view content, double size_px = 12.0);
  /// Frame, min/max tick labels and axis titles.
  void axes(std::string_view x_label, std::string_view y_label, std::string_view title);

  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;
  void text_px(double x, double y, std::string_view content, double size_px,
               std::string_view anchor);

  double width_;
  double height_;
  Viewport view_;
  double margin_;
  std::ostringstream body_;
};

/// Escapes the XML special characters.
std::string xml_escape(std::string_view text);

}  // namespace wavedrift::io
