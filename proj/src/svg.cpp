#include "wavedrift/io/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <limits>


namespace wavedrift::io {

namespace {

std::string fixed2(double v) {
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 2);
  std::string s(buf.data(), res.ptr);
  return s == "-0.00" ? "0.00" : s;
}

std::string short_number(double v) {
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 4);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

Viewport Viewport::fit(const std::vector<Eigen::Vector2d>& points, double pad) {
  Viewport v{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : points) {
    v.x_min = std::min(v.x_min, p.x());
    v.x_max = std::max(v.x_max, p.x());
    v.y_min = std::min(v.y_min, p.y());
    v.y_max = std::max(v.y_max, p.y());
  }
  if (points.empty()) return {0.0, 1.0, 0.0, 1.0};
  const double dx = std::max(v.x_max - v.x_min, 1e-12);
  const double dy = std::max(v.y_max - v.y_min, 1e-12);
  return {v.x_min - pad * dx, v.x_max + pad * dx, v.y_min - pad * dy, v.y_max + pad * dy};
}

Viewport Viewport::equal_aspect(double width, double height) const {
  const double sx = (x_max - x_min) / width;
  const double sy = (y_max - y_min) / height;
  const double s = std::max(sx, sy);
  const double cx = (x_min + x_max) / 2;
  const double cy = (y_min + y_max) / 2;
  return {cx - s * width / 2, cx + s * width / 2, cy - s * height / 2, cy + s * height / 2};
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

SvgDocument::SvgDocument(double width, double height, Viewport view, double margin)
    : width_(width), height_(height), view_(view), margin_(margin) {}

double SvgDocument::px(double x) const {
  return margin_ + (x - view_.x_min) / (view_.x_max - view_.x_min) * (width_ - 2 * margin_);
}

double SvgDocument::py(double y) const {
  return height_ - margin_ -
         (y - view_.y_min) / (view_.y_max - view_.y_min) * (height_ - 2 * margin_);
}

void SvgDocument::path(const std::vector<std::vector<Eigen::Vector2d>>& subpaths,
                       std::string_view stroke, std::string_view label, double stroke_width) {
  body_ << "<path";
  if (!label.empty()) body_ << " data-label=\"" << xml_escape(label) << '"';
  body_ << " fill=\"none\" stroke=\"" << xml_escape(stroke) << "\" stroke-width=\""
        << fixed2(stroke_width) << "\" d=\"";
  bool first_cmd = true;
  for (const auto& sub : subpaths) {
    for (std::size_t i = 0; i < sub.size(); ++i) {
      if (!first_cmd) body_ << ' ';
      body_ << (i == 0 ? 'M' : 'L') << fixed2(px(sub[i].x())) << ',' << fixed2(py(sub[i].y()));
      first_cmd = false;
    }
  }
  body_ << "\"/>\n";
}

void SvgDocument::polyline(const std::vector<Eigen::Vector2d>& points, std::string_view stroke,
                           double stroke_width) {
  body_ << "<polyline fill=\"none\" stroke=\"" << xml_escape(stroke) << "\" stroke-width=\""
        << fixed2(stroke_width) << "\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) body_ << ' ';
    body_ << fixed2(px(points[i].x())) << ',' << fixed2(py(points[i].y()));
  }
  body_ << "\"/>\n";
}

void SvgDocument::circle(const Eigen::Vector2d& centre, double radius_px, std::string_view fill) {
  body_ << "<circle cx=\"" << fixed2(px(centre.x())) << "\" cy=\"" << fixed2(py(centre.y()))
        << "\" r=\"" << fixed2(radius_px) << "\" fill=\"" << xml_escape(fill) << "\"/>\n";
}

void SvgDocument::text(const Eigen::Vector2d& at, std::string_view content, double size_px) {
  text_px(px(at.x()), py(at.y()), content, size_px, "start");
}

void SvgDocument::text_px(double x, double y, std::string_view content, double size_px,
                          std::string_view anchor) {
  body_ << "<text x=\"" << fixed2(x) << "\" y=\"" << fixed2(y) << "\" font-size=\""
        << fixed2(size_px) << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">"
        << xml_escape(content) << "</text>\n";
}

void SvgDocument::axes(std::string_view x_label, std::string_view y_label,
                       std::string_view title) {
  const double l = margin_, r = width_ - margin_, t = margin_, b = height_ - margin_;
  body_ << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.00\" points=\""
        << fixed2(l) << ',' << fixed2(t) << ' ' << fixed2(r) << ',' << fixed2(t) << ' '
        << fixed2(r) << ',' << fixed2(b) << ' ' << fixed2(l) << ',' << fixed2(b) << ' '
        << fixed2(l) << ',' << fixed2(t) << "\"/>\n";
  text_px(l, b + 16, short_number(view_.x_min), 11, "middle");
  text_px(r, b + 16, short_number(view_.x_max), 11, "middle");
  text_px(l - 6, b, short_number(view_.y_min), 11, "end");
  text_px(l - 6, t + 4, short_number(view_.y_max), 11, "end");
  text_px((l + r) / 2, b + 36, x_label, 13, "middle");
  text_px(l - 40, (t + b) / 2, y_label, 13, "middle");
  text_px((l + r) / 2, t - 20, title, 15, "middle");
}

std::string SvgDocument::str() const {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed2(width_) << "\" height=\""
      << fixed2(height_) << "\" viewBox=\"0 0 " << fixed2(width_) << ' ' << fixed2(height_)
      << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

}  // namespace wavedrift::io
