#include "tdabm/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tdabm {

namespace {

struct Stop {
  double t;
  Rgb c;
};

constexpr std::array kViridis{
    Stop{0.00, {68, 1, 84}},    Stop{0.25, {59, 82, 139}},  Stop{0.50, {33, 145, 140}},
    Stop{0.75, {94, 201, 98}},  Stop{1.00, {253, 231, 37}},
};
constexpr std::array kGrayscale{Stop{0.0, {20, 20, 20}}, Stop{1.0, {235, 235, 235}}};
constexpr std::array kBlueRed{Stop{0.0, {33, 102, 172}}, Stop{0.5, {247, 247, 247}},
                              Stop{1.0, {178, 24, 43}}};
constexpr std::array kRainbow{
    Stop{0.00, {0, 0, 255}},   Stop{0.25, {0, 255, 255}}, Stop{0.50, {0, 255, 0}},
    Stop{0.75, {255, 255, 0}}, Stop{1.00, {255, 0, 0}},
};

template <std::size_t N>
Rgb interpolate(const std::array<Stop, N>& stops, double t) {
  t = std::clamp(t, 0.0, 1.0);
  std::size_t i = 1;
  while (i + 1 < N && t > stops[i].t) ++i;
  const Stop& a = stops[i - 1];
  const Stop& b = stops[i];
  const double u = (t - a.t) / (b.t - a.t);
  auto mix = [u](std::uint8_t x, std::uint8_t y) {
    return static_cast<std::uint8_t>(std::lround(x + u * (static_cast<double>(y) - x)));
  };
  return {mix(a.c.r, b.c.r), mix(a.c.g, b.c.g), mix(a.c.b, b.c.b)};
}

// Fixed two-decimal coordinates keep the output byte-stable.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string label_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string Rgb::hex() const {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

Palette parse_palette(std::string_view s) {
  if (s == "viridis") return Palette::Viridis;
  if (s == "grayscale") return Palette::Grayscale;
  if (s == "blue-red") return Palette::BlueRed;
  if (s == "rainbow") return Palette::Rainbow;
  throw std::invalid_argument("unknown palette '" + std::string(s) + "'");
}

std::string_view to_string(Palette p) {
  switch (p) {
    case Palette::Viridis: return "viridis";
    case Palette::Grayscale: return "grayscale";
    case Palette::BlueRed: return "blue-red";
    case Palette::Rainbow: return "rainbow";
  }
  return "viridis";
}

Rgb palette_color(Palette p, double t) {
  switch (p) {
    case Palette::Viridis: return interpolate(kViridis, t);
    case Palette::Grayscale: return interpolate(kGrayscale, t);
    case Palette::BlueRed: return interpolate(kBlueRed, t);
    case Palette::Rainbow: return interpolate(kRainbow, t);
  }
  return {};
}

void RenderSpec::validate() const {
  if (n_colors < 2) throw std::invalid_argument("n_colors must be at least 2");
  if (width_px < 64 || height_px < 64) throw std::invalid_argument("image dimensions must be at least 64");
  if (!(size.min_size > 0) || size.min_size > size.max_size) {
    throw std::invalid_argument("size range must satisfy 0 < min <= max");
  }
}

int color_bin(double value, double lo, double hi, int n_colors) {
  if (n_colors < 1) throw std::invalid_argument("n_colors must be positive");
  if (!(lo < hi)) return (n_colors + 1) / 2;
  value = std::clamp(value, lo, hi);
  const double t = (value - lo) / (hi - lo);
  const int bin = static_cast<int>(std::floor(t * n_colors)) + 1;
  return std::clamp(bin, 1, n_colors);
}

Rgb color_of(double value, double lo, double hi, const RenderSpec& spec) {
  const int bin = color_bin(value, lo, hi, spec.n_colors);
  const double t = spec.n_colors > 1 ? static_cast<double>(bin - 1) / (spec.n_colors - 1) : 0.0;
  return palette_color(spec.palette, t);
}

std::string render_svg(const MapperGraphd& g, const LayoutResult<double>& layout,
                       const RenderSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(g.vertices.size());
  if (layout.positions.rows() != n) throw std::invalid_argument("layout does not cover every vertex");

  const auto summary = graph_summary(g);
  const double lo = summary.color_range ? summary.color_range->first : 0.0;
  const double hi = summary.color_range ? summary.color_range->second : 0.0;
  const Eigen::VectorXd sizes = vertex_sizes(g, spec.size);

  const double w = spec.width_px;
  const double h = spec.height_px;
  const double bar_strip = 70.0;
  const double legend_strip = spec.show_legend ? 90.0 : 0.0;
  const double margin = spec.size.max_size + 4.0;
  const double plot_w = std::max(1.0, w - bar_strip - legend_strip - 2 * margin);
  const double plot_h = std::max(1.0, h - 2 * margin);
  const double scale = std::min(plot_w, plot_h);
  const double cx = margin + plot_w / 2;
  const double cy = margin + plot_h / 2;
  auto px = [&](Eigen::Index i) { return cx + layout.positions(i, 0) * scale; };
  auto py = [&](Eigen::Index i) { return cy - layout.positions(i, 1) * scale; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(spec.width_px) +
       "\" height=\"" + std::to_string(spec.height_px) + "\" viewBox=\"0 0 " +
       std::to_string(spec.width_px) + " " + std::to_string(spec.height_px) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"#ffffff\"/>\n";

  s += "<g id=\"edges\" stroke=\"#555555\" stroke-width=\"1.5\">\n";
  for (const Edge& e : g.edges) {
    const auto a = static_cast<Eigen::Index>(e.from) - 1;
    const auto b = static_cast<Eigen::Index>(e.to) - 1;
    s += "<line class=\"edge\" data-from=\"" + std::to_string(e.from) + "\" data-to=\"" +
         std::to_string(e.to) + "\" data-strength=\"" + std::to_string(e.strength) + "\" x1=\"" +
         num(px(a)) + "\" y1=\"" + num(py(a)) + "\" x2=\"" + num(px(b)) + "\" y2=\"" + num(py(b)) +
         "\"/>\n";
  }
  s += "</g>\n";

  s += "<g id=\"vertices\" stroke=\"#222222\" stroke-width=\"1\">\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& v = g.vertices[static_cast<std::size_t>(i)];
    const std::string fill = v.color ? color_of(*v.color, lo, hi, spec).hex() : std::string("#bfbfbf");
    s += "<circle class=\"vertex\" data-id=\"" + std::to_string(v.id) + "\" data-size=\"" +
         std::to_string(v.cardinality) + "\" cx=\"" + num(px(i)) + "\" cy=\"" + num(py(i)) + "\" r=\"" +
         num(sizes(i)) + "\" fill=\"" + fill + "\"/>\n";
  }
  s += "</g>\n";

  if (spec.show_labels) {
    s += "<g id=\"labels\" font-family=\"sans-serif\" text-anchor=\"middle\" dominant-baseline=\"central\" "
         "fill=\"#000000\">\n";
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& v = g.vertices[static_cast<std::size_t>(i)];
      s += "<text class=\"label\" x=\"" + num(px(i)) + "\" y=\"" + num(py(i)) + "\" font-size=\"" +
           num(std::max(6.0, sizes(i))) + "\">" + std::to_string(v.id) + "</text>\n";
    }
    s += "</g>\n";
  }

  // Colour bar: one band per bin, high values at the top.
  const double bar_x = w - bar_strip + 10.0;
  const double bar_w = 16.0;
  const double bar_top = margin;
  const double bar_h = plot_h;
  const double band = bar_h / spec.n_colors;
  s += "<g id=\"colorbar\">\n";
  for (int b = 1; b <= spec.n_colors; ++b) {
    const double t = static_cast<double>(b - 1) / (spec.n_colors - 1);
    const double y = bar_top + bar_h - b * band;
    s += "<rect class=\"colorbar\" x=\"" + num(bar_x) + "\" y=\"" + num(y) + "\" width=\"" + num(bar_w) +
         "\" height=\"" + num(band) + "\" fill=\"" + palette_color(spec.palette, t).hex() + "\"/>\n";
  }
  s += "<text class=\"colorbar-label\" x=\"" + num(bar_x + bar_w + 4) + "\" y=\"" + num(bar_top + 4) +
       "\" font-family=\"sans-serif\" font-size=\"10\">" + label_number(hi) + "</text>\n";
  s += "<text class=\"colorbar-label\" x=\"" + num(bar_x + bar_w + 4) + "\" y=\"" +
       num(bar_top + bar_h) + "\" font-family=\"sans-serif\" font-size=\"10\">" + label_number(lo) +
       "</text>\n";
  s += "</g>\n";

  if (spec.show_legend) {
    const double lx = w - bar_strip - legend_strip + 6.0;
    s += "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"9\">\n";
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& v = g.vertices[static_cast<std::size_t>(i)];
      const double y = margin + 11.0 * static_cast<double>(i);
      if (y > h - 4.0) break;
      s += "<text class=\"legend\" x=\"" + num(lx) + "\" y=\"" + num(y) + "\">" + std::to_string(v.id) +
           ": " + std::to_string(v.cardinality) + " pts</text>\n";
    }
    s += "</g>\n";
  }

  s += "</svg>\n";
  return s;
}

}  // namespace tdabm
