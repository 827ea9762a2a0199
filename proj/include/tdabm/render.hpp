#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "tdabm/graph.hpp"
#include "tdabm/layout.hpp"

namespace tdabm {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;

  bool operator==(const Rgb&) const = default;
  std::string hex() const;
};

/// Colour ramps, each running from the low end of the colour bar to the high
/// end. Viridis, Grayscale and BlueRed are monotone in lightness.
enum class Palette { Viridis, Grayscale, BlueRed, Rainbow };

Palette parse_palette(std::string_view s);
std::string_view to_string(Palette p);

/// Colour at position t in [0, 1] along the palette.
Rgb palette_color(Palette p, double t);

struct RenderSpec {
  bool show_labels = true;
  bool show_legend = false;
  int n_colors = 100;
  int width_px = 512;
  int height_px = 512;
  Palette palette = Palette::Viridis;
  SizeScale<double> size;

  /// Throws std::invalid_argument unless n_colors >= 2 and both dimensions
  /// are at least 64.
  void validate() const;
};

/// 1-based colour bin. Values are clamped to [lo, hi] and split into n_colors
/// equal-width bins, each closed on the left with the last also closed on the
/// right: lo is bin 1, hi is bin n_colors. A degenerate range (lo == hi)
/// puts everything in the middle bin, (n_colors + 1) / 2.
int color_bin(double value, double lo, double hi, int n_colors);

/// Palette colour of a value's bin; bin b of n sits at t = (b - 1) / (n - 1).
Rgb color_of(double value, double lo, double hi, const RenderSpec& spec);

/// SVG 1.1 document: one <line class="edge"> per edge, one
/// <circle class="vertex"> per vertex sized by cardinality and filled by
/// colour, optional <text class="label"> ball ids, and a vertical colour bar
/// with its range annotated. Output bytes depend only on the arguments.
std::string render_svg(const MapperGraphd& g, const LayoutResult<double>& layout,
                       const RenderSpec& spec);

}  // namespace tdabm
