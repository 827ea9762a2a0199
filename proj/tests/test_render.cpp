#include <regex>

#include <gtest/gtest.h>

#include "support.hpp"

namespace tdabm {
namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

MapperGraphd fixture_graph() {
  const auto data = testing::load_uniform_fixture();
  CoverConfig<double> cfg;
  cfg.epsilon = 0.4;
  const auto cover = build_cover(data.points, cfg);
  return color_graph(build_graph(cover), cover, data.outcome.values, AggregateKind::Mean);
}

TEST(ColorBin, Endpoints) {
  EXPECT_EQ(color_bin(0.0, 0.0, 1.0, 100), 1);
  EXPECT_EQ(color_bin(1.0, 0.0, 1.0, 100), 100);
  EXPECT_EQ(color_bin(-5.0, 0.0, 1.0, 100), 1);
  EXPECT_EQ(color_bin(7.0, 0.0, 1.0, 100), 100);
}

TEST(ColorBin, TwoBinsMidpointGoesUp) {
  // Bins [0, 0.5) and [0.5, 1].
  EXPECT_EQ(color_bin(0.5, 0.0, 1.0, 2), 2);
  EXPECT_EQ(color_bin(0.4999, 0.0, 1.0, 2), 1);
  EXPECT_EQ(color_bin(1.0, 0.0, 1.0, 2), 2);
}

TEST(ColorBin, DegenerateRangeUsesMiddleBin) {
  EXPECT_EQ(color_bin(3.0, 3.0, 3.0, 100), 50);
  EXPECT_EQ(color_bin(3.0, 3.0, 3.0, 5), 3);
}

TEST(ColorOf, EndpointsAndMonotone) {
  RenderSpec spec;
  for (Palette p : {Palette::Viridis, Palette::Grayscale, Palette::BlueRed, Palette::Rainbow}) {
    spec.palette = p;
    EXPECT_EQ(color_of(-1.0, -1.0, 2.0, spec), palette_color(p, 0.0));
    EXPECT_EQ(color_of(2.0, -1.0, 2.0, spec), palette_color(p, 1.0));
  }
  spec.palette = Palette::Grayscale;
  int previous = -1;
  for (int i = 0; i <= 200; ++i) {
    const Rgb c = color_of(i / 200.0, 0.0, 1.0, spec);
    EXPECT_GE(c.r, previous);
    previous = c.r;
  }
  EXPECT_EQ(palette_color(Palette::Viridis, 0.0).hex(), "#440154");
  EXPECT_EQ(parse_palette("blue-red"), Palette::BlueRed);
  EXPECT_THROW(parse_palette("jet"), std::invalid_argument);
}

TEST(RenderSvg, SingleVertex) {
  MapperGraphd g;
  g.vertices.push_back({1, 10, 0.5});
  g.landmarks.push_back(0);
  const auto svg = render_svg(g, spring_layout(g, 1), RenderSpec{});
  EXPECT_EQ(count(svg, "<circle"), 1u);
  EXPECT_EQ(count(svg, "<line"), 0u);
  EXPECT_TRUE(svg.starts_with("<?xml"));
}

TEST(RenderSvg, FixtureElementCounts) {
  const auto g = fixture_graph();
  const auto svg = render_svg(g, spring_layout(g, 42), RenderSpec{});
  EXPECT_EQ(count(svg, "<circle class=\"vertex\""), 7u);
  EXPECT_EQ(count(svg, "<line class=\"edge\""), g.edges.size());
  EXPECT_EQ(count(svg, "<text class=\"label\""), 7u);
  EXPECT_EQ(count(svg, "<rect class=\"colorbar\""), 100u);
  for (const auto& v : g.vertices) {
    EXPECT_EQ(count(svg, "data-id=\"" + std::to_string(v.id) + "\""), 1u);
  }
  for (const auto& e : g.edges) {
    EXPECT_EQ(count(svg, "data-from=\"" + std::to_string(e.from) + "\" data-to=\"" + std::to_string(e.to) + "\""), 1u);
  }
}

TEST(RenderSvg, RadiiFollowSizeScale) {
  const auto g = fixture_graph();
  RenderSpec spec;
  spec.size = {5.0, 15.0};
  const auto svg = render_svg(g, spring_layout(g, 42), spec);
  // Ball 1 is the largest, ball 6 the smallest.
  EXPECT_NE(svg.find("data-id=\"1\" data-size=\"223\""), std::string::npos);
  const std::regex largest("data-id=\"1\"[^>]* r=\"15.00\"");
  const std::regex smallest("data-id=\"6\"[^>]* r=\"5.00\"");
  EXPECT_TRUE(std::regex_search(svg, largest));
  EXPECT_TRUE(std::regex_search(svg, smallest));
}

TEST(RenderSvg, NoLabelsKeepsColorBarText) {
  const auto g = fixture_graph();
  RenderSpec spec;
  spec.show_labels = false;
  const auto svg = render_svg(g, spring_layout(g, 42), spec);
  EXPECT_EQ(count(svg, "class=\"label\""), 0u);
  EXPECT_EQ(count(svg, "class=\"colorbar-label\""), 2u);
}

TEST(RenderSvg, LegendListsBalls) {
  const auto g = fixture_graph();
  RenderSpec spec;
  spec.show_legend = true;
  const auto svg = render_svg(g, spring_layout(g, 42), spec);
  EXPECT_EQ(count(svg, "<text class=\"legend\""), 7u);
}

TEST(RenderSvg, ByteDeterministic) {
  const auto g = fixture_graph();
  const auto layout = spring_layout(g, 5);
  EXPECT_EQ(render_svg(g, layout, RenderSpec{}), render_svg(g, spring_layout(g, 5), RenderSpec{}));
}

TEST(RenderSvg, UncoloredGraphRenders) {
  const auto data = testing::load_uniform_fixture();
  CoverConfig<double> cfg;
  cfg.epsilon = 0.4;
  const auto g = build_graph(build_cover(data.points, cfg));
  const auto svg = render_svg(g, spring_layout(g, 42), RenderSpec{});
  EXPECT_EQ(count(svg, "fill=\"#bfbfbf\""), 7u);
}

TEST(RenderSvg, RejectsBadSpecAndLayout) {
  const auto g = fixture_graph();
  const auto layout = spring_layout(g, 42);
  RenderSpec spec;
  spec.n_colors = 1;
  EXPECT_THROW(render_svg(g, layout, spec), std::invalid_argument);
  spec = RenderSpec{};
  spec.width_px = 32;
  EXPECT_THROW(render_svg(g, layout, spec), std::invalid_argument);
  LayoutResult<double> short_layout;
  short_layout.positions.setZero(3, 2);
  EXPECT_THROW(render_svg(g, short_layout, RenderSpec{}), std::invalid_argument);
}

}  // namespace
}  // namespace tdabm
