#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "tdabm/cover.hpp"

namespace tdabm {

/// A ball as a graph vertex. `id` is the 1-based ball id.
template <typename Scalar>
struct Vertex {
  std::size_t id = 0;
  std::size_t cardinality = 0;
  std::optional<Scalar> color;

  bool operator==(const Vertex&) const = default;
};

/// Undirected edge between two balls with a non-empty intersection, stored
/// once with from < to. Strength is the size of the intersection.
struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t strength = 0;

  auto operator<=>(const Edge&) const = default;
};

template <typename Scalar>
struct MapperGraph {
  std::vector<Vertex<Scalar>> vertices;  // ball-id order
  std::vector<Edge> edges;               // sorted by (from, to)
  std::vector<Eigen::Index> landmarks;   // 0-based row per ball id

  /// Edge lookup in either orientation.
  const Edge* find_edge(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{a, b},
                               [](const Edge& e, const std::pair<std::size_t, std::size_t>& key) {
                                 return std::pair{e.from, e.to} < key;
                               });
    if (it == edges.end() || it->from != a || it->to != b) return nullptr;
    return &*it;
  }

  bool operator==(const MapperGraph&) const = default;
};

using MapperGraphd = MapperGraph<double>;

enum class AggregateKind { Mean, Sd, Min, Max, Median, Count };

inline std::string_view to_string(AggregateKind k) {
  switch (k) {
    case AggregateKind::Mean: return "mean";
    case AggregateKind::Sd: return "sd";
    case AggregateKind::Min: return "min";
    case AggregateKind::Max: return "max";
    case AggregateKind::Median: return "median";
    case AggregateKind::Count: return "count";
  }
  return "mean";
}

inline AggregateKind parse_aggregate(std::string_view s) {
  if (s == "mean") return AggregateKind::Mean;
  if (s == "sd") return AggregateKind::Sd;
  if (s == "min") return AggregateKind::Min;
  if (s == "max") return AggregateKind::Max;
  if (s == "median") return AggregateKind::Median;
  if (s == "count") return AggregateKind::Count;
  throw std::invalid_argument("unknown aggregator '" + std::string(s) + "'");
}

/// Summary of a non-empty sample. Mean sums left to right; sd is the sample
/// (n - 1) standard deviation about that mean and is 0 for a single value;
/// median averages the two middle values for even n.
template <typename Scalar>
Scalar aggregate(AggregateKind kind, std::span<const Scalar> xs) {
  if (xs.empty()) throw std::invalid_argument("cannot aggregate an empty sample");
  const auto n = static_cast<Scalar>(xs.size());
  auto mean = [&] {
    Scalar s(0);
    for (Scalar x : xs) s += x;
    return s / n;
  };
  switch (kind) {
    case AggregateKind::Mean: return mean();
    case AggregateKind::Sd: {
      if (xs.size() == 1) return Scalar(0);
      const Scalar m = mean();
      Scalar ss(0);
      for (Scalar x : xs) ss += (x - m) * (x - m);
      using std::sqrt;
      return sqrt(ss / (n - Scalar(1)));
    }
    case AggregateKind::Min: return *std::min_element(xs.begin(), xs.end());
    case AggregateKind::Max: return *std::max_element(xs.begin(), xs.end());
    case AggregateKind::Median: {
      std::vector<Scalar> sorted(xs.begin(), xs.end());
      std::sort(sorted.begin(), sorted.end());
      const std::size_t mid = sorted.size() / 2;
      if (sorted.size() % 2 == 1) return sorted[mid];
      return (sorted[mid - 1] + sorted[mid]) / Scalar(2);
    }
    case AggregateKind::Count: return n;
  }
  return Scalar(0);
}

/// Drops edges weaker than `min_strength`.
template <typename Scalar>
MapperGraph<Scalar> filter_edges(MapperGraph<Scalar> g, std::size_t min_strength) {
  std::erase_if(g.edges, [&](const Edge& e) { return e.strength < min_strength; });
  return g;
}

/// Vertices from balls, edges from pairwise intersections. Intersections are
/// counted through the per-point coverage lists, which is equivalent to
/// intersecting every pair of member sets.
template <typename Scalar>
MapperGraph<Scalar> build_graph(const Cover<Scalar>& cover, std::size_t min_strength = 1) {
  MapperGraph<Scalar> g;
  g.vertices.reserve(cover.balls.size());
  for (const Ball& b : cover.balls) {
    g.vertices.push_back({b.id, b.members.size(), std::nullopt});
    g.landmarks.push_back(b.landmark);
  }

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> strength;
  for (const auto& ids : coverage_map(cover)) {
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) ++strength[{ids[a], ids[b]}];
    }
  }
  g.edges.reserve(strength.size());
  for (const auto& [key, count] : strength) {
    if (count >= min_strength) g.edges.push_back({key.first, key.second, count});
  }
  return g;
}

/// Colors each vertex by aggregating `values` (one per row) over its ball.
template <typename Scalar, typename Derived>
MapperGraph<Scalar> color_graph(MapperGraph<Scalar> g, const Cover<Scalar>& cover,
                                const Eigen::MatrixBase<Derived>& values, AggregateKind kind) {
  if (values.size() != cover.n_points) {
    throw std::invalid_argument("coloring values do not match the number of points");
  }
  if (g.vertices.size() != cover.balls.size()) throw std::invalid_argument("graph does not match cover");
  std::vector<Scalar> sample;
  for (std::size_t b = 0; b < cover.balls.size(); ++b) {
    sample.clear();
    for (Eigen::Index m : cover.balls[b].members) sample.push_back(static_cast<Scalar>(values(m)));
    g.vertices[b].color = aggregate<Scalar>(kind, sample);
  }
  return g;
}

/// Replaces every vertex color; colors[i] belongs to ball id i + 1.
template <typename Scalar>
MapperGraph<Scalar> set_coloring(MapperGraph<Scalar> g, std::span<const Scalar> colors) {
  if (colors.size() != g.vertices.size()) {
    throw std::invalid_argument("coloring has " + std::to_string(colors.size()) + " values for " +
                                std::to_string(g.vertices.size()) + " balls");
  }
  for (std::size_t i = 0; i < colors.size(); ++i) {
    if (!std::isfinite(static_cast<double>(colors[i]))) {
      throw std::invalid_argument("coloring value for ball " + std::to_string(i + 1) + " is not finite");
    }
    g.vertices[i].color = colors[i];
  }
  return g;
}

/// One (point, ball) membership pair; `point` is a 0-based row.
struct Membership {
  Eigen::Index point = 0;
  std::size_t ball = 0;

  bool operator==(const Membership&) const = default;
};

/// Long membership table ordered by ball id, then point.
template <typename Scalar>
std::vector<Membership> points_to_balls(const Cover<Scalar>& cover) {
  std::vector<Membership> rows;
  for (const Ball& b : cover.balls) {
    for (Eigen::Index m : b.members) rows.push_back({m, b.id});
  }
  return rows;
}

template <typename Scalar>
struct GraphSummary {
  std::size_t balls = 0;
  std::size_t edges = 0;
  std::size_t min_cardinality = 0;
  std::size_t max_cardinality = 0;
  double mean_cardinality = 0.0;
  std::optional<std::pair<Scalar, Scalar>> color_range;  // over colored vertices
};

template <typename Scalar>
GraphSummary<Scalar> graph_summary(const MapperGraph<Scalar>& g) {
  GraphSummary<Scalar> s;
  s.balls = g.vertices.size();
  s.edges = g.edges.size();
  if (g.vertices.empty()) return s;
  s.min_cardinality = g.vertices.front().cardinality;
  std::size_t total = 0;
  for (const auto& v : g.vertices) {
    s.min_cardinality = std::min(s.min_cardinality, v.cardinality);
    s.max_cardinality = std::max(s.max_cardinality, v.cardinality);
    total += v.cardinality;
    if (v.color) {
      if (!s.color_range) {
        s.color_range = std::pair{*v.color, *v.color};
      } else {
        s.color_range->first = std::min(s.color_range->first, *v.color);
        s.color_range->second = std::max(s.color_range->second, *v.color);
      }
    }
  }
  s.mean_cardinality = static_cast<double>(total) / static_cast<double>(s.balls);
  return s;
}

}  // namespace tdabm
