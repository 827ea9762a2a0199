#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tdabm/cover.hpp"
#include "tdabm/graph.hpp"

namespace tdabm {

/// Source columns and options stored alongside a graph so it can be recoloured later against
/// the table it came from.
struct GraphMeta {
  std::vector<std::string> axes;
  std::string outcome;
  std::string color_by;
  std::optional<AggregateKind> aggregator;
  std::string normalization = "none";
  std::string na_policy = "error";

  bool operator==(const GraphMeta&) const = default;
};

struct GraphDocument {
  Cover<double> cover;
  MapperGraphd graph;
  GraphMeta meta;
};

/// Canonical JSON: sorted keys, two-space indent, trailing newline. Row and
/// ball indices are written 1-based. Top-level keys are the BallMapper
/// elements (vertices, edges, edges_strength, points_covered_by_landmarks,
/// landmarks, coloring, coverage) plus `config`, `n_points` and `meta`.
std::string to_json(const Cover<double>& cover, const MapperGraphd& g, const GraphMeta& meta = {});

/// Inverse of to_json. Throws DataError on malformed or inconsistent input.
GraphDocument from_json(std::string_view text);

/// Undirected DOT graph; nodes carry cardinality and color, edges strength.
std::string to_dot(const MapperGraphd& g);

/// GraphML with the same attributes as to_dot.
std::string to_graphml(const MapperGraphd& g);

/// `pt,ball` header then one 1-based row per membership pair.
std::string to_csv_points_to_balls(std::span<const Membership> table);

}  // namespace tdabm
