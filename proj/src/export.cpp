#include "tdabm/export.hpp"

#include <json.hpp>

#include "tdabm/error.hpp"
#include "tdabm/ingest.hpp"

namespace tdabm {

using nlohmann::json;

namespace {

json index_list(const std::vector<Eigen::Index>& rows) {
  json out = json::array();
  for (Eigen::Index r : rows) out.push_back(r + 1);
  return out;
}

template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw DataError(std::string("graph document is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DataError(std::string("graph document field '") + key + "': " + e.what());
  }
}

Eigen::Index to_row(long long one_based, Eigen::Index n) {
  if (one_based < 1 || one_based > n) throw DataError("row index " + std::to_string(one_based) + " out of range");
  return static_cast<Eigen::Index>(one_based - 1);
}

}  // namespace

std::string to_json(const Cover<double>& cover, const MapperGraphd& g, const GraphMeta& meta) {
  if (g.vertices.size() != cover.balls.size()) throw std::invalid_argument("graph does not match cover");

  json doc;
  json vertices = json::array();
  json landmarks = json::array();
  json coloring = json::array();
  json covered = json::array();
  for (std::size_t b = 0; b < cover.balls.size(); ++b) {
    const Ball& ball = cover.balls[b];
    const auto& v = g.vertices[b];
    if (v.id != ball.id || v.cardinality != ball.members.size()) {
      throw std::invalid_argument("graph vertex " + std::to_string(v.id) + " does not match its ball");
    }
    vertices.push_back({{"id", v.id}, {"size", v.cardinality}});
    landmarks.push_back(ball.landmark + 1);
    coloring.push_back(v.color ? json(*v.color) : json(nullptr));
    covered.push_back(index_list(ball.members));
  }
  json edges = json::array();
  json strength = json::array();
  for (const Edge& e : g.edges) {
    edges.push_back({e.from, e.to});
    strength.push_back(e.strength);
  }
  json coverage = json::array();
  for (const auto& ids : coverage_map(cover)) coverage.push_back(ids);

  doc["vertices"] = std::move(vertices);
  doc["edges"] = std::move(edges);
  doc["edges_strength"] = std::move(strength);
  doc["points_covered_by_landmarks"] = std::move(covered);
  doc["landmarks"] = std::move(landmarks);
  doc["coloring"] = std::move(coloring);
  doc["coverage"] = std::move(coverage);
  doc["n_points"] = cover.n_points;
  doc["config"] = {{"epsilon", cover.config.epsilon},
                   {"strategy", to_string(cover.config.strategy)},
                   {"seed", cover.config.seed},
                   {"metric", to_string(cover.config.metric)}};
  json m = {{"axes", meta.axes},
            {"outcome", meta.outcome},
            {"color_by", meta.color_by},
            {"normalization", meta.normalization},
            {"na_policy", meta.na_policy}};
  m["aggregator"] = meta.aggregator ? json(to_string(*meta.aggregator)) : json(nullptr);
  doc["meta"] = std::move(m);
  return doc.dump(2) + "\n";
}

GraphDocument from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid graph JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("graph JSON must be an object");

  GraphDocument out;
  const auto n = require<long long>(doc, "n_points");
  if (n < 1) throw DataError("n_points must be positive");
  out.cover.n_points = static_cast<Eigen::Index>(n);

  const json cfg = require<json>(doc, "config");
  try {
    out.cover.config.epsilon = require<double>(cfg, "epsilon");
    out.cover.config.strategy = parse_strategy(require<std::string>(cfg, "strategy"));
    out.cover.config.seed = require<std::uint64_t>(cfg, "seed");
    out.cover.config.metric = parse_metric(require<std::string>(cfg, "metric"));
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }

  const auto vertices = require<json>(doc, "vertices");
  const auto landmarks = require<std::vector<long long>>(doc, "landmarks");
  const auto covered = require<std::vector<std::vector<long long>>>(doc, "points_covered_by_landmarks");
  const auto coloring = require<json>(doc, "coloring");
  const auto edges = require<std::vector<std::vector<std::size_t>>>(doc, "edges");
  const auto strength = require<std::vector<std::size_t>>(doc, "edges_strength");
  if (!vertices.is_array() || !coloring.is_array()) throw DataError("vertices and coloring must be arrays");
  const std::size_t balls = vertices.size();
  if (landmarks.size() != balls || covered.size() != balls || coloring.size() != balls) {
    throw DataError("per-ball arrays have inconsistent lengths");
  }
  if (edges.size() != strength.size()) throw DataError("edges and edges_strength differ in length");

  for (std::size_t b = 0; b < balls; ++b) {
    Ball ball;
    ball.id = require<std::size_t>(vertices[b], "id");
    if (ball.id != b + 1) throw DataError("vertex ids must be 1..B in order");
    ball.landmark = to_row(landmarks[b], out.cover.n_points);
    for (long long r : covered[b]) ball.members.push_back(to_row(r, out.cover.n_points));
    if (require<std::size_t>(vertices[b], "size") != ball.members.size()) {
      throw DataError("vertex " + std::to_string(ball.id) + " size does not match its member list");
    }
    Vertex<double> v{ball.id, ball.members.size(), std::nullopt};
    if (!coloring[b].is_null()) {
      if (!coloring[b].is_number()) throw DataError("coloring values must be numbers or null");
      v.color = coloring[b].get<double>();
    }
    out.graph.vertices.push_back(v);
    out.graph.landmarks.push_back(ball.landmark);
    out.cover.balls.push_back(std::move(ball));
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].size() != 2) throw DataError("edges must be [from, to] pairs");
    const Edge edge{edges[e][0], edges[e][1], strength[e]};
    if (edge.from < 1 || edge.from >= edge.to || edge.to > balls) throw DataError("malformed edge");
    out.graph.edges.push_back(edge);
  }
  if (!std::is_sorted(out.graph.edges.begin(), out.graph.edges.end())) throw DataError("edges are not sorted");

  if (doc.contains("meta")) {
    const json& m = doc["meta"];
    try {
      out.meta.axes = m.value("axes", std::vector<std::string>{});
      out.meta.outcome = m.value("outcome", std::string{});
      out.meta.color_by = m.value("color_by", std::string{});
      out.meta.normalization = m.value("normalization", std::string{"none"});
      out.meta.na_policy = m.value("na_policy", std::string{"error"});
      if (m.contains("aggregator") && !m["aggregator"].is_null()) {
        out.meta.aggregator = parse_aggregate(m["aggregator"].get<std::string>());
      }
    } catch (const std::exception& e) {
      throw DataError(std::string("graph document meta: ") + e.what());
    }
  }
  return out;
}

std::string to_dot(const MapperGraphd& g) {
  std::string s = "graph tdabm {\n";
  for (const auto& v : g.vertices) {
    s += "  " + std::to_string(v.id) + " [cardinality=" + std::to_string(v.cardinality);
    if (v.color) s += ", color_value=\"" + format_number(*v.color) + "\"";
    s += "];\n";
  }
  for (const Edge& e : g.edges) {
    s += "  " + std::to_string(e.from) + " -- " + std::to_string(e.to) +
         " [strength=" + std::to_string(e.strength) + "];\n";
  }
  s += "}\n";
  return s;
}

std::string to_graphml(const MapperGraphd& g) {
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  s += "  <key id=\"cardinality\" for=\"node\" attr.name=\"cardinality\" attr.type=\"int\"/>\n";
  s += "  <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"double\"/>\n";
  s += "  <key id=\"strength\" for=\"edge\" attr.name=\"strength\" attr.type=\"int\"/>\n";
  s += "  <graph id=\"tdabm\" edgedefault=\"undirected\">\n";
  for (const auto& v : g.vertices) {
    s += "    <node id=\"" + std::to_string(v.id) + "\">\n";
    s += "      <data key=\"cardinality\">" + std::to_string(v.cardinality) + "</data>\n";
    if (v.color) s += "      <data key=\"color\">" + format_number(*v.color) + "</data>\n";
    s += "    </node>\n";
  }
  for (const Edge& e : g.edges) {
    s += "    <edge source=\"" + std::to_string(e.from) + "\" target=\"" + std::to_string(e.to) + "\">\n";
    s += "      <data key=\"strength\">" + std::to_string(e.strength) + "</data>\n";
    s += "    </edge>\n";
  }
  s += "  </graph>\n</graphml>\n";
  return s;
}

std::string to_csv_points_to_balls(std::span<const Membership> table) {
  std::string s = "pt,ball\n";
  for (const auto& m : table) s += std::to_string(m.point + 1) + "," + std::to_string(m.ball) + "\n";
  return s;
}

}  // namespace tdabm
