#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "tdabm/graph.hpp"

namespace tdabm {

/// 2-D vertex positions in abstract layout units, row i for vertex i.
/// Normalised so the bounding box is centred on the origin with its longer
/// side equal to 1.
template <typename Scalar>
struct LayoutResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 2> positions;
  std::uint64_t seed = 0;
};

/// Display-size range for balls.
template <typename Scalar>
struct SizeScale {
  Scalar min_size = Scalar(7);
  Scalar max_size = Scalar(20);
};

inline constexpr int kDefaultLayoutIterations = 500;
inline constexpr std::uint64_t kDefaultLayoutSeed = 42;

namespace detail {

// 53-bit uniform in [0, 1) straight from the engine's output.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Fruchterman-Reingold force-directed layout with linear cooling and a weak
/// pull towards the centroid, so disconnected pieces stay in frame. Start
/// positions come from the seed; all loops are sequential, so equal inputs
/// give bitwise-equal output.
template <typename Scalar>
LayoutResult<Scalar> spring_layout(const MapperGraph<Scalar>& g, std::uint64_t seed,
                                   int iterations = kDefaultLayoutIterations) {
  using Vec2 = Eigen::Matrix<Scalar, 1, 2>;
  const auto n = static_cast<Eigen::Index>(g.vertices.size());
  if (n == 0) throw std::invalid_argument("cannot lay out an empty graph");
  if (iterations < 1) throw std::invalid_argument("layout iterations must be positive");

  LayoutResult<Scalar> out;
  out.seed = seed;
  out.positions.setZero(n, 2);
  if (n == 1) return out;

  std::mt19937_64 rng(seed);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.positions(i, 0) = static_cast<Scalar>(detail::unit_draw(rng));
    out.positions(i, 1) = static_cast<Scalar>(detail::unit_draw(rng));
  }

  // Ball ids are 1-based and dense.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> links;
  links.reserve(g.edges.size());
  for (const Edge& e : g.edges) {
    links.emplace_back(static_cast<Eigen::Index>(e.from) - 1, static_cast<Eigen::Index>(e.to) - 1);
  }

  const Scalar k = std::sqrt(Scalar(1) / Scalar(n));
  const Scalar k2 = k * k;
  const Scalar gravity = Scalar(0.1);
  const Scalar t0 = Scalar(0.1);
  const Scalar tiny = Scalar(1e-9);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 2> disp(n, 2);

  for (int it = 0; it < iterations; ++it) {
    disp.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        Vec2 delta = out.positions.row(i) - out.positions.row(j);
        Scalar d = delta.norm();
        if (d < tiny) {
          // Coincident vertices: separate along a fixed direction.
          delta = Vec2(tiny, Scalar(0));
          d = tiny;
        }
        const Vec2 f = delta * (k2 / (d * d));
        disp.row(i) += f;
        disp.row(j) -= f;
      }
    }
    for (const auto& [a, b] : links) {
      const Vec2 delta = out.positions.row(a) - out.positions.row(b);
      const Scalar d = delta.norm();
      const Vec2 f = delta * (d / k);
      disp.row(a) -= f;
      disp.row(b) += f;
    }
    const Vec2 centroid = out.positions.colwise().mean();
    for (Eigen::Index i = 0; i < n; ++i) {
      disp.row(i) -= (out.positions.row(i) - centroid) * (gravity / k);
    }

    const Scalar t = t0 * (Scalar(1) - Scalar(it) / Scalar(iterations));
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar len = disp.row(i).norm();
      if (len > Scalar(0)) out.positions.row(i) += disp.row(i) * (std::min(len, t) / len);
    }
  }

  const Vec2 lo = out.positions.colwise().minCoeff();
  const Vec2 hi = out.positions.colwise().maxCoeff();
  const Vec2 mid = (lo + hi) / Scalar(2);
  const Scalar extent = (hi - lo).maxCoeff();
  out.positions.rowwise() -= mid;
  if (extent > Scalar(0)) out.positions /= extent;
  return out;
}

/// Affine map from cardinalities onto [min_size, max_size]; the smallest
/// count gets min_size, the largest max_size, and all-equal counts get the
/// midpoint of the range.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> size_scale(std::span<const std::size_t> counts,
                                                    const SizeScale<Scalar>& s) {
  if (!(s.min_size > Scalar(0)) || s.min_size > s.max_size) {
    throw std::invalid_argument("size range must satisfy 0 < min <= max");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sizes(static_cast<Eigen::Index>(counts.size()));
  if (counts.empty()) return sizes;
  if (std::find(counts.begin(), counts.end(), std::size_t{0}) != counts.end()) {
    throw std::invalid_argument("ball cardinalities must be at least 1");
  }
  const auto [lo_it, hi_it] = std::minmax_element(counts.begin(), counts.end());
  const Scalar lo = static_cast<Scalar>(*lo_it);
  const Scalar hi = static_cast<Scalar>(*hi_it);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    if (hi == lo) {
      sizes(idx) = (s.min_size + s.max_size) / Scalar(2);
    } else {
      const Scalar t = (static_cast<Scalar>(counts[i]) - lo) / (hi - lo);
      sizes(idx) = s.min_size + t * (s.max_size - s.min_size);
    }
  }
  return sizes;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vertex_sizes(const MapperGraph<Scalar>& g,
                                                      const SizeScale<Scalar>& s) {
  std::vector<std::size_t> counts;
  counts.reserve(g.vertices.size());
  for (const auto& v : g.vertices) counts.push_back(v.cardinality);
  return size_scale<Scalar>(counts, s);
}

}  // namespace tdabm
