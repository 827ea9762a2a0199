#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "tdabm/point_cloud.hpp"

namespace tdabm {

enum class LandmarkStrategy { LowestIndex, Random };
enum class Metric { Euclidean };

/// How ball membership queries are answered. Both paths return identical
/// member sets; Auto picks the grid for low-dimensional, large clouds.
enum class NeighborSearch { Auto, BruteForce, Grid };

inline std::string_view to_string(LandmarkStrategy s) {
  return s == LandmarkStrategy::LowestIndex ? "lowest-index" : "random";
}

inline LandmarkStrategy parse_strategy(std::string_view s) {
  if (s == "lowest-index") return LandmarkStrategy::LowestIndex;
  if (s == "random") return LandmarkStrategy::Random;
  throw std::invalid_argument("unknown landmark strategy '" + std::string(s) + "'");
}

inline std::string_view to_string(Metric) { return "euclidean"; }

inline Metric parse_metric(std::string_view s) {
  if (s == "euclidean") return Metric::Euclidean;
  throw std::invalid_argument("unknown metric '" + std::string(s) + "'");
}

template <typename Scalar>
struct CoverConfig {
  Scalar epsilon = Scalar(0);
  LandmarkStrategy strategy = LandmarkStrategy::LowestIndex;
  std::uint64_t seed = 0;  // strategy == Random only
  Metric metric = Metric::Euclidean;
  NeighborSearch search = NeighborSearch::Auto;
};

/// One ball of the cover. `id` is the 1-based creation order; `landmark` and
/// `members` are 0-based row indices, members sorted ascending.
struct Ball {
  std::size_t id = 0;
  Eigen::Index landmark = 0;
  std::vector<Eigen::Index> members;

  bool operator==(const Ball&) const = default;
};

template <typename Scalar>
struct Cover {
  std::vector<Ball> balls;
  CoverConfig<Scalar> config;
  Eigen::Index n_points = 0;
};

namespace detail {

template <typename Scalar>
void check_epsilon(Scalar epsilon) {
  if (!(epsilon > Scalar(0)) || !std::isfinite(static_cast<double>(epsilon))) {
    throw std::invalid_argument("epsilon must be a positive finite number");
  }
}

/// Unbiased draw from [0, bound) by rejection, so random landmark selection
/// depends only on the mt19937_64 stream and not on the standard library's
/// distribution implementation.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

}  // namespace detail

/// All rows within `epsilon` of the landmark, boundary inclusive, ascending.
/// Brute-force scan.
template <typename Scalar>
std::vector<Eigen::Index> ball_membership(const PointCloud<Scalar>& pc, Eigen::Index landmark,
                                          Scalar epsilon) {
  if (landmark < 0 || landmark >= pc.size()) throw std::out_of_range("landmark row out of range");
  detail::check_epsilon(epsilon);
  std::vector<Eigen::Index> members;
  for (Eigen::Index m = 0; m < pc.size(); ++m) {
    if (distance(pc, m, landmark) <= epsilon) members.push_back(m);
  }
  return members;
}

/// Uniform hash grid with cells of edge ~epsilon, for K <= 3. A query visits
/// the 3^K cells around the landmark and applies the exact distance test, so
/// results equal ball_membership().
template <typename Scalar>
class GridIndex {
 public:
  static constexpr Eigen::Index kMaxDims = 3;

  /// False when the grid cannot guarantee that every neighbour within epsilon
  /// sits in an adjacent cell (too many dimensions, or so many cells per axis
  /// that rounding in the cell coordinate could exceed the padding).
  static bool supports(const PointCloud<Scalar>& pc, Scalar epsilon) {
    if (pc.dims() > kMaxDims || !(epsilon > Scalar(0))) return false;
    for (Eigen::Index k = 0; k < pc.dims(); ++k) {
      const Scalar extent = pc.values.col(k).maxCoeff() - pc.values.col(k).minCoeff();
      if (!(extent / epsilon < Scalar(kMaxCellsPerAxis))) return false;
    }
    return true;
  }

  GridIndex(const PointCloud<Scalar>& pc, Scalar epsilon) : pc_(&pc), epsilon_(epsilon) {
    detail::check_epsilon(epsilon);
    if (!supports(pc, epsilon)) throw std::invalid_argument("grid index does not support this cloud");
    cell_ = epsilon * (Scalar(1) + Scalar(kPadding));
    origin_ = pc.values.colwise().minCoeff();
    for (Eigen::Index i = 0; i < pc.size(); ++i) cells_[cell_of(i)].push_back(i);
  }

  std::vector<Eigen::Index> ball(Eigen::Index landmark) const {
    if (landmark < 0 || landmark >= pc_->size()) throw std::out_of_range("landmark row out of range");
    const Key centre = cell_of(landmark);
    std::vector<Eigen::Index> members;
    Key probe{};
    visit(centre, probe, 0, landmark, members);
    std::sort(members.begin(), members.end());
    return members;
  }

 private:
  using Key = std::array<std::int64_t, kMaxDims>;

  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = 1469598103934665603ULL;
      for (auto v : k) {
        h ^= static_cast<std::uint64_t>(v);
        h *= 1099511628211ULL;
      }
      return static_cast<std::size_t>(h);
    }
  };

  static constexpr double kPadding = 1e-9;
  static constexpr double kMaxCellsPerAxis = 1e6;

  Key cell_of(Eigen::Index i) const {
    Key key{};
    for (Eigen::Index k = 0; k < pc_->dims(); ++k) {
      key[k] = static_cast<std::int64_t>(std::floor((pc_->values(i, k) - origin_(k)) / cell_));
    }
    return key;
  }

  void visit(const Key& centre, Key& probe, Eigen::Index axis, Eigen::Index landmark,
             std::vector<Eigen::Index>& out) const {
    if (axis == pc_->dims()) {
      auto it = cells_.find(probe);
      if (it == cells_.end()) return;
      for (Eigen::Index m : it->second) {
        if (distance(*pc_, m, landmark) <= epsilon_) out.push_back(m);
      }
      return;
    }
    for (std::int64_t d = -1; d <= 1; ++d) {
      probe[axis] = centre[axis] + d;
      visit(centre, probe, axis + 1, landmark, out);
    }
  }

  const PointCloud<Scalar>* pc_;
  Scalar epsilon_;
  Scalar cell_;
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> origin_;
  std::unordered_map<Key, std::vector<Eigen::Index>, KeyHash> cells_;
};

/// Greedy epsilon-ball cover. Each landmark is taken from the rows not yet in
/// any ball (the first such row for LowestIndex, a seeded uniform draw for
/// Random), its ball added, until every row is covered.
template <typename Scalar>
Cover<Scalar> build_cover(const PointCloud<Scalar>& pc, const CoverConfig<Scalar>& cfg) {
  detail::check_epsilon(cfg.epsilon);
  if (pc.size() < 1) throw std::invalid_argument("cannot cover an empty point cloud");

  bool use_grid = false;
  switch (cfg.search) {
    case NeighborSearch::BruteForce: break;
    case NeighborSearch::Grid:
      if (!GridIndex<Scalar>::supports(pc, cfg.epsilon)) {
        throw std::invalid_argument("grid search needs at most 3 axes and fewer than 1e6 cells per axis");
      }
      use_grid = true;
      break;
    case NeighborSearch::Auto:
      use_grid = pc.size() >= 2048 && GridIndex<Scalar>::supports(pc, cfg.epsilon);
      break;
  }
  std::optional<GridIndex<Scalar>> grid;
  if (use_grid) grid.emplace(pc, cfg.epsilon);

  std::mt19937_64 rng(cfg.seed);
  std::vector<Eigen::Index> uncovered(static_cast<std::size_t>(pc.size()));
  for (std::size_t i = 0; i < uncovered.size(); ++i) uncovered[i] = static_cast<Eigen::Index>(i);
  std::vector<char> covered(uncovered.size(), 0);

  Cover<Scalar> cover;
  cover.config = cfg;
  cover.n_points = pc.size();
  while (!uncovered.empty()) {
    Eigen::Index landmark = uncovered.front();
    if (cfg.strategy == LandmarkStrategy::Random) {
      landmark = uncovered[detail::bounded_draw(rng, uncovered.size())];
    }
    Ball ball;
    ball.id = cover.balls.size() + 1;
    ball.landmark = landmark;
    ball.members = grid ? grid->ball(landmark) : ball_membership(pc, landmark, cfg.epsilon);
    for (Eigen::Index m : ball.members) covered[static_cast<std::size_t>(m)] = 1;
    std::erase_if(uncovered, [&](Eigen::Index i) { return covered[static_cast<std::size_t>(i)] != 0; });
    cover.balls.push_back(std::move(ball));
  }
  return cover;
}

/// For each row, the ascending ids of the balls containing it.
template <typename Scalar>
std::vector<std::vector<std::size_t>> coverage_map(const Cover<Scalar>& cover) {
  std::vector<std::vector<std::size_t>> coverage(static_cast<std::size_t>(cover.n_points));
  for (const Ball& b : cover.balls) {
    for (Eigen::Index m : b.members) coverage.at(static_cast<std::size_t>(m)).push_back(b.id);
  }
  for (auto& ids : coverage) {
    if (ids.empty()) throw std::logic_error("cover leaves a point uncovered");
    std::sort(ids.begin(), ids.end());
  }
  return coverage;
}

/// Structural check of a cover against its cloud: ids in creation order,
/// sorted members within epsilon, landmark self-membership, completeness and
/// landmark packing. Returns an empty string when valid, otherwise a
/// description of the first violation.
template <typename Scalar>
std::string validate_cover(const PointCloud<Scalar>& pc, const Cover<Scalar>& cover) {
  const Scalar eps = cover.config.epsilon;
  if (cover.n_points != pc.size()) return "point count mismatch";
  std::vector<char> seen(static_cast<std::size_t>(pc.size()), 0);
  for (std::size_t b = 0; b < cover.balls.size(); ++b) {
    const Ball& ball = cover.balls[b];
    if (ball.id != b + 1) return "ball ids are not in creation order";
    if (ball.members.empty()) return "empty ball " + std::to_string(ball.id);
    if (!std::is_sorted(ball.members.begin(), ball.members.end())) return "unsorted members";
    if (!std::binary_search(ball.members.begin(), ball.members.end(), ball.landmark)) {
      return "landmark not a member of ball " + std::to_string(ball.id);
    }
    for (Eigen::Index m : ball.members) {
      if (m < 0 || m >= pc.size()) return "member out of range";
      if (!(distance(pc, m, ball.landmark) <= eps)) return "member outside epsilon";
      seen[static_cast<std::size_t>(m)] = 1;
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) return "row " + std::to_string(i + 1) + " is uncovered";
  }
  for (std::size_t a = 0; a < cover.balls.size(); ++a) {
    for (std::size_t b = a + 1; b < cover.balls.size(); ++b) {
      if (!(distance(pc, cover.balls[a].landmark, cover.balls[b].landmark) > eps)) {
        return "landmarks of balls " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
               " are within epsilon";
      }
    }
  }
  return {};
}

}  // namespace tdabm
