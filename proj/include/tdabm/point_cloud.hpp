#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace tdabm {

/// Dataset X: one row per observation, one column per axis variable.
/// Row order is the input order and is significant: landmark selection
/// walks rows in this order. Row indices are 0-based in memory.
template <typename Scalar>
struct PointCloud {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Matrix values;
  std::vector<std::string> column_names;

  Eigen::Index size() const { return values.rows(); }
  Eigen::Index dims() const { return values.cols(); }
};

/// The outcome variable Y, aligned by row with a PointCloud.
template <typename Scalar>
struct OutcomeVector {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
  std::string name;

  Eigen::Index size() const { return values.size(); }
};

using PointCloudd = PointCloud<double>;
using OutcomeVectord = OutcomeVector<double>;

/// Validating constructor. Requires N >= 1, K >= 1, one name per column and
/// finite entries.
template <typename Scalar>
PointCloud<Scalar> make_point_cloud(typename PointCloud<Scalar>::Matrix values,
                                    std::vector<std::string> column_names = {}) {
  if (values.rows() < 1 || values.cols() < 1) {
    throw std::invalid_argument("point cloud needs at least one row and one column");
  }
  if (column_names.empty()) {
    for (Eigen::Index k = 0; k < values.cols(); ++k) column_names.push_back("X" + std::to_string(k + 1));
  }
  if (static_cast<Eigen::Index>(column_names.size()) != values.cols()) {
    throw std::invalid_argument("column name count does not match column count");
  }
  if (!values.allFinite()) throw std::invalid_argument("point cloud contains non-finite values");
  return PointCloud<Scalar>{std::move(values), std::move(column_names)};
}

/// Squared Euclidean distance between rows i and j, summed left to right over
/// the axes. Every membership path (brute force and grid) goes through here so
/// they agree bit for bit at the ball boundary.
template <typename Scalar>
inline Scalar squared_distance(const PointCloud<Scalar>& pc, Eigen::Index i, Eigen::Index j) {
  Scalar acc(0);
  for (Eigen::Index k = 0; k < pc.dims(); ++k) {
    const Scalar d = pc.values(i, k) - pc.values(j, k);
    acc += d * d;
  }
  return acc;
}

template <typename Scalar>
inline Scalar distance(const PointCloud<Scalar>& pc, Eigen::Index i, Eigen::Index j) {
  using std::sqrt;
  return sqrt(squared_distance(pc, i, j));
}

enum class Normalization { None, MinMax, ZScore };

inline std::string_view to_string(Normalization n) {
  switch (n) {
    case Normalization::None: return "none";
    case Normalization::MinMax: return "min-max";
    case Normalization::ZScore: return "z-score";
  }
  return "none";
}

inline Normalization parse_normalization(std::string_view s) {
  if (s == "none") return Normalization::None;
  if (s == "min-max") return Normalization::MinMax;
  if (s == "z-score") return Normalization::ZScore;
  throw std::invalid_argument("unknown normalization '" + std::string(s) + "'");
}

/// Column-wise rescaling. min-max maps each column onto [0, 1]; z-score
/// centres and divides by the sample (N - 1) standard deviation. Constant
/// columns (and z-score with a single row) map to all zeros.
template <typename Scalar>
PointCloud<Scalar> normalize(const PointCloud<Scalar>& pc, Normalization method) {
  PointCloud<Scalar> out = pc;
  if (method == Normalization::None) return out;

  const Eigen::Index n = pc.size();
  for (Eigen::Index k = 0; k < pc.dims(); ++k) {
    auto col = out.values.col(k);
    if (method == Normalization::MinMax) {
      const Scalar lo = col.minCoeff();
      const Scalar range = col.maxCoeff() - lo;
      if (range > Scalar(0)) {
        col = (col.array() - lo) / range;
      } else {
        col.setZero();
      }
    } else {
      const Scalar mean = col.sum() / Scalar(n);
      const Scalar ss = (col.array() - mean).square().sum();
      const Scalar sd = n > 1 ? std::sqrt(ss / Scalar(n - 1)) : Scalar(0);
      if (sd > Scalar(0)) {
        col = (col.array() - mean) / sd;
      } else {
        col.setZero();
      }
    }
  }
  return out;
}

}  // namespace tdabm
