#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "tdabm/tdabm.hpp"

namespace tdabm::testing {

inline std::filesystem::path fixture_dir() { return TDABM_FIXTURE_DIR; }
inline std::filesystem::path uniform_fixture() { return fixture_dir() / "uniform500.csv"; }

inline LoadedData load_uniform_fixture() { return load_table(uniform_fixture(), {"X1", "X2"}, "Y"); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

/// Random cloud in [0, 1]^k. Roughly one cloud in four gets duplicated rows
/// and one in four is snapped to a coarse lattice, so ties and coincident
/// points show up regularly.
inline PointCloudd random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  PointCloudd::Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  const auto flavour = rng() % 4;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double v = uniform(rng, 0.0, 1.0);
      if (flavour == 1) v = std::round(v * 8.0) / 8.0;
      m(i, j) = v;
    }
    if (flavour == 2 && i > 0 && rng() % 3 == 0) m.row(i) = m.row(static_cast<Eigen::Index>(rng() % i));
  }
  return make_point_cloud<double>(std::move(m));
}

/// Temporary directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("tdabm_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace tdabm::testing
