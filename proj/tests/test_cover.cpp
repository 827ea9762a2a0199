#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "support.hpp"

namespace tdabm {
namespace {

PointCloudd cloud(std::initializer_list<std::initializer_list<double>> rows) {
  PointCloudd::Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return make_point_cloud<double>(std::move(m));
}

CoverConfig<double> lowest(double eps) {
  CoverConfig<double> cfg;
  cfg.epsilon = eps;
  return cfg;
}

using Rows = std::vector<Eigen::Index>;

TEST(BallMembership, BoundaryIsInclusive) {
  const auto pc = cloud({{0.0, 0.0}, {0.4, 0.0}, {0.41, 0.0}});
  EXPECT_EQ(ball_membership(pc, 0, 0.4), (Rows{0, 1}));
}

TEST(BallMembership, SinglePoint) {
  const auto pc = cloud({{3.0, -1.0}});
  EXPECT_EQ(ball_membership(pc, 0, 1e-9), (Rows{0}));
  EXPECT_EQ(ball_membership(pc, 0, 1e9), (Rows{0}));
}

TEST(BallMembership, MatchesDistanceTable) {
  const auto pc = cloud({{0.0, 0.0}, {0.2, 0.1}, {0.5, 0.5}, {0.25, 0.0}, {0.1, 0.35}});
  const auto table = oracle::distance_table(pc.values);
  for (Eigen::Index l = 0; l < pc.size(); ++l) {
    Rows expected;
    for (Eigen::Index m = 0; m < pc.size(); ++m) {
      if (table[l][m] <= 0.3) expected.push_back(m);
    }
    EXPECT_EQ(ball_membership(pc, l, 0.3), expected) << "landmark " << l;
  }
  // Spot values from the table: (0,0)-(0.25,0) = 0.25, (0,0)-(0.1,0.35) = 0.364.
  EXPECT_EQ(ball_membership(pc, 0, 0.3), (Rows{0, 1, 3}));
}

TEST(BallMembership, Errors) {
  const auto pc = cloud({{0.0}, {1.0}});
  EXPECT_THROW(ball_membership(pc, 2, 0.5), std::out_of_range);
  EXPECT_THROW(ball_membership(pc, -1, 0.5), std::out_of_range);
  EXPECT_THROW(ball_membership(pc, 0, 0.0), std::invalid_argument);
  EXPECT_THROW(ball_membership(pc, 0, -1.0), std::invalid_argument);
}

TEST(BuildCover, UniformFixtureHasSevenBalls) {
  const auto data = testing::load_uniform_fixture();
  const auto cover = build_cover(data.points, lowest(0.4));
  ASSERT_EQ(cover.balls.size(), 7u);
  // Landmarks from a separate brute-force run over the same CSV, 1-based.
  const std::vector<Eigen::Index> expected{1, 2, 9, 15, 20, 35, 331};
  for (std::size_t b = 0; b < 7; ++b) {
    EXPECT_EQ(cover.balls[b].id, b + 1);
    EXPECT_EQ(cover.balls[b].landmark + 1, expected[b]);
  }
  EXPECT_EQ(validate_cover(data.points, cover), "");
}

TEST(BuildCover, SinglePointAndHugeEpsilon) {
  EXPECT_EQ(build_cover(cloud({{0.5, 0.5}}), lowest(0.01)).balls.size(), 1u);
  const auto data = testing::load_uniform_fixture();
  const auto cover = build_cover(data.points, lowest(std::sqrt(2.0)));
  ASSERT_EQ(cover.balls.size(), 1u);
  EXPECT_EQ(cover.balls[0].members.size(), 500u);
}

TEST(BuildCover, CollinearPoints) {
  const auto cover = build_cover(cloud({{0.0}, {1.0}, {2.0}}), lowest(0.5));
  ASSERT_EQ(cover.balls.size(), 3u);
  for (std::size_t b = 0; b < 3; ++b) {
    EXPECT_EQ(cover.balls[b].landmark, static_cast<Eigen::Index>(b));
    EXPECT_EQ(cover.balls[b].members, (Rows{static_cast<Eigen::Index>(b)}));
  }
}

TEST(BuildCover, DuplicatePointsShareBalls) {
  const auto cover = build_cover(cloud({{0.0, 0.0}, {0.0, 0.0}, {5.0, 5.0}, {5.0, 5.0}}), lowest(0.1));
  ASSERT_EQ(cover.balls.size(), 2u);
  EXPECT_EQ(cover.balls[0].members, (Rows{0, 1}));
  EXPECT_EQ(cover.balls[1].members, (Rows{2, 3}));
}

TEST(BuildCover, RejectsBadConfig) {
  const auto pc = cloud({{0.0}});
  EXPECT_THROW(build_cover(pc, lowest(0.0)), std::invalid_argument);
  EXPECT_THROW(build_cover(pc, lowest(std::numeric_limits<double>::infinity())), std::invalid_argument);
  auto cfg = lowest(0.5);
  cfg.search = NeighborSearch::Grid;
  EXPECT_THROW(build_cover(cloud({{0, 0, 0, 0}}), cfg), std::invalid_argument);
}

TEST(BuildCover, RandomStrategyIsSeeded) {
  const auto data = testing::load_uniform_fixture();
  auto cfg = lowest(0.4);
  cfg.strategy = LandmarkStrategy::Random;
  cfg.seed = 7;
  const auto a = build_cover(data.points, cfg);
  const auto b = build_cover(data.points, cfg);
  EXPECT_EQ(a.balls, b.balls);
  EXPECT_EQ(validate_cover(data.points, a), "");

  bool any_different = false;
  for (std::uint64_t seed = 8; seed < 20 && !any_different; ++seed) {
    cfg.seed = seed;
    const auto c = build_cover(data.points, cfg);
    EXPECT_EQ(validate_cover(data.points, c), "");
    any_different = c.balls != a.balls;
  }
  EXPECT_TRUE(any_different);
}

TEST(BuildCover, PermutingRowsKeepsInvariants) {
  const auto data = testing::load_uniform_fixture();
  std::vector<Eigen::Index> order(500);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(3);
  std::shuffle(order.begin(), order.end(), rng);
  PointCloudd shuffled = data.points;
  for (Eigen::Index i = 0; i < 500; ++i) shuffled.values.row(i) = data.points.values.row(order[i]);

  const auto a = build_cover(data.points, lowest(0.4));
  const auto b = build_cover(shuffled, lowest(0.4));
  EXPECT_EQ(validate_cover(data.points, a), "");
  EXPECT_EQ(validate_cover(shuffled, b), "");
}

TEST(BuildCover, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = testing::uniform_index(rng, 1, 50);
    const auto k = testing::uniform_index(rng, 1, 4);
    const auto pc = testing::random_cloud(rng, n, k);
    const double eps = testing::uniform(rng, 0.02, 1.2);
    const Eigen::VectorXd y = Eigen::VectorXd::Zero(pc.size());
    const auto expected = oracle::ball_mapper(pc.values, y, eps);
    const auto cover = build_cover(pc, lowest(eps));
    ASSERT_EQ(cover.balls.size(), expected.balls.size()) << "trial " << trial;
    for (std::size_t b = 0; b < cover.balls.size(); ++b) {
      EXPECT_EQ(cover.balls[b].landmark, expected.landmarks[b]);
      EXPECT_EQ(cover.balls[b].members, Rows(expected.balls[b].begin(), expected.balls[b].end()));
    }
  }
}

TEST(GridIndex, AgreesWithBruteForce) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = testing::uniform_index(rng, 1, 300);
    const auto k = testing::uniform_index(rng, 1, 3);
    auto pc = testing::random_cloud(rng, n, k);
    pc.values = pc.values.array() * testing::uniform(rng, 0.5, 100.0) - 3.0;
    const double eps = testing::uniform(rng, 0.001, 40.0);
    ASSERT_TRUE(GridIndex<double>::supports(pc, eps));
    const GridIndex<double> grid(pc, eps);
    for (Eigen::Index l = 0; l < pc.size(); l += 7) EXPECT_EQ(grid.ball(l), ball_membership(pc, l, eps));
  }
}

TEST(GridIndex, CoverMatchesBruteForceCover) {
  const auto data = testing::load_uniform_fixture();
  for (double eps : {0.05, 0.1, 0.4, 0.9}) {
    auto brute = lowest(eps);
    brute.search = NeighborSearch::BruteForce;
    auto grid = lowest(eps);
    grid.search = NeighborSearch::Grid;
    EXPECT_EQ(build_cover(data.points, brute).balls, build_cover(data.points, grid).balls) << eps;
  }
}

TEST(GridIndex, SupportLimits) {
  EXPECT_FALSE(GridIndex<double>::supports(cloud({{0, 0, 0, 0}}), 1.0));
  EXPECT_FALSE(GridIndex<double>::supports(cloud({{0.0}, {1.0}}), 1e-7));
  EXPECT_TRUE(GridIndex<double>::supports(cloud({{0.0}, {1.0}}), 1e-5));
}

TEST(CoverageMap, SingleBall) {
  const auto cover = build_cover(cloud({{0.0}, {0.1}, {0.2}}), lowest(1.0));
  for (const auto& ids : coverage_map(cover)) EXPECT_EQ(ids, (std::vector<std::size_t>{1}));
}

TEST(CoverageMap, SharedMidpoint) {
  const auto cover = build_cover(cloud({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}), lowest(1.0));
  ASSERT_EQ(cover.balls.size(), 2u);
  const auto map = coverage_map(cover);
  EXPECT_EQ(map[0], (std::vector<std::size_t>{1}));
  EXPECT_EQ(map[1], (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(map[2], (std::vector<std::size_t>{2}));
}

TEST(CoverageMap, InvertsBallMembershipOnFixture) {
  const auto data = testing::load_uniform_fixture();
  const auto cover = build_cover(data.points, lowest(0.4));
  const auto map = coverage_map(cover);
  // Invert point -> balls back into ball -> points.
  std::vector<Rows> rebuilt(cover.balls.size());
  for (std::size_t p = 0; p < map.size(); ++p) {
    ASSERT_FALSE(map[p].empty());
    EXPECT_TRUE(std::is_sorted(map[p].begin(), map[p].end()));
    for (std::size_t id : map[p]) rebuilt[id - 1].push_back(static_cast<Eigen::Index>(p));
  }
  for (std::size_t b = 0; b < cover.balls.size(); ++b) EXPECT_EQ(rebuilt[b], cover.balls[b].members);
}

TEST(BuildCover, WorksForFloat) {
  PointCloud<float>::Matrix m(3, 1);
  m << 0.0f, 1.0f, 2.0f;
  CoverConfig<float> cfg;
  cfg.epsilon = 1.0f;
  const auto cover = build_cover(make_point_cloud<float>(m), cfg);
  EXPECT_EQ(cover.balls.size(), 2u);
}

}  // namespace
}  // namespace tdabm
