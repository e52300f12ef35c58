#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>

#include "emdcor/error.hpp"
#include "emdcor/metric.hpp"
#include "support/generators.hpp"

namespace emdcor {
namespace {

std::vector<double> v(std::initializer_list<double> xs) { return xs; }

TEST(Distance, EuclideanThreeFourFive) {
  const auto m = MetricSpec::euclidean(2);
  EXPECT_DOUBLE_EQ(distance(m, v({0, 0}), v({3, 4})), 5.0);
}

TEST(Distance, ManhattanByHand) {
  EXPECT_DOUBLE_EQ(distance(MetricSpec::manhattan(2), v({1, 4}), v({2, 2})), 3.0);
}

TEST(Distance, IdenticalPointsAreAtZero) {
  const auto p = v({1.5, -2.0});
  EXPECT_EQ(distance(MetricSpec::euclidean(2), p, p), 0.0);
  EXPECT_EQ(distance(MetricSpec::manhattan(2), p, p), 0.0);
  EXPECT_EQ(distance(MetricSpec::discrete(2), p, p), 0.0);
  EXPECT_EQ(distance(MetricSpec::discrete(2), p, v({1.5, -1.0})), 1.0);
}

TEST(Distance, DimensionMismatchThrows) {
  EXPECT_THROW(distance(MetricSpec::euclidean(2), v({1}), v({1, 2})), Error);
}

TEST(Distance, PrecomputedIndexOutOfRangeThrows) {
  Matrix d(2, 2);
  d(0, 1) = d(1, 0) = 2.0;
  const auto m = MetricSpec::precomputed(
      std::make_shared<const DistanceMatrix>(DistanceMatrix::from_matrix(d)));
  EXPECT_DOUBLE_EQ(distance(m, v({0}), v({1})), 2.0);
  EXPECT_THROW(distance(m, v({0}), v({2})), Error);
  EXPECT_THROW(distance(m, v({0}), v({0.5})), Error);
}

TEST(Distance, TriangleInequalityOnRandomTriples) {
  RandomStream rng(11);
  const MetricSpec metrics[] = {MetricSpec::euclidean(3), MetricSpec::manhattan(3),
                                MetricSpec::discrete(3)};
  for (const auto& m : metrics) {
    for (int t = 0; t < 500; ++t) {
      auto pts = testing::uniform_points(rng, 3, 3);
      if (m.kind == MetricKind::discrete && rng.below(2) == 0) {
        pts = PointBuffer(3, testing::small_integers(rng, 9, 2));
      }
      const double ab = distance(m, pts[0], pts[1]);
      const double bc = distance(m, pts[1], pts[2]);
      const double ac = distance(m, pts[0], pts[2]);
      EXPECT_LE(ac, ab + bc + 1e-12);
      EXPECT_DOUBLE_EQ(ab, distance(m, pts[1], pts[0]));
    }
  }
}

TEST(PairMetric, SumOfMarginDistances) {
  const auto m = MetricSpec::euclidean(1);
  EXPECT_EQ(pair_metric(m, m, v({1}), v({4}), v({1}), v({4})), 0.0);
  EXPECT_DOUBLE_EQ(pair_metric(m, m, v({1}), v({4}), v({2}), v({2})), 3.0);
  const auto d = MetricSpec::discrete(1);
  EXPECT_EQ(pair_metric(d, d, v({0}), v({0}), v({0}), v({1})), 1.0);
}

TEST(PairMetric, RequiredPropertiesHoldOnRandomInputs) {
  RandomStream rng(12);
  const MetricSpec metrics[] = {MetricSpec::euclidean(2), MetricSpec::manhattan(2),
                                MetricSpec::discrete(2)};
  for (const auto& m : metrics) {
    for (int t = 0; t < 300; ++t) {
      const auto p = testing::uniform_points(rng, 3, 2);
      const auto x = p[0], u = p[1], w = p[2];
      // d[(x,u),(x,w)] = d(u,w); d[(x,u),(w,u)] = d(x,w); d[(x,x),(u,w)] >= d(u,w)
      EXPECT_EQ(pair_metric(m, m, x, u, x, w), distance(m, u, w));
      EXPECT_EQ(pair_metric(m, m, x, u, w, u), distance(m, x, w));
      // The third is the triangle inequality, so round-off gets the usual slack.
      EXPECT_GE(pair_metric(m, m, x, x, u, w), distance(m, u, w) * (1.0 - 1e-12));
    }
  }
}

TEST(PairwiseMatrix, SinglePointIsZero) {
  const auto d = pairwise_matrix(MetricSpec::euclidean(1), PointBuffer::from_reals(v({7})));
  EXPECT_EQ(d.rows(), 1u);
  EXPECT_EQ(d(0, 0), 0.0);
}

TEST(PairwiseMatrix, RealsOneToFour) {
  const auto d = pairwise_matrix(MetricSpec::euclidean(1), PointBuffer::from_reals(v({1, 2, 3, 4})));
  const double expected[] = {1, 2, 3, 1, 2, 1};
  std::size_t k = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(d(i, i), 0.0);
    for (std::size_t j = i + 1; j < 4; ++j) {
      EXPECT_EQ(d(i, j), expected[k++]);
      EXPECT_EQ(d(j, i), d(i, j));
    }
  }
}

TEST(PairwiseMatrix, DiscreteTwoPoints) {
  const auto d = pairwise_matrix(MetricSpec::discrete(1), PointBuffer::from_reals(v({0, 1})));
  EXPECT_EQ(d(0, 1), 1.0);
  EXPECT_EQ(d(1, 0), 1.0);
  EXPECT_EQ(d(0, 0), 0.0);
}

TEST(PairwiseMatrix, EmptyBufferThrows) {
  EXPECT_THROW(pairwise_matrix(MetricSpec::euclidean(1), PointBuffer(1)), Error);
}

TEST(Similarity, IdentityLeavesPointsUnchanged) {
  const auto pts = PointBuffer(2, v({1, 2, -3, 4}));
  EXPECT_EQ(apply_similarity(Similarity::identity(2), MetricSpec::euclidean(2), pts), pts);
}

TEST(Similarity, ScaleAndShiftOnTheLine) {
  Similarity s = Similarity::identity(1);
  s.scale = 2.0;
  s.translation = {3.0};
  const auto out = apply_similarity(s, MetricSpec::euclidean(1), PointBuffer::from_reals(v({0, 1})));
  EXPECT_EQ(out.reals(), v({3, 5}));
  EXPECT_EQ(distance(MetricSpec::euclidean(1), out[0], out[1]), 2.0);
}

TEST(Similarity, QuarterTurnInThePlane) {
  Similarity s = Similarity::identity(2);
  s.orthogonal = Matrix(2, 2);
  s.orthogonal(0, 1) = -1.0;
  s.orthogonal(1, 0) = 1.0;
  const auto out =
      apply_similarity(s, MetricSpec::euclidean(2), PointBuffer(2, v({1, 0, 0, 0})));
  EXPECT_EQ(out, PointBuffer(2, v({0, 1, 0, 0})));
}

TEST(Similarity, ScalesPairwiseDistancesByTheFactor) {
  RandomStream rng(13);
  for (int t = 0; t < 100; ++t) {
    const std::size_t dim = 1 + rng.below(2);
    const auto m = MetricSpec::euclidean(dim);
    const auto pts = testing::uniform_points(rng, 12, dim);
    const auto s = testing::random_similarity(rng, dim);
    const auto before = pairwise_matrix(m, pts);
    const auto after = pairwise_matrix(m, apply_similarity(s, m, pts));
    for (std::size_t k = 0; k < before.data().size(); ++k) {
      const double want = s.scale * before.data()[k];
      EXPECT_LE(std::abs(after.data()[k] - want), 1e-12 * std::max(1.0, want));
    }
  }
}

TEST(Similarity, RejectsPrecomputedAndNonOrthogonal) {
  Matrix d(2, 2);
  d(0, 1) = d(1, 0) = 1.0;
  const auto pm = MetricSpec::precomputed(
      std::make_shared<const DistanceMatrix>(DistanceMatrix::from_matrix(d)));
  EXPECT_THROW(apply_similarity(Similarity::identity(1), pm, PointBuffer::from_reals(v({0}))),
               Error);
  Similarity skew = Similarity::identity(2);
  skew.orthogonal(0, 1) = 0.5;
  EXPECT_THROW(apply_similarity(skew, MetricSpec::euclidean(2), PointBuffer(2, v({0, 0}))), Error);
  Similarity rot = Similarity::identity(2);
  rot.orthogonal = testing::rotation2d(0.3);
  EXPECT_THROW(apply_similarity(rot, MetricSpec::manhattan(2), PointBuffer(2, v({0, 0}))), Error);
}

TEST(Similarity, DiscreteFactorIsOne) {
  Similarity s = Similarity::identity(1);
  s.scale = 3.0;
  EXPECT_EQ(similarity_factor(s, MetricSpec::discrete(1)), 1.0);
  EXPECT_EQ(similarity_factor(s, MetricSpec::euclidean(1)), 3.0);
}

TEST(HilbertCube, FirstCoordinateVanishesAtFirstAnchor) {
  const auto m = MetricSpec::euclidean(1);
  const auto pts = PointBuffer::from_reals(v({0, 1, 2}));
  const auto img = hilbert_cube_embed(m, pts);
  EXPECT_EQ(img[0][0], 0.0);
  EXPECT_EQ(img.dimension(), 3u);
}

TEST(HilbertCube, ImageOfZeroByFormula) {
  const auto img = hilbert_cube_embed(MetricSpec::euclidean(1), PointBuffer::from_reals(v({0, 1, 2})));
  EXPECT_DOUBLE_EQ(img[0][1], 0.5 / 2.0);
  EXPECT_DOUBLE_EQ(img[0][2], (2.0 / 3.0) / 3.0);
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_GE(img[p][j], 0.0);
      EXPECT_LE(img[p][j], 1.0 / static_cast<double>(j + 1));
    }
  }
}

TEST(HilbertCube, DistinctProfilesGiveDistinctImages) {
  const auto pts = PointBuffer::from_reals(v({0, 1, 2, 5}));
  const auto img = hilbert_cube_embed(MetricSpec::euclidean(1), pts);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      EXPECT_GT(distance(MetricSpec::euclidean(4), img[a], img[b]), 0.0);
    }
  }
}

TEST(HilbertCube, CoordinateCountAndErrors) {
  const auto pts = PointBuffer::from_reals(v({0, 1, 2}));
  EXPECT_EQ(hilbert_cube_embed(MetricSpec::euclidean(1), pts, pts, 2).dimension(), 2u);
  EXPECT_THROW(hilbert_cube_embed(MetricSpec::euclidean(1), pts, PointBuffer(1)), Error);
}

TEST(DistanceMatrixIo, CsvAndJsonAgree) {
  const auto a = parse_distance_matrix_csv("0,1,2\n1,0,1\n2,1,0\n");
  const auto b = parse_distance_matrix_json(R"({"n": 3, "d": [[0,1,2],[1,0,1],[2,1,0]]})");
  EXPECT_EQ(a.entries(), b.entries());
}

TEST(DistanceMatrixIo, RejectsBrokenMetrics) {
  EXPECT_THROW(parse_distance_matrix_csv("0,1\n2,0\n"), Error);          // asymmetric
  EXPECT_THROW(parse_distance_matrix_csv("1,1\n1,0\n"), Error);          // diagonal
  EXPECT_THROW(parse_distance_matrix_csv("0,1,5\n1,0,1\n5,1,0\n"), Error);  // triangle
  EXPECT_THROW(parse_distance_matrix_csv("0,x\nx,0\n"), Error);
  EXPECT_THROW(parse_distance_matrix_csv("0,1\n1\n"), Error);
  EXPECT_THROW(parse_distance_matrix_json(R"({"n": 2, "d": [[0,1]]})"), Error);
  EXPECT_THROW(parse_distance_matrix_json(R"([1,2])"), Error);
}

TEST(DistanceMatrixIo, LoadsByExtension) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto csv = dir / "emdcor_test_matrix.csv";
  const auto json = dir / "emdcor_test_matrix.json";
  std::ofstream(csv) << "0,3\n3,0\n";
  std::ofstream(json) << R"({"n": 2, "d": [[0,3],[3,0]]})";
  EXPECT_EQ(load_distance_matrix(csv)(0, 1), 3.0);
  EXPECT_EQ(load_distance_matrix(json)(1, 0), 3.0);
  std::filesystem::remove(csv);
  std::filesystem::remove(json);
  EXPECT_THROW(load_distance_matrix(dir / "emdcor_missing.csv"), Error);
}

}  // namespace
}  // namespace emdcor
