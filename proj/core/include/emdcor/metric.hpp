#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emdcor/matrix.hpp"

namespace emdcor {

enum class MetricKind { euclidean, manhattan, discrete, precomputed };

std::string to_string(MetricKind kind);

// A validated finite metric given as an n x n matrix: symmetric, zero
// diagonal, nonnegative and satisfying the triangle inequality.
class DistanceMatrix {
 public:
  // Tolerance used for symmetry and triangle checks, relative to the
  // largest entry (absolute when all entries are below one).
  static constexpr double kValidationTolerance = 1e-12;

  // Throws emdcor::Error describing the first violated property.
  static DistanceMatrix from_matrix(Matrix entries);

  std::size_t size() const noexcept { return entries_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_(i, j); }
  const Matrix& entries() const noexcept { return entries_; }

 private:
  explicit DistanceMatrix(Matrix entries) : entries_(std::move(entries)) {}
  Matrix entries_;
};

// Square numeric grid, comma separated, no header.
DistanceMatrix parse_distance_matrix_csv(std::string_view text);
// {"n": int, "d": [[...], ...]}
DistanceMatrix parse_distance_matrix_json(std::string_view text);
// Dispatches on the extension (.json, anything else is read as CSV).
DistanceMatrix load_distance_matrix(const std::filesystem::path& path);

// How to measure the distance between two points of one margin.
//
// Coordinate metrics (euclidean, manhattan, discrete) act on vectors of
// `dimension` doubles. A precomputed metric identifies points by index: a
// point is a single coordinate holding its row in `matrix`.
struct MetricSpec {
  MetricKind kind = MetricKind::euclidean;
  std::size_t dimension = 1;
  std::shared_ptr<const DistanceMatrix> matrix;

  static MetricSpec euclidean(std::size_t dimension = 1);
  static MetricSpec manhattan(std::size_t dimension = 1);
  static MetricSpec discrete(std::size_t dimension = 1);
  static MetricSpec precomputed(std::shared_ptr<const DistanceMatrix> matrix);

  bool is_coordinate() const noexcept { return kind != MetricKind::precomputed; }
  // Number of doubles per point (1 for precomputed).
  std::size_t point_dimension() const noexcept { return is_coordinate() ? dimension : 1; }

  // Same kind, dimension and (for precomputed) the same matrix object.
  friend bool operator==(const MetricSpec& a, const MetricSpec& b) noexcept {
    return a.kind == b.kind && a.point_dimension() == b.point_dimension() &&
           a.matrix == b.matrix;
  }
};

// Ordered collection of equally sized coordinate vectors, stored flat.
class PointBuffer {
 public:
  explicit PointBuffer(std::size_t dimension = 1);
  PointBuffer(std::size_t dimension, std::vector<double> coordinates);

  static PointBuffer from_reals(std::span<const double> values);
  static PointBuffer from_indices(std::span<const std::size_t> indices);

  std::size_t size() const noexcept { return coords_.size() / dim_; }
  std::size_t dimension() const noexcept { return dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  void push_back(std::span<const double> point);

  std::span<const double> coordinates() const noexcept { return coords_; }

  // Subset of points in the given order.
  PointBuffer select(std::span<const std::size_t> order) const;

  // Single-coordinate buffers only.
  std::vector<double> reals() const;

  friend bool operator==(const PointBuffer&, const PointBuffer&) = default;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

// Throws emdcor::Error unless every point of `points` is valid for `m`.
void check_conforms(const MetricSpec& m, const PointBuffer& points);

double distance(const MetricSpec& m, std::span<const double> a, std::span<const double> b);

// Manhattan-sum metric on the product space:
// d[(x, y), (u, v)] = dx(x, u) + dy(y, v).
double pair_metric(const MetricSpec& mx, const MetricSpec& my,
                   std::span<const double> x, std::span<const double> y,
                   std::span<const double> u, std::span<const double> v);

Matrix pairwise_matrix(const MetricSpec& m, const PointBuffer& points);
// Entry (i, j) = distance(a[i], b[j]).
Matrix cross_matrix(const MetricSpec& m, const PointBuffer& a, const PointBuffer& b);

// x -> scale * Q x + translation with Q orthogonal.
struct Similarity {
  double scale = 1.0;
  Matrix orthogonal;                 // dimension x dimension
  std::vector<double> translation;   // dimension entries

  static Similarity identity(std::size_t dimension);
  std::size_t dimension() const noexcept { return translation.size(); }
};

// Factor by which `s` multiplies distances of metric `m`: the scale for
// euclidean and manhattan, 1 for the discrete metric (any injection).
double similarity_factor(const Similarity& s, const MetricSpec& m);

// Throws for precomputed metrics, non-orthogonal Q, a non-positive scale,
// a dimension mismatch, or (manhattan) a Q that is not a signed permutation.
PointBuffer apply_similarity(const Similarity& s, const MetricSpec& m, const PointBuffer& points);

// Maps x to (d'(x, a_1)/1, d'(x, a_2)/2, ...) with d' = d / (d + 1), using the
// first `coordinate_count` anchors (all of them when not given). The result
// is meant for the euclidean metric.
PointBuffer hilbert_cube_embed(const MetricSpec& m, const PointBuffer& points,
                               const PointBuffer& anchors,
                               std::optional<std::size_t> coordinate_count = std::nullopt);

// Anchors default to the sample itself.
PointBuffer hilbert_cube_embed(const MetricSpec& m, const PointBuffer& points);

}  // namespace emdcor
