#include "emdcor/metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "emdcor/error.hpp"

namespace emdcor {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::manhattan: return "manhattan";
    case MetricKind::discrete: return "discrete";
    case MetricKind::precomputed: return "precomputed";
  }
  return "unknown";
}

DistanceMatrix DistanceMatrix::from_matrix(Matrix entries) {
  const std::size_t n = entries.rows();
  if (n == 0 || entries.cols() != n) {
    throw Error("distance matrix must be square and nonempty, got " +
                std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()));
  }
  double largest = 0.0;
  for (double v : entries.data()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error("distance matrix entries must be finite and nonnegative");
    }
    largest = std::max(largest, v);
  }
  const double tol = kValidationTolerance * std::max(1.0, largest);
  for (std::size_t i = 0; i < n; ++i) {
    if (entries(i, i) != 0.0) {
      throw Error("distance matrix diagonal entry " + std::to_string(i) + " is not zero");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(entries(i, j) - entries(j, i)) > tol) {
        throw Error("distance matrix is not symmetric at (" + std::to_string(i) + ", " +
                    std::to_string(j) + ")");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double dik = entries(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        if (entries(i, j) > dik + entries(k, j) + tol) {
          throw Error("distance matrix violates the triangle inequality at (" +
                      std::to_string(i) + ", " + std::to_string(k) + ", " +
                      std::to_string(j) + ")");
        }
      }
    }
  }
  return DistanceMatrix(std::move(entries));
}

MetricSpec MetricSpec::euclidean(std::size_t dimension) {
  return {MetricKind::euclidean, dimension, nullptr};
}
MetricSpec MetricSpec::manhattan(std::size_t dimension) {
  return {MetricKind::manhattan, dimension, nullptr};
}
MetricSpec MetricSpec::discrete(std::size_t dimension) {
  return {MetricKind::discrete, dimension, nullptr};
}
MetricSpec MetricSpec::precomputed(std::shared_ptr<const DistanceMatrix> matrix) {
  if (!matrix) throw Error("precomputed metric requires a distance matrix");
  return {MetricKind::precomputed, 1, std::move(matrix)};
}

PointBuffer::PointBuffer(std::size_t dimension) : dim_(dimension) {
  if (dim_ == 0) throw Error("point dimension must be positive");
}

PointBuffer::PointBuffer(std::size_t dimension, std::vector<double> coordinates)
    : dim_(dimension), coords_(std::move(coordinates)) {
  if (dim_ == 0) throw Error("point dimension must be positive");
  if (coords_.size() % dim_ != 0) {
    throw Error("coordinate count " + std::to_string(coords_.size()) +
                " is not a multiple of dimension " + std::to_string(dim_));
  }
}

PointBuffer PointBuffer::from_reals(std::span<const double> values) {
  return PointBuffer(1, std::vector<double>(values.begin(), values.end()));
}

PointBuffer PointBuffer::from_indices(std::span<const std::size_t> indices) {
  std::vector<double> coords(indices.begin(), indices.end());
  return PointBuffer(1, std::move(coords));
}

void PointBuffer::push_back(std::span<const double> point) {
  if (point.size() != dim_) {
    throw Error("point has dimension " + std::to_string(point.size()) + ", buffer expects " +
                std::to_string(dim_));
  }
  coords_.insert(coords_.end(), point.begin(), point.end());
}

PointBuffer PointBuffer::select(std::span<const std::size_t> order) const {
  PointBuffer out(dim_);
  out.coords_.reserve(order.size() * dim_);
  for (std::size_t i : order) {
    const auto p = (*this)[i];
    out.coords_.insert(out.coords_.end(), p.begin(), p.end());
  }
  return out;
}

std::vector<double> PointBuffer::reals() const {
  if (dim_ != 1) throw Error("expected one-dimensional points, got dimension " + std::to_string(dim_));
  return coords_;
}

namespace {

std::size_t matrix_index(const MetricSpec& m, double coordinate) {
  const double n = static_cast<double>(m.matrix->size());
  if (!(coordinate >= 0.0) || coordinate >= n || std::floor(coordinate) != coordinate) {
    throw Error("point index " + std::to_string(coordinate) +
                " is not a valid row of the distance matrix of size " +
                std::to_string(m.matrix->size()));
  }
  return static_cast<std::size_t>(coordinate);
}

}  // namespace

void check_conforms(const MetricSpec& m, const PointBuffer& points) {
  if (points.dimension() != m.point_dimension()) {
    throw Error("points have dimension " + std::to_string(points.dimension()) + " but the " +
                to_string(m.kind) + " metric expects " + std::to_string(m.point_dimension()));
  }
  if (m.kind == MetricKind::precomputed) {
    for (double c : points.coordinates()) matrix_index(m, c);
  }
}

double distance(const MetricSpec& m, std::span<const double> a, std::span<const double> b) {
  const std::size_t dim = m.point_dimension();
  if (a.size() != dim || b.size() != dim) {
    throw Error("dimension mismatch: metric expects " + std::to_string(dim) + ", got " +
                std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  switch (m.kind) {
    case MetricKind::euclidean: {
      if (dim == 1) return std::abs(a[0] - b[0]);
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case MetricKind::manhattan: {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += std::abs(a[k] - b[k]);
      return s;
    }
    case MetricKind::discrete:
      return std::equal(a.begin(), a.end(), b.begin()) ? 0.0 : 1.0;
    case MetricKind::precomputed:
      return (*m.matrix)(matrix_index(m, a[0]), matrix_index(m, b[0]));
  }
  return 0.0;
}

double pair_metric(const MetricSpec& mx, const MetricSpec& my,
                   std::span<const double> x, std::span<const double> y,
                   std::span<const double> u, std::span<const double> v) {
  return distance(mx, x, u) + distance(my, y, v);
}

Matrix pairwise_matrix(const MetricSpec& m, const PointBuffer& points) {
  if (points.empty()) throw Error("pairwise_matrix requires at least one point");
  check_conforms(m, points);
  const std::size_t n = points.size();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(m, points[i], points[j]);
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return out;
}

Matrix cross_matrix(const MetricSpec& m, const PointBuffer& a, const PointBuffer& b) {
  check_conforms(m, a);
  check_conforms(m, b);
  Matrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = distance(m, a[i], b[j]);
  }
  return out;
}

Similarity Similarity::identity(std::size_t dimension) {
  Similarity s;
  s.orthogonal = Matrix(dimension, dimension);
  for (std::size_t i = 0; i < dimension; ++i) s.orthogonal(i, i) = 1.0;
  s.translation.assign(dimension, 0.0);
  return s;
}

namespace {

void validate_similarity(const Similarity& s, const MetricSpec& m) {
  if (!m.is_coordinate()) {
    throw Error("similarities need a coordinate representation; precomputed metrics have none");
  }
  const std::size_t dim = m.dimension;
  if (!(s.scale > 0.0) || !std::isfinite(s.scale)) throw Error("similarity scale must be positive");
  if (s.orthogonal.rows() != dim || s.orthogonal.cols() != dim || s.translation.size() != dim) {
    throw Error("similarity dimension does not match metric dimension " + std::to_string(dim));
  }
  const auto& q = s.orthogonal;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < dim; ++k) dot += q(k, i) * q(k, j);
      if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-12) {
        throw Error("similarity matrix is not orthogonal");
      }
    }
  }
  if (m.kind == MetricKind::manhattan) {
    // L1 isometries fixing the origin are the signed permutations.
    for (double v : q.data()) {
      if (v != 0.0 && std::abs(v) != 1.0) {
        throw Error("manhattan similarities require a signed permutation matrix");
      }
    }
  }
}

}  // namespace

double similarity_factor(const Similarity& s, const MetricSpec& m) {
  validate_similarity(s, m);
  return m.kind == MetricKind::discrete ? 1.0 : s.scale;
}

PointBuffer apply_similarity(const Similarity& s, const MetricSpec& m, const PointBuffer& points) {
  validate_similarity(s, m);
  check_conforms(m, points);
  const std::size_t dim = m.dimension;
  std::vector<double> out(points.size() * dim);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto x = points[p];
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < dim; ++k) acc += s.orthogonal(i, k) * x[k];
      out[p * dim + i] = s.scale * acc + s.translation[i];
    }
  }
  return PointBuffer(dim, std::move(out));
}

PointBuffer hilbert_cube_embed(const MetricSpec& m, const PointBuffer& points,
                               const PointBuffer& anchors,
                               std::optional<std::size_t> coordinate_count) {
  if (anchors.empty()) throw Error("hilbert_cube_embed requires at least one anchor");
  check_conforms(m, points);
  check_conforms(m, anchors);
  const std::size_t k = coordinate_count.value_or(anchors.size());
  if (k == 0 || k > anchors.size()) {
    throw Error("coordinate count must be between 1 and the number of anchors");
  }
  std::vector<double> out(points.size() * k);
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t j = 0; j < k; ++j) {
      const double d = distance(m, points[p], anchors[j]);
      const double bounded = std::isinf(d) ? 1.0 : d / (d + 1.0);
      out[p * k + j] = bounded / static_cast<double>(j + 1);
    }
  }
  return PointBuffer(k, std::move(out));
}

PointBuffer hilbert_cube_embed(const MetricSpec& m, const PointBuffer& points) {
  return hilbert_cube_embed(m, points, points);
}

}  // namespace emdcor
