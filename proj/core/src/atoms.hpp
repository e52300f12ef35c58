#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "emdcor/dependence.hpp"
#include "emdcor/matrix.hpp"
#include "emdcor/metric.hpp"

namespace emdcor::detail {

// Groups rows of a buffer by exact bitwise equality of their coordinates.
// Ids are assigned in order of first appearance.
struct DistinctPoints {
  std::vector<std::size_t> id_of_row;
  std::vector<std::size_t> first_row;
  std::vector<std::int64_t> count;

  std::size_t size() const noexcept { return first_row.size(); }
};

DistinctPoints distinct_points(const PointBuffer& points);

// Distances between the distinct points of a margin.
Matrix distinct_distances(const Margin& margin, const DistinctPoints& distinct);

bool is_real_line(const MetricSpec& m) noexcept;

}  // namespace emdcor::detail
