#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ligen/datamodel/dataset.hpp"

namespace ligen {

// Axis-aligned reference grid anchored at (0, 0) with points at multiples of
// `spacing` up to and including the extent. Row-major: y outer, x inner.
std::vector<Coordinate> make_grid(Extent extent, double spacing);
inline std::vector<Coordinate> make_grid(double extent, double spacing) {
  return make_grid(Extent{extent, extent}, spacing);
}

struct CoordinateSplit {
  std::vector<Coordinate> train;
  std::vector<Coordinate> test;
};

// Uniform sample of n_train points without replacement; the rest are test.
// Both sides keep the input order.
CoordinateSplit coordinate_split(std::span<const Coordinate> points, std::size_t n_train,
                                 std::uint64_t seed);

struct DatasetSplit {
  Dataset train;
  Dataset test;
};

// Routes every sample to the side its location belongs to. Samples at
// locations on neither side are dropped.
DatasetSplit split_by_coordinates(const Dataset& data, const CoordinateSplit& split);

}  // namespace ligen
