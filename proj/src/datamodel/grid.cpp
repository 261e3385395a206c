#include "ligen/datamodel/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ligen/common/errors.hpp"
#include "ligen/common/seeding.hpp"

namespace ligen {

std::vector<Coordinate> make_grid(Extent extent, double spacing) {
  if (!(extent.width > 0.0 && extent.height > 0.0))
    throw ContractViolation("make_grid: extent must be positive");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw ContractViolation("make_grid: spacing must be positive");
  auto count = [spacing](double length) {
    return static_cast<std::size_t>(std::floor(length / spacing + 1e-9)) + 1;
  };
  const std::size_t nx = count(extent.width);
  const std::size_t ny = count(extent.height);
  std::vector<Coordinate> points;
  points.reserve(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix)
      points.push_back({static_cast<double>(ix) * spacing, static_cast<double>(iy) * spacing});
  return points;
}

CoordinateSplit coordinate_split(std::span<const Coordinate> points, std::size_t n_train,
                                 std::uint64_t seed) {
  if (n_train < 1 || n_train > points.size())
    throw ContractViolation("coordinate_split: n_train " + std::to_string(n_train) +
                            " outside [1, " + std::to_string(points.size()) + "]");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> is_train(points.size(), false);
  for (std::size_t i = 0; i < n_train; ++i) is_train[order[i]] = true;

  CoordinateSplit split;
  for (std::size_t i = 0; i < points.size(); ++i)
    (is_train[i] ? split.train : split.test).push_back(points[i]);
  return split;
}

DatasetSplit split_by_coordinates(const Dataset& data, const CoordinateSplit& split) {
  const std::set<Coordinate> train(split.train.begin(), split.train.end());
  const std::set<Coordinate> test(split.test.begin(), split.test.end());
  DatasetSplit out{Dataset(data.modality(), data.extent()), Dataset(data.modality(), data.extent())};
  for (const auto& s : data.samples()) {
    if (train.count(s.location))
      out.train.add(s);
    else if (test.count(s.location))
      out.test.add(s);
  }
  return out;
}

}  // namespace ligen
