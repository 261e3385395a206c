#pragma once

#include <array>
#include <span>
#include <vector>

#include "ligen/datamodel/dataset.hpp"
#include "ligen/numerics/matrix.hpp"

namespace ligen {

// Min-max statistics from training data. A degenerate channel (max == min)
// normalizes to 0 and denormalizes to its min.
struct NormStats {
  std::vector<double> feature_min;
  std::vector<double> feature_max;
  std::array<double, 2> coord_min{};
  std::array<double, 2> coord_max{};

  friend bool operator==(const NormStats&, const NormStats&) = default;
};

NormStats fit_normalizer(const Dataset& train);

Matrix normalize_features(const NormStats& stats, const Matrix& features);
Matrix denormalize_features(const NormStats& stats, const Matrix& normalized);
Matrix normalize_locations(const NormStats& stats, const Matrix& locations);
Matrix denormalize_locations(const NormStats& stats, const Matrix& normalized);

Coordinate normalize(const NormStats& stats, Coordinate c);
Coordinate denormalize(const NormStats& stats, Coordinate c);

// Returns a copy of `sample` with normalized features and location.
LabeledSample apply_normalizer(const NormStats& stats, const LabeledSample& sample);

}  // namespace ligen
