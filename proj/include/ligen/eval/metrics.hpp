#pragma once

#include <span>
#include <vector>

#include "ligen/datamodel/dataset.hpp"
#include "ligen/numerics/matrix.hpp"

namespace ligen {

double squared_error_sum(std::span<const Coordinate> preds, std::span<const Coordinate> truths);
double rmse(std::span<const Coordinate> preds, std::span<const Coordinate> truths);

struct StabilityResult {
  double value = 0.0;
  std::vector<std::size_t> zero_mean_channels;  // contributed 0
};

// Rows are samples taken at one coordinate, columns are channels. Uses the
// population standard deviation and |mean| (RSSI means are negative).
StabilityResult normalized_std_detail(const Matrix& samples);
double normalized_std(const Matrix& samples);

template <typename Fingerprint>
double normalized_std(const std::vector<Fingerprint>& samples) {
  if (samples.empty()) return normalized_std(Matrix());
  const std::size_t d = samples.front().values().size();
  Matrix m(samples.size(), d);
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = samples[i].values()[j];
  return normalized_std(m);
}

struct CoordinateStability {
  Coordinate location;
  std::size_t samples = 0;
  StabilityResult stability;
};

// One entry per distinct location, in first-appearance order.
std::vector<CoordinateStability> stability_by_coordinate(const Dataset& data);

struct QuartileSummary {
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0, mean = 0.0;
  std::size_t count = 0;
};

// Quartiles by linear interpolation between order statistics.
QuartileSummary summarize(std::span<const double> values);

}  // namespace ligen
