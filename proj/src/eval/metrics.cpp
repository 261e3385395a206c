#include "ligen/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ligen/common/errors.hpp"

namespace ligen {

double squared_error_sum(std::span<const Coordinate> preds, std::span<const Coordinate> truths) {
  if (preds.empty() || truths.empty()) throw EmptyInputError("rmse: no predictions");
  if (preds.size() != truths.size()) throw ContractViolation("rmse: prediction/truth count mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double dx = preds[i].x - truths[i].x, dy = preds[i].y - truths[i].y;
    sum += dx * dx + dy * dy;
  }
  return sum;
}

double rmse(std::span<const Coordinate> preds, std::span<const Coordinate> truths) {
  return std::sqrt(squared_error_sum(preds, truths) / static_cast<double>(preds.size()));
}

StabilityResult normalized_std_detail(const Matrix& samples) {
  if (samples.rows() < 2) throw ContractViolation("normalized_std: needs at least 2 samples");
  if (samples.cols() == 0) throw ContractViolation("normalized_std: samples have no channels");
  const double n = static_cast<double>(samples.rows());
  StabilityResult out;
  double acc = 0.0;
  for (std::size_t j = 0; j < samples.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < samples.rows(); ++i) mean += samples(i, j);
    mean /= n;
    if (mean == 0.0) {
      out.zero_mean_channels.push_back(j);
      continue;
    }
    double var = 0.0;
    for (std::size_t i = 0; i < samples.rows(); ++i) var += (samples(i, j) - mean) * (samples(i, j) - mean);
    acc += std::sqrt(var / n) / std::abs(mean);
  }
  out.value = acc / static_cast<double>(samples.cols());
  return out;
}

double normalized_std(const Matrix& samples) { return normalized_std_detail(samples).value; }

std::vector<CoordinateStability> stability_by_coordinate(const Dataset& data) {
  std::vector<CoordinateStability> out;
  const Matrix features = data.feature_matrix();
  const auto locations = data.locations();
  for (const Coordinate& c : data.distinct_locations()) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < locations.size(); ++i)
      if (locations[i] == c) rows.push_back(i);
    out.push_back({c, rows.size(), normalized_std_detail(features.gather_rows(rows))});
  }
  return out;
}

QuartileSummary summarize(std::span<const double> values) {
  if (values.empty()) throw EmptyInputError("summarize: no values");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  QuartileSummary s;
  s.count = v.size();
  s.min = v.front();
  s.max = v.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  return s;
}

}  // namespace ligen
