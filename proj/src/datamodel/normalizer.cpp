#include "ligen/datamodel/normalizer.hpp"

#include <algorithm>
#include <limits>

#include "ligen/common/errors.hpp"

namespace ligen {
namespace {

double scale(double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) : 0.0; }
double unscale(double v, double lo, double hi) { return hi > lo ? lo + v * (hi - lo) : lo; }

void check_cols(const NormStats& stats, const Matrix& m) {
  if (m.cols() != stats.feature_min.size())
    throw ContractViolation("normalizer: feature dimension does not match statistics");
}

}  // namespace

NormStats fit_normalizer(const Dataset& train) {
  if (train.empty()) throw EmptyInputError("fit_normalizer: empty training set");
  const std::size_t d = feature_dim(train.modality());
  NormStats s;
  s.feature_min.assign(d, std::numeric_limits<double>::infinity());
  s.feature_max.assign(d, -std::numeric_limits<double>::infinity());
  s.coord_min = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  s.coord_max = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& sample : train.samples()) {
    for (std::size_t j = 0; j < d; ++j) {
      s.feature_min[j] = std::min(s.feature_min[j], sample.features[j]);
      s.feature_max[j] = std::max(s.feature_max[j], sample.features[j]);
    }
    s.coord_min[0] = std::min(s.coord_min[0], sample.location.x);
    s.coord_max[0] = std::max(s.coord_max[0], sample.location.x);
    s.coord_min[1] = std::min(s.coord_min[1], sample.location.y);
    s.coord_max[1] = std::max(s.coord_max[1], sample.location.y);
  }
  return s;
}

Matrix normalize_features(const NormStats& stats, const Matrix& features) {
  check_cols(stats, features);
  Matrix out(features.rows(), features.cols());
  for (std::size_t r = 0; r < features.rows(); ++r)
    for (std::size_t c = 0; c < features.cols(); ++c)
      out(r, c) = scale(features(r, c), stats.feature_min[c], stats.feature_max[c]);
  return out;
}

Matrix denormalize_features(const NormStats& stats, const Matrix& normalized) {
  check_cols(stats, normalized);
  Matrix out(normalized.rows(), normalized.cols());
  for (std::size_t r = 0; r < normalized.rows(); ++r)
    for (std::size_t c = 0; c < normalized.cols(); ++c)
      out(r, c) = unscale(normalized(r, c), stats.feature_min[c], stats.feature_max[c]);
  return out;
}

Matrix normalize_locations(const NormStats& stats, const Matrix& locations) {
  if (locations.cols() != 2) throw ContractViolation("normalizer: locations must have 2 columns");
  Matrix out(locations.rows(), 2);
  for (std::size_t r = 0; r < locations.rows(); ++r)
    for (std::size_t c = 0; c < 2; ++c)
      out(r, c) = scale(locations(r, c), stats.coord_min[c], stats.coord_max[c]);
  return out;
}

Matrix denormalize_locations(const NormStats& stats, const Matrix& normalized) {
  if (normalized.cols() != 2) throw ContractViolation("normalizer: locations must have 2 columns");
  Matrix out(normalized.rows(), 2);
  for (std::size_t r = 0; r < normalized.rows(); ++r)
    for (std::size_t c = 0; c < 2; ++c)
      out(r, c) = unscale(normalized(r, c), stats.coord_min[c], stats.coord_max[c]);
  return out;
}

Coordinate normalize(const NormStats& stats, Coordinate c) {
  return {scale(c.x, stats.coord_min[0], stats.coord_max[0]),
          scale(c.y, stats.coord_min[1], stats.coord_max[1])};
}

Coordinate denormalize(const NormStats& stats, Coordinate c) {
  return {unscale(c.x, stats.coord_min[0], stats.coord_max[0]),
          unscale(c.y, stats.coord_min[1], stats.coord_max[1])};
}

LabeledSample apply_normalizer(const NormStats& stats, const LabeledSample& sample) {
  if (sample.features.size() != stats.feature_min.size())
    throw ContractViolation("apply_normalizer: feature dimension does not match statistics");
  LabeledSample out = sample;
  for (std::size_t j = 0; j < out.features.size(); ++j)
    out.features[j] = scale(sample.features[j], stats.feature_min[j], stats.feature_max[j]);
  out.location = normalize(stats, sample.location);
  return out;
}

}  // namespace ligen
