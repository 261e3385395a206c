#include "ligen/datamodel/dataset.hpp"

#include <cmath>
#include <set>

#include "ligen/common/errors.hpp"

namespace ligen {

std::size_t feature_dim(Modality m) noexcept {
  return m == Modality::spectral ? kSpectralChannels : kRssiChannels;
}

std::string_view to_string(Modality m) noexcept {
  return m == Modality::spectral ? "spectral" : "rssi";
}

std::string_view to_string(Origin o) noexcept {
  switch (o) {
    case Origin::real: return "real";
    case Origin::pointgan: return "pointgan";
    case Origin::freegan: return "freegan";
  }
  return "real";
}

Modality parse_modality(std::string_view s) {
  if (s == "spectral") return Modality::spectral;
  if (s == "rssi") return Modality::rssi;
  throw ContractViolation("unknown modality '" + std::string(s) + "'");
}

Origin parse_origin(std::string_view s) {
  if (s == "real") return Origin::real;
  if (s == "pointgan") return Origin::pointgan;
  if (s == "freegan") return Origin::freegan;
  throw ContractViolation("unknown origin '" + std::string(s) + "'");
}

Dataset::Dataset(Modality modality, Extent extent) : modality_(modality), extent_(extent) {
  if (!(extent.width > 0.0 && extent.height > 0.0) || !std::isfinite(extent.width) ||
      !std::isfinite(extent.height))
    throw ContractViolation("Dataset: room extent must be positive and finite");
}

void Dataset::add(LabeledSample sample) {
  if (sample.features.size() != feature_dim(modality_))
    throw ContractViolation("Dataset: expected " + std::to_string(feature_dim(modality_)) +
                            " features, got " + std::to_string(sample.features.size()));
  for (double v : sample.features) {
    if (!std::isfinite(v)) throw ContractViolation("Dataset: non-finite feature value");
    if (modality_ == Modality::spectral && v < 0.0)
      throw ContractViolation("Dataset: spectral intensities must be >= 0");
  }
  if (!std::isfinite(sample.location.x) || !std::isfinite(sample.location.y))
    throw ContractViolation("Dataset: non-finite location");
  if (!extent_.contains(sample.location))
    throw ContractViolation("Dataset: location outside the room extent");
  samples_.push_back(std::move(sample));
}

void Dataset::add(std::span<const double> features, Coordinate location, Origin origin) {
  add(LabeledSample{std::vector<double>(features.begin(), features.end()), location, origin});
}

Matrix Dataset::feature_matrix() const {
  const std::size_t d = feature_dim(modality_);
  Matrix m(samples_.size(), d);
  for (std::size_t i = 0; i < samples_.size(); ++i)
    std::copy(samples_[i].features.begin(), samples_[i].features.end(), m.row(i).begin());
  return m;
}

Matrix Dataset::location_matrix() const {
  Matrix m(samples_.size(), 2);
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    m(i, 0) = samples_[i].location.x;
    m(i, 1) = samples_[i].location.y;
  }
  return m;
}

std::vector<Coordinate> Dataset::locations() const {
  std::vector<Coordinate> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.location);
  return out;
}

std::vector<Coordinate> Dataset::distinct_locations() const {
  std::vector<Coordinate> out;
  std::set<Coordinate> seen;
  for (const auto& s : samples_)
    if (seen.insert(s.location).second) out.push_back(s.location);
  return out;
}

std::map<Origin, std::size_t> Dataset::origin_histogram() const {
  std::map<Origin, std::size_t> h;
  for (const auto& s : samples_) ++h[s.origin];
  return h;
}

bool Dataset::only_real() const {
  for (const auto& s : samples_)
    if (s.origin != Origin::real) return false;
  return true;
}

bool operator==(const LabeledSample& a, const LabeledSample& b) {
  return a.features == b.features && a.location == b.location && a.origin == b.origin;
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.modality_ == b.modality_ && a.extent_ == b.extent_ && a.samples_ == b.samples_;
}

}  // namespace ligen
