#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ligen/numerics/matrix.hpp"

namespace ligen {

enum class Modality { spectral, rssi };
enum class Origin { real, pointgan, freegan };

inline constexpr std::size_t kSpectralChannels = 10;
inline constexpr std::size_t kRssiChannels = 6;

// Column names in storage order: F1..F8, NIR, Clear.
inline constexpr std::array<std::string_view, kSpectralChannels> kSpectralChannelNames{
    "f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "nir", "clear"};
inline constexpr std::array<std::string_view, kRssiChannels> kRssiChannelNames{
    "ap1", "ap2", "ap3", "ap4", "ap5", "ap6"};

std::size_t feature_dim(Modality m) noexcept;
std::string_view to_string(Modality m) noexcept;
std::string_view to_string(Origin o) noexcept;
Modality parse_modality(std::string_view s);
Origin parse_origin(std::string_view s);

struct Coordinate {
  double x = 0.0;  // meters
  double y = 0.0;
  friend auto operator<=>(const Coordinate&, const Coordinate&) = default;
};

// Room extent in meters; the room spans [0, width] x [0, height].
struct Extent {
  double width = 0.0;
  double height = 0.0;
  bool contains(const Coordinate& c, double tol = 1e-9) const noexcept {
    return c.x >= -tol && c.y >= -tol && c.x <= width + tol && c.y <= height + tol;
  }
  friend bool operator==(const Extent&, const Extent&) = default;
};

// One 10-channel ambient-light reading (raw counts, >= 0).
struct SpectralFingerprint {
  std::array<double, kSpectralChannels> channels{};
  std::span<const double> values() const noexcept { return channels; }
};

// One reading of the six access points, in dBm.
struct RssiFingerprint {
  std::array<double, kRssiChannels> rssi{};
  std::span<const double> values() const noexcept { return rssi; }
};

struct LabeledSample {
  std::vector<double> features;  // feature_dim(modality) values
  Coordinate location;
  Origin origin = Origin::real;
};

// A set of labeled fingerprints of one modality inside a rectangular room.
class Dataset {
 public:
  Dataset(Modality modality, Extent extent);

  Modality modality() const noexcept { return modality_; }
  const Extent& extent() const noexcept { return extent_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const std::vector<LabeledSample>& samples() const noexcept { return samples_; }
  const LabeledSample& operator[](std::size_t i) const { return samples_[i]; }

  // Validates dimension, finiteness, sign (spectral >= 0) and extent.
  void add(LabeledSample sample);
  void add(std::span<const double> features, Coordinate location, Origin origin = Origin::real);

  Matrix feature_matrix() const;
  Matrix location_matrix() const;
  std::vector<Coordinate> locations() const;
  // Distinct locations in first-appearance order.
  std::vector<Coordinate> distinct_locations() const;
  std::map<Origin, std::size_t> origin_histogram() const;
  bool only_real() const;

  friend bool operator==(const Dataset&, const Dataset&);

 private:
  Modality modality_;
  Extent extent_;
  std::vector<LabeledSample> samples_;
};

bool operator==(const LabeledSample& a, const LabeledSample& b);

}  // namespace ligen
