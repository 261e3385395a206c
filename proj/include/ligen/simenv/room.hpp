#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ligen/datamodel/dataset.hpp"

namespace ligen {

using ChannelWeights = std::array<double, kSpectralChannels>;

// Ceiling light source. `height` is measured from the sensor plane.
struct Panel {
  Coordinate position;
  double height = 2.5;
  ChannelWeights emission{};
  double power = 1.0;
};

struct AccessPoint {
  Coordinate position;
  double tx_power_dbm = -40.0;
  double path_loss_exponent = 3.0;
};

// Axis-aligned box standing on the sensor plane.
struct Occluder {
  Coordinate min;
  Coordinate max;
  double height = 0.8;
  ChannelWeights spectral_attenuation{};  // transmission factors in [0, 1]
  double rssi_attenuation_db = 0.0;
};

struct RoomModel {
  Extent extent;
  std::vector<Panel> panels;
  std::vector<AccessPoint> access_points;
  std::vector<Occluder> occluders;
};

void validate(const RoomModel& room);

// Warm-white room: four panels at (w/7, h/7)-style positions with emission
// profiles spanning roughly 4000-4500 K, six access points on the walls.
RoomModel default_room(Extent extent = {7.0, 7.0});

struct NoiseModel {
  double spectral_relative = 5e-4;  // multiplicative Gaussian sigma
  double rssi_db = 1.8;             // additive Gaussian sigma, dB
};

void validate(const NoiseModel& noise);

// Noise-free readings.
SpectralFingerprint expected_spectral(const RoomModel& room, Coordinate at);
RssiFingerprint expected_rssi(const RoomModel& room, Coordinate at);

// Fraction of light reaching `at` from `panel` per channel (product over
// occluders crossed by the straight ray).
ChannelWeights spectral_transmission(const RoomModel& room, const Panel& panel, Coordinate at);

// Copy of `room` with n random boxes (0.3-1.0 m sides, spectral transmission
// 0.3-0.9, 3-10 dB RSSI loss).
RoomModel apply_clutter(const RoomModel& room, std::uint64_t clutter_seed, std::size_t n_occluders);

}  // namespace ligen
