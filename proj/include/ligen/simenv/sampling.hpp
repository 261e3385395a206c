#pragma once

#include <cstdint>
#include <vector>

#include "ligen/datamodel/dataset.hpp"
#include "ligen/simenv/room.hpp"

namespace ligen {

// Every channel gets its own multiplicative factor (1 + eps), eps ~ N(0, sigma_s^2).
std::vector<SpectralFingerprint> sample_spectral(const RoomModel& room, const NoiseModel& noise, Coordinate at,
                                                 std::size_t n, std::uint64_t seed);

std::vector<RssiFingerprint> sample_rssi(const RoomModel& room, const NoiseModel& noise, Coordinate at,
                                         std::size_t n, std::uint64_t seed);

// Point i draws from derive_seed(seed, "<modality>/point", i).
Dataset generate_dataset(const RoomModel& room, const NoiseModel& noise, const std::vector<Coordinate>& grid,
                         std::size_t samples_per_point, Modality modality, std::uint64_t seed);

}  // namespace ligen
