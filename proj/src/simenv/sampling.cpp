#include "ligen/simenv/sampling.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "ligen/common/errors.hpp"
#include "ligen/common/seeding.hpp"

namespace ligen {
namespace {

void require_count(std::size_t n) {
  if (n == 0) throw ContractViolation("sampling: n must be >= 1");
}

}  // namespace

std::vector<SpectralFingerprint> sample_spectral(const RoomModel& room, const NoiseModel& noise, Coordinate at,
                                                 std::size_t n, std::uint64_t seed) {
  require_count(n);
  validate(noise);
  const SpectralFingerprint mean = expected_spectral(room, at);
  Rng rng(seed);
  std::normal_distribution<double> eps(0.0, 1.0);
  std::vector<SpectralFingerprint> out(n, mean);
  if (noise.spectral_relative == 0.0) return out;
  for (auto& fp : out)
    for (double& v : fp.channels) v = std::max(0.0, v * (1.0 + noise.spectral_relative * eps(rng)));
  return out;
}

std::vector<RssiFingerprint> sample_rssi(const RoomModel& room, const NoiseModel& noise, Coordinate at,
                                         std::size_t n, std::uint64_t seed) {
  require_count(n);
  validate(noise);
  const RssiFingerprint mean = expected_rssi(room, at);
  Rng rng(seed);
  std::normal_distribution<double> eps(0.0, 1.0);
  std::vector<RssiFingerprint> out(n, mean);
  if (noise.rssi_db == 0.0) return out;
  for (auto& fp : out)
    for (double& v : fp.rssi) v += noise.rssi_db * eps(rng);
  return out;
}

Dataset generate_dataset(const RoomModel& room, const NoiseModel& noise, const std::vector<Coordinate>& grid,
                         std::size_t samples_per_point, Modality modality, std::uint64_t seed) {
  validate(room);
  if (grid.empty()) throw ContractViolation("generate_dataset: grid is empty");
  for (const auto& c : grid)
    if (!room.extent.contains(c)) throw ContractViolation("generate_dataset: grid point outside the room");
  Dataset data(modality, room.extent);
  const std::string label = std::string(to_string(modality)) + "/point";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint64_t point_seed = derive_seed(seed, label, i);
    if (modality == Modality::spectral) {
      for (const auto& fp : sample_spectral(room, noise, grid[i], samples_per_point, point_seed))
        data.add(std::vector<double>(fp.channels.begin(), fp.channels.end()), grid[i]);
    } else {
      for (const auto& fp : sample_rssi(room, noise, grid[i], samples_per_point, point_seed))
        data.add(std::vector<double>(fp.rssi.begin(), fp.rssi.end()), grid[i]);
    }
  }
  return data;
}

}  // namespace ligen
