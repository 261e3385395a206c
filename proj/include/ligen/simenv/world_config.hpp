#pragma once

#include <cstdint>
#include <vector>

#include "ligen/common/json_fields.hpp"
#include "ligen/simenv/room.hpp"

namespace ligen {

struct ClutterConfig {
  std::size_t n_occluders = 0;
  std::uint64_t seed = 0;
};

// Everything `gen` needs to produce the fingerprint files of one environment.
struct WorldConfig {
  RoomModel room = default_room();
  NoiseModel noise;
  double grid_spacing = 1.0;
  std::size_t samples_per_point = 32;
  std::vector<Modality> modalities{Modality::spectral, Modality::rssi};
  ClutterConfig clutter;

  // Room after clutter is applied.
  RoomModel resolved_room() const;
};

// Accepted room forms:
//   {"preset": "default", "extent": [w, h]}
//   {"extent": [w, h], "panels": [...], "access_points": [...], "occluders": [...]}
// Keys missing from `doc` keep the values of `base`.
WorldConfig world_config_from_json(const Json& doc, const WorldConfig& base = {}, const std::string& path = "");
Json to_json(const WorldConfig& cfg);
Json to_json(const RoomModel& room);
RoomModel room_from_json(const Json& doc, const std::string& path);

}  // namespace ligen
