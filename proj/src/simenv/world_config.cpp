#include "ligen/simenv/world_config.hpp"

#include <string>

namespace ligen {
namespace {

Coordinate coord_from(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError("field '" + path + "': expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json coord_to(Coordinate c) { return Json::array({c.x, c.y}); }

ChannelWeights weights_from(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != kSpectralChannels)
    throw ConfigError("field '" + path + "': expected 10 numbers");
  ChannelWeights w{};
  for (std::size_t i = 0; i < kSpectralChannels; ++i) {
    if (!j[i].is_number()) throw ConfigError("field '" + path + "': expected 10 numbers");
    w[i] = j[i].get<double>();
  }
  return w;
}

const Json& array_field(const Json& obj, const char* key, const std::string& path) {
  static const Json empty = Json::array();
  auto it = obj.find(key);
  if (it == obj.end()) return empty;
  if (!it->is_array()) throw ConfigError("field '" + path + "." + key + "': expected an array");
  return *it;
}

}  // namespace

RoomModel WorldConfig::resolved_room() const {
  return clutter.n_occluders == 0 ? room : apply_clutter(room, clutter.seed, clutter.n_occluders);
}

Json to_json(const RoomModel& room) {
  Json j;
  j["extent"] = Json::array({room.extent.width, room.extent.height});
  j["panels"] = Json::array();
  for (const Panel& p : room.panels)
    j["panels"].push_back({{"position", coord_to(p.position)},
                           {"height", p.height},
                           {"emission", p.emission},
                           {"power", p.power}});
  j["access_points"] = Json::array();
  for (const AccessPoint& ap : room.access_points)
    j["access_points"].push_back({{"position", coord_to(ap.position)},
                                  {"tx_power_dbm", ap.tx_power_dbm},
                                  {"path_loss_exponent", ap.path_loss_exponent}});
  j["occluders"] = Json::array();
  for (const Occluder& o : room.occluders)
    j["occluders"].push_back({{"min", coord_to(o.min)},
                              {"max", coord_to(o.max)},
                              {"height", o.height},
                              {"spectral_attenuation", o.spectral_attenuation},
                              {"rssi_attenuation_db", o.rssi_attenuation_db}});
  return j;
}

RoomModel room_from_json(const Json& doc, const std::string& path) {
  json_reject_unknown(doc, {"preset", "extent", "panels", "access_points", "occluders"}, path);
  const auto ext_json = doc.find("extent");
  Extent extent{7.0, 7.0};
  if (ext_json != doc.end()) {
    const Coordinate e = coord_from(*ext_json, path + ".extent");
    extent = {e.x, e.y};
  }
  RoomModel room;
  if (doc.contains("preset")) {
    const auto preset = json_get<std::string>(doc, "preset", path);
    if (preset != "default") throw ConfigError("field '" + path + ".preset': unknown preset '" + preset + "'");
    if (doc.contains("panels") || doc.contains("access_points"))
      throw ConfigError("field '" + path + "': a preset cannot be combined with explicit panels or access points");
    room = default_room(extent);
  } else {
    room.extent = extent;
    const Json& panels = array_field(doc, "panels", path);
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const std::string p = path + ".panels[" + std::to_string(i) + "]";
      json_reject_unknown(panels[i], {"position", "height", "emission", "power"}, p);
      Panel panel;
      panel.position = coord_from(panels[i].value("position", Json()), p + ".position");
      panel.height = json_get<double>(panels[i], "height", p);
      panel.emission = weights_from(panels[i].value("emission", Json()), p + ".emission");
      panel.power = json_get<double>(panels[i], "power", p);
      room.panels.push_back(panel);
    }
    const Json& aps = array_field(doc, "access_points", path);
    for (std::size_t i = 0; i < aps.size(); ++i) {
      const std::string p = path + ".access_points[" + std::to_string(i) + "]";
      json_reject_unknown(aps[i], {"position", "tx_power_dbm", "path_loss_exponent"}, p);
      room.access_points.push_back({coord_from(aps[i].value("position", Json()), p + ".position"),
                                    json_get<double>(aps[i], "tx_power_dbm", p),
                                    json_get<double>(aps[i], "path_loss_exponent", p)});
    }
  }
  const Json& occ = array_field(doc, "occluders", path);
  for (std::size_t i = 0; i < occ.size(); ++i) {
    const std::string p = path + ".occluders[" + std::to_string(i) + "]";
    json_reject_unknown(occ[i], {"min", "max", "height", "spectral_attenuation", "rssi_attenuation_db"}, p);
    Occluder o;
    o.min = coord_from(occ[i].value("min", Json()), p + ".min");
    o.max = coord_from(occ[i].value("max", Json()), p + ".max");
    o.height = json_get<double>(occ[i], "height", p);
    o.spectral_attenuation = weights_from(occ[i].value("spectral_attenuation", Json()), p + ".spectral_attenuation");
    o.rssi_attenuation_db = json_get<double>(occ[i], "rssi_attenuation_db", p);
    room.occluders.push_back(o);
  }
  try {
    validate(room);
  } catch (const ContractViolation& e) {
    throw ConfigError("field '" + path + "': " + e.what());
  }
  return room;
}

WorldConfig world_config_from_json(const Json& doc, const WorldConfig& base, const std::string& path) {
  const auto at = [&](const char* key) { return path.empty() ? std::string(key) : path + "." + key; };
  json_reject_unknown(doc, {"room", "noise", "grid_spacing", "samples_per_point", "modalities", "clutter"}, path);
  WorldConfig cfg = base;
  if (doc.contains("room")) cfg.room = room_from_json(doc["room"], at("room"));
  if (doc.contains("noise")) {
    const Json& n = doc["noise"];
    json_reject_unknown(n, {"spectral_relative", "rssi_db"}, at("noise"));
    cfg.noise.spectral_relative = json_get_or(n, "spectral_relative", cfg.noise.spectral_relative, at("noise"));
    cfg.noise.rssi_db = json_get_or(n, "rssi_db", cfg.noise.rssi_db, at("noise"));
    if (!(cfg.noise.spectral_relative >= 0.0) || !(cfg.noise.rssi_db >= 0.0))
      throw ConfigError("field '" + at("noise") + "': standard deviations must be >= 0");
  }
  cfg.grid_spacing = json_get_or(doc, "grid_spacing", cfg.grid_spacing, path);
  if (!(cfg.grid_spacing > 0.0)) throw ConfigError("field '" + at("grid_spacing") + "': must be positive");
  cfg.samples_per_point = json_get_or(doc, "samples_per_point", cfg.samples_per_point, path);
  if (cfg.samples_per_point == 0) throw ConfigError("field '" + at("samples_per_point") + "': must be >= 1");
  if (doc.contains("modalities")) {
    cfg.modalities.clear();
    for (const auto& m : json_get<std::vector<std::string>>(doc, "modalities", path)) {
      try {
        cfg.modalities.push_back(parse_modality(m));
      } catch (const Error&) {
        throw ConfigError("field '" + at("modalities") + "': unknown modality '" + m + "'");
      }
    }
    if (cfg.modalities.empty()) throw ConfigError("field '" + at("modalities") + "': must not be empty");
  }
  if (doc.contains("clutter")) {
    const Json& c = doc["clutter"];
    json_reject_unknown(c, {"n_occluders", "seed"}, at("clutter"));
    cfg.clutter.n_occluders = json_get_or(c, "n_occluders", cfg.clutter.n_occluders, at("clutter"));
    cfg.clutter.seed = json_get_or(c, "seed", cfg.clutter.seed, at("clutter"));
  }
  return cfg;
}

Json to_json(const WorldConfig& cfg) {
  Json j;
  j["room"] = to_json(cfg.room);
  j["noise"] = {{"spectral_relative", cfg.noise.spectral_relative}, {"rssi_db", cfg.noise.rssi_db}};
  j["grid_spacing"] = cfg.grid_spacing;
  j["samples_per_point"] = cfg.samples_per_point;
  j["modalities"] = Json::array();
  for (Modality m : cfg.modalities) j["modalities"].push_back(std::string(to_string(m)));
  j["clutter"] = {{"n_occluders", cfg.clutter.n_occluders}, {"seed", cfg.clutter.seed}};
  return j;
}

}  // namespace ligen
