#include "ligen/cli/manifest.hpp"

#include "ligen/common/digest.hpp"
#include "ligen/common/errors.hpp"
#include "ligen/locmodel/persistence.hpp"

namespace ligen::cli {

Json to_json(const RunManifest& m) {
  Json j;
  j["tool_version"] = m.tool_version;
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["config"] = m.config;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["stages"] = Json::array();
  for (const auto& s : m.stages) j["stages"].push_back({{"name", s.name}, {"seconds", s.seconds}});
  return j;
}

RunManifest manifest_from_json(const Json& doc) {
  json_reject_unknown(doc, {"tool_version", "command", "seed", "config", "inputs", "outputs", "stages"}, "");
  RunManifest m;
  m.tool_version = json_get<std::string>(doc, "tool_version", "");
  m.command = json_get<std::string>(doc, "command", "");
  m.seed = json_get<std::uint64_t>(doc, "seed", "");
  m.config = json_get<Json>(doc, "config", "");
  m.inputs = json_get_or(doc, "inputs", m.inputs, "");
  m.outputs = json_get_or(doc, "outputs", m.outputs, "");
  if (doc.contains("stages"))
    for (const auto& s : json_get<std::vector<Json>>(doc, "stages", ""))
      m.stages.push_back({json_get<std::string>(s, "name", "stages"), json_get<double>(s, "seconds", "stages")});
  return m;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& dir) {
  write_text_file(dir / "manifest.json", to_json(m).dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_json_file(path.string()));
}

void verify_inputs(const RunManifest& m) {
  for (const auto& [path, digest] : m.inputs) {
    if (!std::filesystem::exists(path)) throw ConfigError("manifest input '" + path + "' does not exist");
    if (sha256_file(path) != digest) throw ConfigError("manifest input '" + path + "' has changed since the run");
  }
}

}  // namespace ligen::cli
