#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ligen/common/json_fields.hpp"

namespace ligen::cli {

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

// Everything needed to repeat a command: the resolved configuration, the
// master seed and the digests of every file read or written. Paths of inputs
// are stored as given on the command line; outputs are relative to the
// output directory.
struct RunManifest {
  std::string tool_version;
  std::string command;
  Json config = Json::object();
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> outputs;
  std::vector<StageTiming> stages;
};

Json to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& doc);

void write_manifest(const RunManifest& m, const std::filesystem::path& dir);
RunManifest read_manifest(const std::filesystem::path& path);

// Throws ConfigError if an input file is missing or its digest changed.
void verify_inputs(const RunManifest& m);

}  // namespace ligen::cli
