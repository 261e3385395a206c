#pragma once

#include <filesystem>

#include "ligen/augment/gan.hpp"
#include "ligen/common/json_fields.hpp"

namespace ligen {

// Same versioned layout as localizer models, with kind pointgan | freegan.
Json bundle_to_json(const GanBundle& bundle);
GanBundle bundle_from_json(const Json& doc);

void save_bundle(const GanBundle& bundle, const std::filesystem::path& path);
GanBundle load_bundle(const std::filesystem::path& path);

}  // namespace ligen
