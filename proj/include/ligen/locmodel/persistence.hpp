#pragma once

#include <filesystem>
#include <string>

#include "ligen/common/json_fields.hpp"
#include "ligen/locmodel/localizer.hpp"

namespace ligen {

inline constexpr int kModelFormatVersion = 1;

Json net_to_json(const MlpNet& net);
MlpNet net_from_json(const Json& doc, const std::string& path);
Json norm_to_json(const NormStats& norm);
NormStats norm_from_json(const Json& doc, const std::string& path);

// {version, kind: "localizer", modality, config, norm, net, loss_curve, optimizer_steps}
Json localizer_to_json(const TrainedLocalizer& model);
TrainedLocalizer localizer_from_json(const Json& doc);

void save_localizer(const TrainedLocalizer& model, const std::filesystem::path& path);
TrainedLocalizer load_localizer(const std::filesystem::path& path);

// SHA-256 over the serialized network and normalization statistics.
std::string model_identity(const TrainedLocalizer& model);

// Writes text to a file, throwing Error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ligen
