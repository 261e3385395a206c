#pragma once

#include <filesystem>
#include <string>

#include "ligen/common/json_fields.hpp"
#include "ligen/eval/experiment.hpp"

namespace ligen {

// One row per run. Timing columns are left out so that reruns are byte-identical.
std::string results_csv(const ExperimentReport& report);

// Quartiles per cell, the selected localizer configs, and per-method deltas
// of every environment against the first one.
Json summary_json(const ExperimentReport& report);

Json to_json(const QuartileSummary& q);

// Writes results.csv and summary.json into `dir`; returns the two paths.
std::pair<std::filesystem::path, std::filesystem::path> write_report(const ExperimentReport& report,
                                                                     const std::filesystem::path& dir);

}  // namespace ligen
