#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "ligen/cli/manifest.hpp"

namespace ligen::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kDivergence = 3 };

// Runs one command from a fully resolved configuration and writes its outputs
// plus manifest.json into `out_dir`. Commands: gen, train, augment, eval,
// stability, experiment.
RunManifest execute(const std::string& command, const Json& config, std::uint64_t seed, std::size_t jobs,
                    const std::filesystem::path& out_dir, std::ostream& log);

// Command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ligen::cli
