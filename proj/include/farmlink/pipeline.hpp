#pragma once

#include <filesystem>
#include <string>

namespace farmlink {

inline constexpr const char* kVersion = "1.0.0";

/// Runs one toolkit command ("gen", "simulate", "sweep", "link",
/// "eval-power") with a JSON config, writing its output files plus a
/// manifest.json into out_dir. Returns the summary JSON written alongside.
/// Outputs are byte-identical for identical (command, config) pairs.
std::string run_command(const std::string& command, const std::string& config_json,
                        const std::filesystem::path& out_dir);

/// Re-runs the command recorded in a manifest, writing into out_dir.
std::string replay(const std::filesystem::path& manifest_path,
                   const std::filesystem::path& out_dir);

} // namespace farmlink
