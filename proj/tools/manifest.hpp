// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <map>
#include <string>

#include <json.hpp>

namespace psq::cli {

std::string sha256_file(const std::string& path);
std::string utc_timestamp();

/// Records how an output directory was produced: the command, every
/// parameter, input file digests, tool version, and wall-clock timestamp.
/// Written as `manifest.json`, exactly one per index/sweep output directory.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const nlohmann::json& parameters,
                    const std::map<std::string, std::string>& input_paths);

} // namespace psq::cli
