// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 psq contributors

#pragma once

#include <json.hpp>

#include "psq/textprep.hpp"

namespace psq {

nlohmann::json tokenizer_config_to_json(const TokenizerConfig& cfg);
TokenizerConfig tokenizer_config_from_json(const nlohmann::json& j);

} // namespace psq
