// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Content-addressed result cache: one JSON file per config hash, integrity
// checked with a payload checksum. Corrupt entries are ignored and
// recomputed. Races are benign: writers target distinct file names and the
// payload for a given key is deterministic.
#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>

namespace lelong::cache {

std::string sha256_hex(std::string_view data);

// LELONG_CACHE_DIR when set, otherwise empty (caching disabled)
std::string default_dir();

std::optional<nlohmann::json> lookup(const std::string& dir, const std::string& config_hash);

void store(const std::string& dir, const std::string& config_hash,
           const nlohmann::json& outputs);

}  // namespace lelong::cache
