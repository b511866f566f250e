#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "beltrami/xsection.hpp"

namespace beltrami::cli {

using Json = nlohmann::json;

std::string read_text_file(const std::filesystem::path& path);

// Throws ParseError carrying the byte offset of the failure.
Json parse_json(std::string_view text, const std::string& what);

// Merges a config file and command-line overrides over the defaults. Every
// key of the file must exist in `defaults` with a compatible type; a null
// default accepts a string.
Json resolve_config(const Json& defaults, const Json& file_config, const Json& overrides);

// {"metric": ..., "outer": [[r, z], ...], "holes": [[[r, z], ...], ...]}
CrossSection cross_section_from_json(const Json& doc);
Json cross_section_to_json(const CrossSection& cs);

std::string sha256_hex(std::string_view bytes);

// Reads the number of worker threads from BELTRAMI_THREADS (0 = hardware).
unsigned threads_from_env();

}  // namespace beltrami::cli
