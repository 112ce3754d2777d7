#pragma once

#include "wlab/model.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace wlab {

/// Flat key-value configuration. Keys are "section.key" as written under
/// "[section]" headers; '#' and ';' start comments.
struct Config {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
};

/// Throws ValidationError on malformed lines or repeated keys.
Config parse_config(std::string_view text);
/// Throws IoError when the file cannot be read.
Config read_config(const std::filesystem::path& path);

/// Sorted "key=value" lines, whitespace trimmed; the text that gets hashed.
std::string canonical_text(const Config& cfg);
/// Hex SHA-256 of canonical_text.
std::string config_hash(const Config& cfg);

/// Builds a Scenario. Unknown keys and unparsable values throw ValidationError
/// naming the key; invariants are left to validate_scenario.
Scenario scenario_from_config(const Config& cfg);
/// Inverse of scenario_from_config, written with section headers.
std::string scenario_to_config_text(const Scenario& s);

}  // namespace wlab
