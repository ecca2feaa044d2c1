#pragma once

// Text configuration: flat `key = value` lines, optional [section] headers
// (for readability only; keys are global), `#` comments. Keys use the same
// spelling as the command-line flags; '-' and '_' are interchangeable.

#include <string>
#include <string_view>
#include <vector>

#include "supra/model.hpp"

namespace supra {

struct Setting {
  std::string key;  // normalised: lower case, '_' replaced by '-'
  std::string value;
  int line = 0;     // 1-based source line, 0 for command-line values
};

std::string normalize_key(std::string_view key);

/// Splits a config text into settings. Throws ConfigError on malformed lines.
std::vector<Setting> parse_settings(std::string_view text);

/// Applies one setting to cfg. Returns false when the key is not a chain
/// parameter (so the caller may treat it as a run parameter); throws
/// ConfigError when the key matches but the value does not parse.
bool apply_setting(ChainConfig& cfg, const Setting& setting);

/// Canonical text form of cfg, grouped in sections; parse_settings +
/// apply_setting on it reproduces cfg exactly.
std::string dump_config(const ChainConfig& cfg);

/// Keys understood by apply_setting, in canonical order.
const std::vector<std::string>& chain_keys();

double parse_double(std::string_view field, std::string_view text);
int parse_int(std::string_view field, std::string_view text);
bool parse_bool(std::string_view field, std::string_view text);
/// Comma-separated list, or `start:stop:step` (inclusive of stop within
/// half a step).
std::vector<double> parse_double_list(std::string_view field, std::string_view text);
std::vector<int> parse_int_list(std::string_view field, std::string_view text);

/// Shortest text that reads back to the same double.
std::string format_shortest(double value);
/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_fixed17(double value);

}  // namespace supra
