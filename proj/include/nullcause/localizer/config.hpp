#pragma once

#include <stdexcept>
#include <string>

namespace nullcause::localizer {

// Tunables read from `nullcause.toml` in the project directory. Every field
// has a workable default; the file is optional.
struct Config {
  long long step_limit = 1000000;  // interpreter steps per test
  long long depth_limit = 100000;  // resolution frames per deduction path
  int top = 10;                    // candidates reported
};

// A config file that exists but cannot be used: unreadable, an unknown key,
// or a value that is not a positive integer.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// `key = value` lines; '#' starts a comment; blank lines ignored. Keys:
// step_limit, depth_limit, top. A key given twice keeps the last value.
Config parse_config(const std::string& text);

// Loads `path` if it exists, else returns defaults.
Config load_config_file(const std::string& path);

}  // namespace nullcause::localizer
