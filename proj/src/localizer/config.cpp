#include "nullcause/localizer/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace nullcause::localizer {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

long long parse_positive(const std::string& key, const std::string& value) {
  if (value.empty()) throw ConfigError(key + ": empty value");
  long long out = 0;
  for (char c : value) {
    if (c < '0' || c > '9')
      throw ConfigError(key + ": '" + value + "' is not a positive integer");
    if (out > (1LL << 60)) throw ConfigError(key + ": value out of range");
    out = out * 10 + (c - '0');
  }
  if (out <= 0) throw ConfigError(key + ": value must be positive");
  return out;
}

}  // namespace

Config parse_config(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "step_limit") {
      cfg.step_limit = parse_positive(key, value);
    } else if (key == "depth_limit") {
      cfg.depth_limit = parse_positive(key, value);
    } else if (key == "top") {
      cfg.top = static_cast<int>(parse_positive(key, value));
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    }
  }
  return cfg;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) return Config{};
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ConfigError(path + ": read failed");
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace nullcause::localizer
