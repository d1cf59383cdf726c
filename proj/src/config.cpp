#include "ripsel/config.hpp"

#include <fstream>
#include <sstream>

#include "ripsel/errors.hpp"

namespace ripsel {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    cfg.sections_[section][key] = trim(t.substr(eq + 1));
  }
  return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
  sections_[section][key] = value;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return fallback;
  const auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

std::string Config::require(const std::string& section,
                            const std::string& key) const {
  if (!has(section, key))
    throw ConfigError("config is missing [" + section + "] " + key);
  return get(section, key, "");
}

Real Config::get_real(const std::string& section, const std::string& key,
                      Real fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get(section, key, "");
  std::size_t used = 0;
  Real out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size())
    throw ConfigError("config [" + section + "] " + key +
                      ": not a number: " + v);
  return out;
}

long Config::get_int(const std::string& section, const std::string& key,
                     long fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get(section, key, "");
  std::size_t used = 0;
  long out = 0;
  try {
    out = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size())
    throw ConfigError("config [" + section + "] " + key +
                      ": not an integer: " + v);
  return out;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get(section, key, "");
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size())
    throw ConfigError("config [" + section + "] " + key +
                      ": not an unsigned integer: " + v);
  return out;
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get(section, key, "");
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError("config [" + section + "] " + key + ": not a boolean: " + v);
}

std::vector<Real> Config::get_reals(const std::string& section,
                                    const std::string& key,
                                    const std::vector<Real>& fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = get(section, key, "");
  for (char& c : v)
    if (c == ',') c = ' ';
  std::istringstream in(v);
  std::vector<Real> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    Real x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size())
      throw ConfigError("config [" + section + "] " + key +
                        ": not a number list entry: " + tok);
    out.push_back(x);
  }
  if (out.empty())
    throw ConfigError("config [" + section + "] " + key + ": empty list");
  return out;
}

}  // namespace ripsel
