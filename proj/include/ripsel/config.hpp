#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ripsel/types.hpp"

namespace ripsel {

// Plain-text section/key/value configuration:
//
//   # comment
//   [data]
//   train = data/train.csv
//   levels = 0.10 0.25 0.30
//
// Keys before the first section header live in the "" section. A repeated key
// keeps the last value. Lookups take the section and key separately; typed
// getters fall back to a default when the key is absent and fail loudly when
// the value does not parse.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key,
           const std::string& value);

  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  std::string require(const std::string& section, const std::string& key) const;

  Real get_real(const std::string& section, const std::string& key,
                Real fallback) const;
  long get_int(const std::string& section, const std::string& key,
               long fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  // Whitespace- or comma-separated list of numbers.
  std::vector<Real> get_reals(const std::string& section, const std::string& key,
                              const std::vector<Real>& fallback) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace ripsel
