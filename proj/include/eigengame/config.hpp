// Copyright 2026 The eigengame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Flat "key = value" configuration files with '#' comments and
// comma-separated lists. Every file declares schema_version.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "eigengame/errors.hpp"
#include "eigengame/hashing.hpp"
#include "eigengame/pauli.hpp"

namespace eigengame {

inline constexpr int kConfigSchemaVersion = 1;

class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in) {
    KeyValueConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
      if (!cfg.values_.emplace(key, value).second) {
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      }
    }
    const auto version = cfg.get_int("schema_version");
    if (!version) throw ConfigError("schema_version is required");
    if (*version != kConfigSchemaVersion) {
      throw ConfigError("unsupported schema_version " + std::to_string(*version));
    }
    return cfg;
  }

  static KeyValueConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse(in);
  }

  /// Built-in defaults only.
  static KeyValueConfig empty() {
    KeyValueConfig cfg;
    cfg.values_["schema_version"] = std::to_string(kConfigSchemaVersion);
    cfg.used_.insert("schema_version");
    return cfg;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  std::optional<std::string> get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  std::optional<double> get_double(const std::string& key) const {
    const auto s = get_string(key);
    if (!s) return std::nullopt;
    return to_double(key, *s);
  }

  std::optional<long long> get_int(const std::string& key) const {
    const auto s = get_string(key);
    if (!s) return std::nullopt;
    return to_int(key, *s);
  }

  std::optional<bool> get_bool(const std::string& key) const {
    const auto s = get_string(key);
    if (!s) return std::nullopt;
    if (*s == "true" || *s == "1" || *s == "yes") return true;
    if (*s == "false" || *s == "0" || *s == "no") return false;
    throw ConfigError(key + ": expected a boolean, got '" + *s + "'");
  }

  std::optional<std::vector<std::string>> get_list(const std::string& key) const {
    const auto s = get_string(key);
    if (!s) return std::nullopt;
    std::vector<std::string> items;
    std::stringstream in(*s);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (!item.empty()) items.push_back(item);
    }
    return items;
  }

  std::optional<std::vector<double>> get_doubles(const std::string& key) const {
    const auto items = get_list(key);
    if (!items) return std::nullopt;
    std::vector<double> out;
    for (const auto& i : *items) out.push_back(to_double(key, i));
    return out;
  }

  std::optional<std::vector<long long>> get_ints(const std::string& key) const {
    const auto items = get_list(key);
    if (!items) return std::nullopt;
    std::vector<long long> out;
    for (const auto& i : *items) out.push_back(to_int(key, i));
    return out;
  }

  /// Throws for keys never read: catches typos in config files.
  void check_all_used() const {
    for (const auto& [key, value] : values_) {
      if (!used_.count(key)) throw ConfigError("unknown key '" + key + "'");
    }
  }

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static double to_double(const std::string& key, const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(key + ": not a number: '" + s + "'");
    return v;
  }

  static long long to_int(const std::string& key, const std::string& s) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(key + ": not an integer: '" + s + "'");
    return v;
  }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

/// Canonical "key = value" echo of resolved settings; hashed into every
/// result row.
class ResolvedConfig {
 public:
  void text(const std::string& key, const std::string& value) { entries_[key] = value; }
  void number(const std::string& key, double value) { entries_[key] = format_coefficient(value); }
  void integer(const std::string& key, long long value) { entries_[key] = std::to_string(value); }
  void flag(const std::string& key, bool value) { entries_[key] = value ? "true" : "false"; }

  template <typename T>
  void list(const std::string& key, const std::vector<T>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) s += ",";
      if constexpr (std::is_floating_point_v<T>) {
        s += format_coefficient(values[i]);
      } else {
        s += std::to_string(values[i]);
      }
    }
    entries_[key] = s;
  }

  std::string echo() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
  }

  std::string hash() const { return Fnv1a().text(echo()).hex(); }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace eigengame
