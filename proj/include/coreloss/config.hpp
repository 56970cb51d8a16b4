#pragma once

#include <map>
#include <string>
#include <vector>

namespace coreloss {

// Flat key/value configuration parsed from an INI/TOML-style file:
//   [section]
//   key = value   # comment
// Keys are stored namespaced as "section.key". Values keep their raw text;
// typed getters parse on access and name the key in any error. Later
// assignments win, so flag overrides are a plain set() on top.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin = "<inline>");

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  double require_double(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Comma-separated doubles ("1, 2.5e-6, 4").
  std::vector<double> get_double_list(const std::string& key) const;

  std::vector<std::string> keys() const;  // sorted

  // Throws ValidationError naming the first key not covered by `known`.
  // Entries ending in ".*" cover a whole section.
  void reject_unknown(const std::vector<std::string>& known) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace coreloss
