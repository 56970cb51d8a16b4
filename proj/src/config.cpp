#include "coreloss/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "coreloss/errors.hpp"

namespace coreloss {

namespace {

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
      return false;
  return true;
}

// Value text of one line: quoted string up to the closing quote, or bare text
// cut at the first comment marker.
std::string parse_value(const std::string& raw, const std::string& where) {
  const std::string v = trimmed(raw);
  if (!v.empty() && v.front() == '"') {
    const std::size_t close = v.find('"', 1);
    if (close == std::string::npos)
      throw ValidationError("config: " + where + ": unterminated string");
    const std::string rest = trimmed(v.substr(close + 1));
    if (!rest.empty() && rest.front() != '#')
      throw ValidationError("config: " + where + ": trailing text after string");
    return v.substr(1, close - 1);
  }
  const std::size_t hash = v.find('#');
  return trimmed(hash == std::string::npos ? v : v.substr(0, hash));
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + " line " + std::to_string(line_no);
    const std::string s = trimmed(line);
    if (s.empty() || s.front() == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ValidationError("config: " + where + ": unclosed section");
      section = trimmed(s.substr(1, s.size() - 2));
      if (!valid_name(section))
        throw ValidationError("config: " + where + ": invalid section name");
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config: " + where + ": expected key = value");
    const std::string key = trimmed(s.substr(0, eq));
    if (!valid_name(key)) throw ValidationError("config: " + where + ": invalid key name");
    const std::string full = section.empty() ? key : section + "." + key;
    cfg.values_[full] = parse_value(s.substr(eq + 1), where);
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("config: missing required key '" + key + "'");
  return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? require_double(key) : fallback;
}

double Config::require_double(const std::string& key) const {
  const std::string raw = require_string(key);
  char* end = nullptr;
  const double v = std::strtod(raw.c_str(), &end);
  if (raw.empty() || end != raw.c_str() + raw.size())
    throw ValidationError("config: key '" + key + "' is not a number: '" + raw + "'");
  return v;
}

int Config::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const std::string raw = require_string(key);
  char* end = nullptr;
  const long v = std::strtol(raw.c_str(), &end, 10);
  if (raw.empty() || end != raw.c_str() + raw.size())
    throw ValidationError("config: key '" + key + "' is not an integer: '" + raw + "'");
  return static_cast<int>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string raw = require_string(key);
  if (raw == "true") return true;
  if (raw == "false") return false;
  throw ValidationError("config: key '" + key + "' is not a boolean: '" + raw + "'");
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  const std::string raw = require_string(key);
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const std::string s = trimmed(cell);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
      throw ValidationError("config: key '" + key + "' has a non-numeric entry: '" + s + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("config: key '" + key + "' is an empty list");
  return out;
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  out.reserve(values_.size());
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

void Config::reject_unknown(const std::vector<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    bool ok = false;
    for (const std::string& pat : known) {
      if (pat.size() > 2 && pat.compare(pat.size() - 2, 2, ".*") == 0) {
        const std::string prefix = pat.substr(0, pat.size() - 1);  // keep the dot
        if (key.compare(0, prefix.size(), prefix) == 0) ok = true;
      } else if (key == pat) {
        ok = true;
      }
      if (ok) break;
    }
    if (!ok) throw ValidationError("config: unknown key '" + key + "'");
  }
}

}  // namespace coreloss
