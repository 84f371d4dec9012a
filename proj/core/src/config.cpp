#include "tvlab/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tvlab/errors.hpp"

namespace tvlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  char prev = 0;
  for (char c : k) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '.';
    if (!ok || (c == '.' && prev == '.')) return false;
    prev = c;
  }
  return true;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("expected a number, got an empty value");
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(x)) {
    throw ConfigError("expected a finite number, got '" + t + "'");
  }
  return x;
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  c.source_ = source;
  std::stringstream ss(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(ss, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    auto where = [&] { return source + ":" + std::to_string(lineno) + ": "; };
    if (eq == std::string::npos) throw ConfigError(where() + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(where() + "invalid key '" + key + "'");
    if (value.empty()) throw ConfigError(where() + "empty value for '" + key + "'");
    if (c.entries_.count(key)) {
      throw ConfigError(where() + "duplicate key '" + key + "' (first on line " +
                        std::to_string(c.entries_[key].line) + ")");
    }
    c.entries_[key] = Entry{value, lineno};
    c.order_.push_back(key);
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

int Config::line(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

void Config::fail(const std::string& key, const std::string& msg) const {
  const int ln = line(key);
  std::string where = source_;
  if (ln > 0) where += ":" + std::to_string(ln);
  throw ConfigError(where + ": " + key + ": " + msg);
}

std::string Config::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(source_ + ": missing required key '" + key + "'");
  return it->second.value;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    return parse_number(v);
  } catch (const ConfigError& e) {
    fail(key, e.what());
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::optional<double> Config::get_optional(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

long Config::get_int(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const double x = get_double(key);
  if (x != std::floor(x) || std::abs(x) > 9.0e15) fail(key, "expected an integer");
  return static_cast<long>(x);
}

std::vector<double> Config::get_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(get_string(key))) {
    try {
      out.push_back(parse_number(item));
    } catch (const ConfigError& e) {
      fail(key, e.what());
    }
  }
  return out;
}

std::vector<std::string> Config::get_string_list(const std::string& key) const {
  auto items = split_list(get_string(key));
  for (const auto& s : items) {
    if (s.empty()) fail(key, "empty list item");
  }
  return items;
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ConfigError("invalid key '" + key + "'");
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    entries_[key] = Entry{value, 0};
    order_.push_back(key);
  } else {
    it->second.value = value;
  }
}

void Config::erase_prefix(const std::string& prefix) {
  std::vector<std::string> kept;
  for (const auto& k : order_) {
    if (k.rfind(prefix, 0) == 0) {
      entries_.erase(k);
    } else {
      kept.push_back(k);
    }
  }
  order_ = std::move(kept);
}

std::string Config::dump() const {
  std::string out;
  for (const auto& k : order_) out += k + " = " + entries_.at(k).value + "\n";
  return out;
}

}  // namespace tvlab
