#pragma once

// Flat "key = value" configuration files.
//
//   # comment (also allowed after a value)
//   grid.cells = 256
//   coef.gamma = 1, 0.5        # lists are comma-separated
//
// Keys are dotted paths of [A-Za-z0-9_] segments; each key may appear
// once. Errors carry "<source>:<line>: " context.

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tvlab {

class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  /// Keys in file order.
  const std::vector<std::string>& keys() const { return order_; }
  const std::string& source() const { return source_; }
  /// Line number of a key, 0 if it was set programmatically.
  int line(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::optional<double> get_optional(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  /// Inserts or replaces a value (used by sweeps).
  void set(const std::string& key, const std::string& value);
  /// Removes every key starting with `prefix`.
  void erase_prefix(const std::string& prefix);

  /// Canonical text form; parse(dump()) reproduces the same entries.
  std::string dump() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;
};

/// Parses a number strictly (whole string, finite). Throws ConfigError.
double parse_number(const std::string& text);

/// Shortest text that round-trips the double exactly.
std::string format_number(double x);

}  // namespace tvlab
