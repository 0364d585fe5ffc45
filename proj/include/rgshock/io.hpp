#pragma once
// Report plumbing: fixed-format floating-point text (17 significant digits,
// '.' decimal, locale-independent), CSV assembly, a key = value config format
// with [section] headers, and JSON helpers on the vendored library.

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace rgs {

using Json = nlohmann::ordered_json;

// %.17g rendering, locale-independent.
std::string fmt_g17(double v);

struct ConfigError : std::runtime_error {
  int line;
  ConfigError(const std::string& msg, int line_)
      : std::runtime_error(msg), line(line_) {}
};

// Ordered key = value store; keys are "section.key" once a [section] header
// has been seen.  Later assignments override earlier ones (order preserved
// for the canonical echo).
struct KvConfig {
  std::vector<std::pair<std::string, std::string>> items;

  static KvConfig parse_string(const std::string& text);
  static KvConfig parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_num(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  void set(const std::string& key, const std::string& value);

  // Canonical serialization: sorted by section then key, one key = value
  // per line under its [section] header.
  std::string to_string() const;
};

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string to_string() const;  // UTF-8, LF line endings
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace rgs
