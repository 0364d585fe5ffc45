#include "rgshock/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace rgs {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KvConfig KvConfig::parse_string(const std::string& text) {
  KvConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("unterminated section header", lineno);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", lineno);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno);
    cfg.set(section.empty() ? key : section + "." + key, val);
  }
  return cfg;
}

KvConfig KvConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path, 0);
  std::ostringstream body;
  body << in.rdbuf();
  return parse_string(body.str());
}

bool KvConfig::has(const std::string& key) const {
  for (const auto& kv : items)
    if (kv.first == key) return true;
  return false;
}

std::string KvConfig::get(const std::string& key, const std::string& fallback) const {
  std::string out = fallback;
  for (const auto& kv : items)
    if (kv.first == key) out = kv.second;  // last assignment wins
  return out;
}

double KvConfig::get_num(const std::string& key, double fallback) const {
  const std::string s = get(key, "");
  if (s.empty()) return fallback;
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("config key " + key + ": bad number '" + s + "'");
  return v;
}

int KvConfig::get_int(const std::string& key, int fallback) const {
  const std::string s = get(key, "");
  if (s.empty()) return fallback;
  std::size_t pos = 0;
  const int v = std::stoi(s, &pos);
  if (pos != s.size()) throw std::runtime_error("config key " + key + ": bad integer '" + s + "'");
  return v;
}

void KvConfig::set(const std::string& key, const std::string& value) {
  items.emplace_back(key, value);
}

std::string KvConfig::to_string() const {
  // Resolve overrides, then emit sorted by (section, key).
  std::map<std::string, std::map<std::string, std::string>> tree;
  for (const auto& kv : items) {
    const auto dot = kv.first.find('.');
    const std::string sec = dot == std::string::npos ? "" : kv.first.substr(0, dot);
    const std::string key = dot == std::string::npos ? kv.first : kv.first.substr(dot + 1);
    tree[sec][key] = kv.second;
  }
  std::ostringstream out;
  for (const auto& sec : tree) {
    if (!sec.first.empty()) out << "[" << sec.first << "]\n";
    for (const auto& kv : sec.second) out << kv.first << " = " << kv.second << "\n";
  }
  return out.str();
}

std::string Csv::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "");
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace rgs
