// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "transrad/errors.hpp"

namespace transrad {

// Minimal strict TOML subset: [sections], key = value, strings, numbers,
// booleans and (nested) arrays, with # comments. Line numbers are kept for
// error reporting. No TOML library ships with the toolchain, and the config
// surface is small enough that a strict subset beats a lenient dependency.
struct TomlValue {
  enum class Type { String, Number, Boolean, Array };
  Type type = Type::String;
  std::string str{};
  double num = 0.0;
  bool boolean = false;
  std::vector<TomlValue> array{};
  int line = 0;

  bool is_string() const { return type == Type::String; }
  bool is_number() const { return type == Type::Number; }
  bool is_array() const { return type == Type::Array; }

  const std::string& as_string() const {
    if (type != Type::String)
      throw ConfigError("line " + std::to_string(line) + ": expected a string");
    return str;
  }
  double as_number() const {
    if (type != Type::Number)
      throw ConfigError("line " + std::to_string(line) + ": expected a number");
    return num;
  }
  bool as_bool() const {
    if (type != Type::Boolean)
      throw ConfigError("line " + std::to_string(line) + ": expected a boolean");
    return boolean;
  }
  const std::vector<TomlValue>& as_array() const {
    if (type != Type::Array)
      throw ConfigError("line " + std::to_string(line) + ": expected an array");
    return array;
  }
};

struct TomlSection {
  std::map<std::string, TomlValue> values;
  int line = 0;
};

struct TomlTable {
  std::map<std::string, TomlSection> sections;

  bool has(const std::string& section) const { return sections.count(section) != 0; }
  const TomlSection& at(const std::string& section) const {
    auto it = sections.find(section);
    if (it == sections.end()) throw ConfigError("missing [" + section + "] section");
    return it->second;
  }
};

namespace detail_toml {

inline void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline TomlValue parse_value(const std::string& s, std::size_t& i, int line);

inline TomlValue parse_array(const std::string& s, std::size_t& i, int line) {
  TomlValue v;
  v.type = TomlValue::Type::Array;
  v.line = line;
  ++i;  // consume '['
  skip_ws(s, i);
  if (i < s.size() && s[i] == ']') {
    ++i;
    return v;
  }
  for (;;) {
    skip_ws(s, i);
    v.array.push_back(parse_value(s, i, line));
    skip_ws(s, i);
    if (i >= s.size()) throw ConfigError("line " + std::to_string(line) + ": unterminated array");
    if (s[i] == ',') {
      ++i;
      continue;
    }
    if (s[i] == ']') {
      ++i;
      return v;
    }
    throw ConfigError("line " + std::to_string(line) + ": expected ',' or ']' in array");
  }
}

inline TomlValue parse_value(const std::string& s, std::size_t& i, int line) {
  skip_ws(s, i);
  if (i >= s.size()) throw ConfigError("line " + std::to_string(line) + ": missing value");
  TomlValue v;
  v.line = line;
  if (s[i] == '"') {
    v.type = TomlValue::Type::String;
    ++i;
    while (i < s.size() && s[i] != '"') v.str.push_back(s[i++]);
    if (i >= s.size()) throw ConfigError("line " + std::to_string(line) + ": unterminated string");
    ++i;
    return v;
  }
  if (s[i] == '[') return parse_array(s, i, line);
  // bare token: boolean or number
  std::size_t start = i;
  while (i < s.size() && s[i] != ',' && s[i] != ']' && s[i] != '#' && s[i] != ' ' && s[i] != '\t')
    ++i;
  const std::string tok = s.substr(start, i - start);
  if (tok == "true" || tok == "false") {
    v.type = TomlValue::Type::Boolean;
    v.boolean = tok == "true";
    return v;
  }
  char* end = nullptr;
  v.num = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    throw ConfigError("line " + std::to_string(line) + ": cannot parse value '" + tok + "'");
  v.type = TomlValue::Type::Number;
  return v;
}

}  // namespace detail_toml

inline TomlTable parse_toml(const std::string& text) {
  TomlTable table;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    // strip comments outside quotes
    bool in_quote = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_quote = !in_quote;
      if (line[i] == '#' && !in_quote) {
        line.erase(i);
        break;
      }
    }
    std::size_t i = 0;
    detail_toml::skip_ws(line, i);
    if (i >= line.size() || line[i] == '\r') continue;

    if (line[i] == '[') {
      const std::size_t close = line.find(']', i);
      if (close == std::string::npos)
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      current = line.substr(i + 1, close - i - 1);
      if (current.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      if (table.sections.count(current))
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate section [" + current +
                          "]");
      table.sections[current].line = line_no;
      i = close + 1;
      detail_toml::skip_ws(line, i);
      if (i < line.size() && line[i] != '\r')
        throw ConfigError("line " + std::to_string(line_no) + ": trailing text after section");
      continue;
    }

    const std::size_t eq = line.find('=', i);
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key = line.substr(i, eq - i);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (current.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any [section]");

    std::size_t vi = eq + 1;
    TomlValue value = detail_toml::parse_value(line, vi, line_no);
    detail_toml::skip_ws(line, vi);
    if (vi < line.size() && line[vi] != '\r')
      throw ConfigError("line " + std::to_string(line_no) + ": trailing text after value");

    auto& section = table.sections[current];
    if (section.values.count(key))
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    section.values[key] = std::move(value);
  }
  return table;
}

}  // namespace transrad
