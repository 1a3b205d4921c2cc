#pragma once

// Minimal TOML subset reader, enough for the registry file format: tables,
// arrays of tables, bare keys, basic strings, integers, floats and booleans.
// Anything fancier (inline tables, multiline strings, dates) is rejected.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "domainscope/errors.hpp"
#include "domainscope/text.hpp"

namespace domainscope {

namespace toml_detail {

inline std::string parse_basic_string(std::string_view s, size_t& pos,
                                      int line) {
  // s[pos] == '"'
  std::string out;
  ++pos;
  while (pos < s.size() && s[pos] != '"') {
    char c = s[pos];
    if (c == '\\') {
      ++pos;
      if (pos >= s.size())
        throw ParseError("line " + std::to_string(line) + ": bad escape");
      switch (s[pos]) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default:
          throw ParseError("line " + std::to_string(line) +
                           ": unsupported escape \\" + s[pos]);
      }
    } else {
      out += c;
    }
    ++pos;
  }
  if (pos >= s.size())
    throw ParseError("line " + std::to_string(line) + ": unterminated string");
  ++pos;  // closing quote
  return out;
}

inline nlohmann::json parse_value(std::string_view raw, int line);

inline nlohmann::json parse_array(std::string_view raw, int line) {
  nlohmann::json arr = nlohmann::json::array();
  std::string_view body = trim(raw.substr(1, raw.size() - 2));
  size_t pos = 0;
  while (pos < body.size()) {
    while (pos < body.size() && (body[pos] == ' ' || body[pos] == '\t')) ++pos;
    if (pos >= body.size()) break;
    if (body[pos] == '"') {
      arr.push_back(parse_basic_string(body, pos, line));
    } else {
      size_t end = body.find(',', pos);
      if (end == std::string_view::npos) end = body.size();
      arr.push_back(parse_value(trim(body.substr(pos, end - pos)), line));
      pos = end;
    }
    while (pos < body.size() && (body[pos] == ' ' || body[pos] == '\t')) ++pos;
    if (pos < body.size()) {
      if (body[pos] != ',')
        throw ParseError("line " + std::to_string(line) + ": expected ','");
      ++pos;
    }
  }
  return arr;
}

inline nlohmann::json parse_value(std::string_view raw, int line) {
  if (raw.empty())
    throw ParseError("line " + std::to_string(line) + ": empty value");
  if (raw[0] == '"') {
    size_t pos = 0;
    std::string s = parse_basic_string(raw, pos, line);
    if (!trim(raw.substr(pos)).empty())
      throw ParseError("line " + std::to_string(line) +
                       ": trailing characters after string");
    return s;
  }
  if (raw[0] == '[') {
    if (raw.back() != ']')
      throw ParseError("line " + std::to_string(line) + ": unclosed array");
    return parse_array(raw, line);
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  std::string num(raw);
  try {
    size_t used = 0;
    if (num.find('.') == std::string::npos &&
        num.find('e') == std::string::npos &&
        num.find('E') == std::string::npos) {
      long long v = std::stoll(num, &used);
      if (used == num.size()) return v;
    } else {
      double v = std::stod(num, &used);
      if (used == num.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw ParseError("line " + std::to_string(line) + ": bad value '" +
                   std::string(raw) + "'");
}

inline bool valid_bare_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
          (c >= '0' && c <= '9') || c == '_' || c == '-'))
      return false;
  return true;
}

// Strips a comment that is not inside a basic string.
inline std::string_view strip_comment(std::string_view s) {
  bool in_str = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_str) {
      if (c == '\\') ++i;
      else if (c == '"') in_str = false;
    } else if (c == '"') {
      in_str = true;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  return s;
}

}  // namespace toml_detail

/// Parses the TOML subset into a JSON document. Arrays of tables become JSON
/// arrays of objects; dotted headers nest.
inline nlohmann::json parse_toml(std::string_view text) {
  using nlohmann::json;
  json root = json::object();
  json* current = &root;
  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t eol = text.find('\n', start);
    std::string_view line = text.substr(
        start, eol == std::string_view::npos ? text.size() - start
                                             : eol - start);
    start = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    line = trim(toml_detail::strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      bool array_table = line.size() > 1 && line[1] == '[';
      std::string_view inner = line;
      inner.remove_prefix(array_table ? 2 : 1);
      size_t close = inner.find(array_table ? "]]" : "]");
      if (close == std::string_view::npos ||
          !trim(inner.substr(close + (array_table ? 2 : 1))).empty())
        throw ParseError("line " + std::to_string(line_no) +
                         ": malformed table header");
      inner = trim(inner.substr(0, close));
      json* node = &root;
      auto keys = split(inner, '.');
      for (size_t i = 0; i < keys.size(); ++i) {
        std::string key{trim(keys[i])};
        if (!toml_detail::valid_bare_key(key))
          throw ParseError("line " + std::to_string(line_no) +
                           ": bad table key '" + key + "'");
        bool last = i + 1 == keys.size();
        if (last && array_table) {
          if (!node->contains(key)) (*node)[key] = json::array();
          (*node)[key].push_back(json::object());
          node = &(*node)[key].back();
        } else {
          if (!node->contains(key)) (*node)[key] = json::object();
          json& next = (*node)[key];
          node = next.is_array() ? &next.back() : &next;
        }
      }
      current = node;
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected key = value");
    std::string key{trim(line.substr(0, eq))};
    if (!toml_detail::valid_bare_key(key))
      throw ParseError("line " + std::to_string(line_no) + ": bad key '" +
                       key + "'");
    (*current)[key] =
        toml_detail::parse_value(trim(line.substr(eq + 1)), line_no);
  }
  return root;
}

}  // namespace domainscope
