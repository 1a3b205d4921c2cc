#pragma once

// Tolerant outlink extraction. Real pages are malformed; the scanner never
// throws on bad markup, only on byte streams with no recoverable text.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "domainscope/errors.hpp"
#include "domainscope/host.hpp"
#include "domainscope/url.hpp"

namespace domainscope {

struct OutlinkScan {
  struct External {
    std::string host;    // normalized registrable domain
    std::string anchor;  // first anchor text seen for this host
  };
  std::vector<External> externals;    // sorted by host
  std::vector<std::string> frontier;  // same-domain URLs, document order
};

namespace html_detail {

inline std::string decode_entities(std::string_view s) {
  static const std::map<std::string, std::string, std::less<>> entities = {
      {"amp", "&"}, {"lt", "<"},    {"gt", ">"},
      {"quot", "\""}, {"apos", "'"}, {"nbsp", " "},
  };
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 8) {
      out += '&';
      continue;
    }
    std::string_view name = s.substr(i + 1, semi - i - 1);
    if (!name.empty() && name[0] == '#') {
      int code = 0;
      bool ok = name.size() > 1;
      for (size_t j = 1; j < name.size(); ++j) {
        if (name[j] < '0' || name[j] > '9') { ok = false; break; }
        code = code * 10 + (name[j] - '0');
      }
      if (ok && code > 0 && code < 128) {
        out += static_cast<char>(code);
        i = semi;
        continue;
      }
    }
    auto it = entities.find(name);
    if (it != entities.end()) {
      out += it->second;
      i = semi;
    } else {
      out += '&';
    }
  }
  return out;
}

struct Tag {
  std::string name;
  std::map<std::string, std::string> attrs;
  bool closing = false;
};

// Parses one tag starting at '<'; pos ends after '>'. Returns nullopt for
// junk that only looks like a tag.
inline std::optional<Tag> parse_tag(std::string_view s, size_t& pos) {
  size_t i = pos + 1;
  Tag tag;
  if (i < s.size() && s[i] == '/') {
    tag.closing = true;
    ++i;
  }
  size_t name_start = i;
  while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) ||
                          s[i] == '-' || s[i] == '!'))
    ++i;
  if (i == name_start) return std::nullopt;
  tag.name = ascii_lower(s.substr(name_start, i - name_start));
  while (i < s.size() && s[i] != '>') {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size() || s[i] == '>' || s[i] == '/') {
      if (i < s.size() && s[i] == '/') ++i;
      continue;
    }
    size_t key_start = i;
    while (i < s.size() && s[i] != '=' && s[i] != '>' &&
           !std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
    std::string key = ascii_lower(s.substr(key_start, i - key_start));
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::string value;
    if (i < s.size() && s[i] == '=') {
      ++i;
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
        char quote = s[i++];
        size_t v_start = i;
        while (i < s.size() && s[i] != quote) ++i;
        value = std::string(s.substr(v_start, i - v_start));
        if (i < s.size()) ++i;
      } else {
        size_t v_start = i;
        while (i < s.size() && s[i] != '>' &&
               !std::isspace(static_cast<unsigned char>(s[i])))
          ++i;
        value = std::string(s.substr(v_start, i - v_start));
      }
    }
    if (!key.empty()) tag.attrs[key] = decode_entities(value);
  }
  pos = i < s.size() ? i + 1 : s.size();
  return tag;
}

inline void skip_until(std::string_view s, size_t& pos, std::string_view end) {
  std::string lower;  // cheap case-insensitive scan
  for (size_t i = pos; i + end.size() <= s.size(); ++i) {
    bool match = true;
    for (size_t j = 0; j < end.size(); ++j)
      if (ascii_lower(s[i + j]) != end[j]) { match = false; break; }
    if (match) {
      pos = i + end.size();
      return;
    }
  }
  (void)lower;
  pos = s.size();
}

}  // namespace html_detail

struct HtmlLink {
  std::string href;
  std::string anchor;
};

/// All anchor/area/link targets in document order, anchors with their text.
inline std::vector<HtmlLink> extract_links(std::string_view html) {
  for (size_t i = 0; i < std::min<size_t>(html.size(), 512); ++i)
    if (html[i] == '\0')
      throw DecodeError("binary content, no recoverable text");

  std::vector<HtmlLink> links;
  size_t pos = 0;
  while (pos < html.size()) {
    size_t lt = html.find('<', pos);
    if (lt == std::string_view::npos) break;
    if (html.compare(lt, 4, "<!--") == 0) {
      size_t end = html.find("-->", lt + 4);
      pos = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    pos = lt;
    auto tag = html_detail::parse_tag(html, pos);
    if (!tag) {
      pos = lt + 1;
      continue;
    }
    if (tag->closing) continue;
    if (tag->name == "script" || tag->name == "style") {
      html_detail::skip_until(html, pos, tag->name == "script" ? "</script"
                                                               : "</style");
      continue;
    }
    if (tag->name != "a" && tag->name != "area" && tag->name != "link")
      continue;
    auto it = tag->attrs.find("href");
    if (it == tag->attrs.end() || it->second.empty()) continue;
    HtmlLink link;
    link.href = it->second;
    if (tag->name == "a") {
      // anchor text: visible text up to the closing tag, nested tags skipped
      std::string text;
      size_t scan = pos;
      while (scan < html.size() && text.size() < 4096) {
        size_t next_lt = html.find('<', scan);
        if (next_lt == std::string_view::npos) {
          text += html.substr(scan);
          break;
        }
        text += html.substr(scan, next_lt - scan);
        if (html.compare(next_lt, 3, "</a") == 0 ||
            html.compare(next_lt, 3, "</A") == 0 ||
            html.compare(next_lt, 2, "<a") == 0 ||
            html.compare(next_lt, 2, "<A") == 0)
          break;
        size_t gt = html.find('>', next_lt);
        if (gt == std::string_view::npos) break;
        scan = gt + 1;
      }
      link.anchor = std::string(trim(html_detail::decode_entities(text)));
    }
    links.push_back(std::move(link));
  }
  return links;
}

/// Partitions a page's links into external registrable hosts and same-domain
/// frontier URLs. Only http(s) targets are kept; malformed hosts and opaque
/// schemes are dropped silently.
inline OutlinkScan extract_outlink_hosts(std::string_view html,
                                         const std::string& base_url) {
  auto base = parse_url(base_url);
  if (!base) throw UsageError("bad base URL '" + base_url + "'");
  std::string base_host = normalize_host(base->host).host;

  OutlinkScan scan;
  std::map<std::string, std::string> externals;  // host -> first anchor
  std::set<std::string> seen_frontier;
  for (const auto& link : extract_links(html)) {
    auto target = resolve_url(*base, link.href);
    if (!target) continue;
    if (target->scheme != "http" && target->scheme != "https") continue;
    std::string host;
    try {
      host = normalize_host(target->host).host;
    } catch (const MalformedHost&) {
      continue;
    }
    if (host == base_host) {
      std::string url = target->to_string();
      if (seen_frontier.insert(url).second) scan.frontier.push_back(url);
    } else {
      externals.emplace(host, link.anchor);  // first anchor wins
    }
  }
  for (auto& [host, anchor] : externals)
    scan.externals.push_back({host, anchor});
  return scan;
}

}  // namespace domainscope
