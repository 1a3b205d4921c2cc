#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "domainscope/text.hpp"

namespace domainscope {

struct Url {
  std::string scheme;
  std::string host;
  std::string port;
  std::string path;   // always starts with '/' when host present
  std::string query;  // without '?'

  std::string origin() const {
    std::string s = scheme + "://" + host;
    if (!port.empty()) s += ":" + port;
    return s;
  }

  std::string to_string() const {
    std::string s = origin() + (path.empty() ? "/" : path);
    if (!query.empty()) s += "?" + query;
    return s;
  }
};

inline std::optional<Url> parse_url(std::string_view raw) {
  std::string_view s = trim(raw);
  size_t scheme_end = s.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;
  Url u;
  u.scheme = ascii_lower(s.substr(0, scheme_end));
  s.remove_prefix(scheme_end + 3);
  size_t path_start = s.find_first_of("/?#");
  std::string_view authority =
      path_start == std::string_view::npos ? s : s.substr(0, path_start);
  size_t at = authority.rfind('@');
  if (at != std::string_view::npos) authority.remove_prefix(at + 1);
  size_t colon = authority.find(':');
  if (colon != std::string_view::npos) {
    u.port = std::string(authority.substr(colon + 1));
    authority = authority.substr(0, colon);
  }
  u.host = ascii_lower(authority);
  if (u.host.empty()) return std::nullopt;
  if (path_start == std::string_view::npos) {
    u.path = "/";
    return u;
  }
  s.remove_prefix(path_start);
  size_t frag = s.find('#');
  if (frag != std::string_view::npos) s = s.substr(0, frag);
  size_t q = s.find('?');
  if (q != std::string_view::npos) {
    u.query = std::string(s.substr(q + 1));
    s = s.substr(0, q);
  }
  u.path = s.empty() ? "/" : std::string(s);
  if (u.path[0] == '?' || u.path.empty()) u.path = "/";
  if (u.path[0] != '/') u.path = "/" + u.path;
  return u;
}

namespace url_detail {

inline std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string> out;
  for (auto& seg : split(path, '/')) {
    if (seg == "." || seg.empty()) continue;
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
      continue;
    }
    out.push_back(seg);
  }
  std::string joined = "/" + join(out, "/");
  if ((path.ends_with('/') || path.ends_with("/.") || path.ends_with("/..")) &&
      joined != "/")
    joined += "/";
  return joined;
}

}  // namespace url_detail

/// Resolves `ref` against `base` (simplified RFC 3986; enough for crawling).
/// Returns nullopt for refs without a usable http(s) target.
inline std::optional<Url> resolve_url(const Url& base, std::string_view ref) {
  std::string_view r = trim(ref);
  if (r.empty()) return std::nullopt;
  if (r[0] == '#') return std::nullopt;  // same-document
  if (r.rfind("//", 0) == 0) return parse_url(base.scheme + "://" +
                                              std::string(r.substr(2)));
  size_t scheme_end = r.find("://");
  if (scheme_end != std::string_view::npos && scheme_end > 0) {
    bool alpha = true;
    for (char c : r.substr(0, scheme_end))
      if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
            (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.'))
        alpha = false;
    if (alpha) return parse_url(r);
  }
  // opaque schemes (mailto:, javascript:, tel:) have a colon before any slash
  size_t colon = r.find(':');
  size_t slash = r.find('/');
  if (colon != std::string_view::npos &&
      (slash == std::string_view::npos || colon < slash))
    return std::nullopt;

  Url u = base;
  u.query.clear();
  std::string_view target = r;
  size_t frag = target.find('#');
  if (frag != std::string_view::npos) target = target.substr(0, frag);
  size_t q = target.find('?');
  if (q != std::string_view::npos) {
    u.query = std::string(target.substr(q + 1));
    target = target.substr(0, q);
  }
  if (target.empty()) {
    u.path = base.path;
    return u;
  }
  if (target[0] == '/') {
    u.path = url_detail::remove_dot_segments(target);
    return u;
  }
  std::string_view dir = base.path;
  size_t last_slash = dir.rfind('/');
  dir = last_slash == std::string_view::npos ? "/" : dir.substr(0, last_slash + 1);
  u.path = url_detail::remove_dot_segments(std::string(dir) +
                                           std::string(target));
  return u;
}

}  // namespace domainscope
