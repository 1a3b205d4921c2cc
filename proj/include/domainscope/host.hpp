#pragma once

#include <string>
#include <string_view>

#include "domainscope/errors.hpp"
#include "domainscope/psl.hpp"
#include "domainscope/text.hpp"

namespace domainscope {

struct NormalizedHost {
  std::string host;        // registrable domain, lowercase
  bool suffix_known;       // false -> last-two-labels fallback was used
};

namespace detail {

inline bool valid_label_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

inline std::string_view strip_to_host_part(std::string_view raw) {
  std::string_view s = trim(raw);
  if (s.empty()) throw MalformedHost("empty input");
  size_t scheme = s.find("://");
  if (scheme != std::string_view::npos) {
    s.remove_prefix(scheme + 3);
  } else if (s.rfind("//", 0) == 0) {
    s.remove_prefix(2);
  } else {
    // opaque schemes like mailto: carry no host part
    size_t colon = s.find(':');
    size_t dot = s.find('.');
    size_t slash = s.find('/');
    if (colon != std::string_view::npos && colon < std::min(dot, slash)) {
      bool alpha = colon > 0;
      for (size_t i = 0; i < colon; ++i)
        if (!(ascii_lower(s[i]) >= 'a' && ascii_lower(s[i]) <= 'z'))
          alpha = false;
      if (alpha) throw MalformedHost("no host in '" + std::string(raw) + "'");
    }
  }
  size_t cut = s.find_first_of("/?#");
  if (cut != std::string_view::npos) s = s.substr(0, cut);
  size_t at = s.rfind('@');
  if (at != std::string_view::npos) s.remove_prefix(at + 1);
  size_t colon = s.find(':');
  if (colon != std::string_view::npos) {
    std::string_view port = s.substr(colon + 1);
    for (char c : port)
      if (c < '0' || c > '9')
        throw MalformedHost("bad port in '" + std::string(raw) + "'");
    s = s.substr(0, colon);
  }
  if (s.empty()) throw MalformedHost("no host in '" + std::string(raw) + "'");
  return s;
}

}  // namespace detail

/// Collapse a URL or bare host to its registrable domain: lowercase, no
/// scheme, path, port or subdomain labels. Idempotent. Unknown suffixes fall
/// back to the last two labels and are flagged, not rejected.
inline NormalizedHost normalize_host(std::string_view raw,
                                     const PublicSuffixList& psl =
                                         PublicSuffixList::bundled()) {
  std::string host = ascii_lower(detail::strip_to_host_part(raw));
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (host.empty()) throw MalformedHost("empty host");
  if (host.find('.') == std::string::npos)
    throw MalformedHost("single-label host '" + host + "'");
  bool all_numeric = true;
  bool prev_dot = true;
  for (char c : host) {
    if (c == '.') {
      if (prev_dot) throw MalformedHost("empty label in '" + host + "'");
      prev_dot = true;
      continue;
    }
    prev_dot = false;
    if (!detail::valid_label_char(c))
      throw MalformedHost("invalid character in '" + host + "'");
    if (c < '0' || c > '9') all_numeric = false;
  }
  if (prev_dot) throw MalformedHost("empty label in '" + host + "'");
  if (all_numeric) throw MalformedHost("numeric address '" + host + "'");

  auto reg = psl.registrable_domain(host);
  if (!reg)
    throw MalformedHost("'" + host + "' is a public suffix, not a host");
  return {reg->suffix, reg->known};
}

inline std::string normalize_host_str(std::string_view raw) {
  return normalize_host(raw).host;
}

}  // namespace domainscope
