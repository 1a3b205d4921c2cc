#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "domainscope/psl_snapshot.hpp"
#include "domainscope/text.hpp"

namespace domainscope {

/// Public-suffix lookup against the bundled snapshot. Matching follows the
/// list's rule semantics: the longest matching rule prevails, `*` matches one
/// label, and `!` exception rules beat wildcards.
class PublicSuffixList {
 public:
  static const PublicSuffixList& bundled() {
    static PublicSuffixList psl{kPslRules.begin(), kPslRules.end()};
    return psl;
  }

  template <typename It>
  PublicSuffixList(It first, It last) {
    for (It it = first; it != last; ++it) {
      std::string_view rule = *it;
      if (rule.empty()) continue;
      if (rule[0] == '!')
        exceptions_.emplace(rule.substr(1));
      else
        rules_.emplace(rule);
    }
  }

  struct Match {
    std::string suffix;  // prevailing public suffix for the host
    bool known;          // false -> no rule matched, last-label fallback
  };

  /// Host must already be lowercase dotted labels. Returns the public suffix.
  Match public_suffix(std::string_view host) const {
    std::vector<std::string_view> labels = split_labels(host);
    // exception rules win outright; the suffix is the rule minus its first
    // label
    for (size_t i = 0; i + 1 < labels.size(); ++i) {
      std::string candidate = join_from(labels, i);
      if (exceptions_.count(candidate))
        return {join_from(labels, i + 1), true};
    }
    size_t best_labels = 0;
    std::string best;
    for (size_t i = 0; i < labels.size(); ++i) {
      std::string candidate = join_from(labels, i);
      size_t n = labels.size() - i;
      if (rules_.count(candidate) && n > best_labels) {
        best_labels = n;
        best = candidate;
      }
      if (i + 1 < labels.size()) {
        // wildcard rule "*.<rest>"
        std::string wild = "*." + join_from(labels, i + 1);
        if (rules_.count(wild) && n > best_labels) {
          best_labels = n;
          best = candidate;
        }
      }
    }
    if (best_labels > 0) return {best, true};
    // no rule: treat the final label as the suffix (the list's default rule)
    return {std::string(labels.back()), false};
  }

  /// Registrable domain = public suffix plus one label; nullopt when the
  /// host *is* a public suffix.
  std::optional<Match> registrable_domain(std::string_view host) const {
    Match m = public_suffix(host);
    if (m.suffix.size() >= host.size()) return std::nullopt;
    std::string_view rest = host.substr(0, host.size() - m.suffix.size() - 1);
    size_t dot = rest.rfind('.');
    std::string_view label =
        dot == std::string_view::npos ? rest : rest.substr(dot + 1);
    if (label.empty()) return std::nullopt;
    return Match{std::string(label) + "." + m.suffix, m.known};
  }

 private:
  static std::vector<std::string_view> split_labels(std::string_view host) {
    std::vector<std::string_view> labels;
    size_t start = 0;
    while (true) {
      size_t pos = host.find('.', start);
      if (pos == std::string_view::npos) {
        labels.push_back(host.substr(start));
        break;
      }
      labels.push_back(host.substr(start, pos - start));
      start = pos + 1;
    }
    return labels;
  }

  static std::string join_from(const std::vector<std::string_view>& labels,
                               size_t i) {
    std::string out;
    for (size_t j = i; j < labels.size(); ++j) {
      if (j > i) out += '.';
      out += labels[j];
    }
    return out;
  }

  std::unordered_set<std::string> rules_;
  std::unordered_set<std::string> exceptions_;
};

}  // namespace domainscope
