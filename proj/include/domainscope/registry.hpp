#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "domainscope/category.hpp"
#include "domainscope/errors.hpp"
#include "domainscope/host.hpp"
#include "domainscope/toml.hpp"

namespace domainscope {

struct WebDomainRecord {
  std::string host;            // registrable domain, lowercase
  Category category = Category::Other;
  std::string label;
  std::string discovered_from = "manual";

  bool operator==(const WebDomainRecord&) const = default;
};

struct OrganizationRecord {
  std::string id;      // short ticker-like token
  std::string name;
  std::string sector;
  std::vector<WebDomainRecord> domains;

  bool operator==(const OrganizationRecord&) const = default;

  const WebDomainRecord* corporate() const {
    for (const auto& d : domains)
      if (d.category == Category::Corporate) return &d;
    return nullptr;
  }

  bool has_host(const std::string& host) const {
    for (const auto& d : domains)
      if (d.host == host) return true;
    return false;
  }
};

struct RegistrySummary {
  struct OrgCounts {
    std::string id;
    std::string sector;
    std::array<int, 8> by_category{};  // indexed by Category order
    int total = 0;
  };
  std::vector<OrgCounts> per_org;
  std::array<int, 8> category_totals{};
  int grand_total = 0;
  double mean_domains = 0.0;    // mean of per-organization totals
  double stddev_domains = 0.0;  // population standard deviation
};

inline void validate_registry(const std::vector<OrganizationRecord>& orgs) {
  std::set<std::string> ids;
  for (const auto& org : orgs) {
    if (org.id.empty()) throw RegistryError("organization with empty id");
    if (!ids.insert(org.id).second)
      throw RegistryError("duplicate organization id '" + org.id + "'");
    if (!org.corporate())
      throw RegistryError("organization '" + org.id +
                          "' has no CORPORATE domain");
    std::set<std::string> hosts;
    for (const auto& d : org.domains) {
      if (!hosts.insert(d.host).second)
        throw RegistryError("duplicate host '" + d.host + "' in '" + org.id +
                            "'");
      NormalizedHost norm = normalize_host(d.host);
      if (norm.host != d.host)
        throw RegistryError("host '" + d.host + "' is not normalized (want '" +
                            norm.host + "')");
    }
  }
}

inline RegistrySummary summarize_registry(
    const std::vector<OrganizationRecord>& orgs) {
  RegistrySummary s;
  for (const auto& org : orgs) {
    RegistrySummary::OrgCounts oc;
    oc.id = org.id;
    oc.sector = org.sector;
    for (const auto& d : org.domains) {
      ++oc.by_category[static_cast<size_t>(d.category)];
      ++oc.total;
    }
    for (size_t i = 0; i < 8; ++i) s.category_totals[i] += oc.by_category[i];
    s.grand_total += oc.total;
    s.per_org.push_back(std::move(oc));
  }
  if (!s.per_org.empty()) {
    double n = static_cast<double>(s.per_org.size());
    s.mean_domains = s.grand_total / n;
    double ss = 0;
    for (const auto& oc : s.per_org) {
      double d = oc.total - s.mean_domains;
      ss += d * d;
    }
    s.stddev_domains = std::sqrt(ss / n);
  }
  return s;
}

struct CategorySuggestion {
  Category category = Category::Other;
  double confidence = 0.0;  // < 0.5 must be confirmed by hand
};

/// Default keyword hints for the category heuristic.
inline const std::vector<std::pair<std::string, Category>>&
default_category_hints() {
  static const std::vector<std::pair<std::string, Category>> hints = {
      {"fundacion", Category::Foundation}, {"foundation", Category::Foundation},
      {"fundacio", Category::Foundation},  {"fundacao", Category::Foundation},
      {"stiftung", Category::Foundation},  {"fondation", Category::Foundation},
  };
  return hints;
}

/// Heuristic only: the registry file is always the deciding record, and
/// corporate status is declared there, never inferred here.
inline CategorySuggestion suggest_category(
    const std::string& host, const std::set<std::string>& corporate_hosts,
    const std::vector<std::pair<std::string, Category>>& hints =
        default_category_hints()) {
  const auto& psl = PublicSuffixList::bundled();
  auto suffix_of = [&](const std::string& h) {
    return psl.public_suffix(h).suffix;
  };
  auto second_level = [&](const std::string& h) {
    std::string suffix = suffix_of(h);
    if (suffix.size() + 1 >= h.size()) return std::string();
    std::string rest = h.substr(0, h.size() - suffix.size() - 1);
    size_t dot = rest.rfind('.');
    return dot == std::string::npos ? rest : rest.substr(dot + 1);
  };

  std::string label = second_level(host);
  for (const auto& corp : corporate_hosts) {
    if (!label.empty() && label == second_level(corp) &&
        suffix_of(host) != suffix_of(corp))
      return {Category::Delegation, 0.9};
  }
  for (const auto& [keyword, category] : hints) {
    if (host.find(keyword) != std::string::npos) return {category, 0.75};
  }
  return {Category::Other, 0.2};
}

// --- registry file I/O ------------------------------------------------

namespace registry_detail {

inline WebDomainRecord domain_from_json(const nlohmann::json& j) {
  WebDomainRecord d;
  if (!j.contains("host") || !j["host"].is_string())
    throw RegistryError("domain entry without host");
  d.host = j["host"].get<std::string>();
  d.category = parse_category_or_throw(
      j.value("category", std::string("OTHER")));
  d.label = j.value("label", std::string());
  d.discovered_from = j.value("discovered_from", std::string("manual"));
  return d;
}

inline OrganizationRecord org_from_json(const nlohmann::json& j) {
  OrganizationRecord org;
  org.id = j.value("id", std::string());
  org.name = j.value("name", std::string());
  org.sector = j.value("sector", std::string());
  const char* key = j.contains("domain") ? "domain" : "domains";
  if (j.contains(key)) {
    for (const auto& dj : j[key]) org.domains.push_back(domain_from_json(dj));
  }
  return org;
}

}  // namespace registry_detail

inline std::vector<OrganizationRecord> registry_from_json(
    const nlohmann::json& doc) {
  std::vector<OrganizationRecord> orgs;
  const char* key = doc.contains("org") ? "org" : "organizations";
  if (!doc.contains(key) || !doc[key].is_array())
    throw RegistryError("registry document has no organization list");
  for (const auto& oj : doc[key])
    orgs.push_back(registry_detail::org_from_json(oj));
  validate_registry(orgs);
  return orgs;
}

/// Byte-stable JSON mirror: keys sorted, two-space indent, LF line endings.
inline std::string registry_to_json(
    const std::vector<OrganizationRecord>& orgs) {
  nlohmann::json doc;
  doc["organizations"] = nlohmann::json::array();
  for (const auto& org : orgs) {
    nlohmann::json oj;
    oj["id"] = org.id;
    oj["name"] = org.name;
    oj["sector"] = org.sector;
    oj["domains"] = nlohmann::json::array();
    for (const auto& d : org.domains) {
      nlohmann::json dj;
      dj["host"] = d.host;
      dj["category"] = std::string(to_string(d.category));
      dj["label"] = d.label;
      dj["discovered_from"] = d.discovered_from;
      oj["domains"].push_back(dj);
    }
    doc["organizations"].push_back(oj);
  }
  return doc.dump(2) + "\n";
}

inline std::vector<OrganizationRecord> load_registry_file(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open registry file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (path.extension() == ".json")
    return registry_from_json(nlohmann::json::parse(text));
  return registry_from_json(parse_toml(text));
}

}  // namespace domainscope
