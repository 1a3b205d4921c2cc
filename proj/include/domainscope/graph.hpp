#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "domainscope/errors.hpp"

namespace domainscope {

/// Directed mention graph for one organization. Nodes are all the plan
/// domains (isolates included), numbered in lexicographic host order so that
/// every export is deterministic. Immutable once built.
class DomainGraph {
 public:
  struct Arc {
    int src = 0;
    int dst = 0;
    std::int64_t weight = 0;  // corrected mention estimate
    bool reliable = true;
  };

  DomainGraph() = default;

  /// Arc endpoints index into `hosts` as given; they are remapped onto the
  /// canonical (sorted) numbering here.
  DomainGraph(std::vector<std::string> hosts, std::vector<Arc> arcs)
      : hosts_(hosts), arcs_(std::move(arcs)) {
    std::sort(hosts_.begin(), hosts_.end());
    hosts_.erase(std::unique(hosts_.begin(), hosts_.end()), hosts_.end());
    for (size_t i = 0; i < hosts_.size(); ++i) index_[hosts_[i]] = static_cast<int>(i);
    for (Arc& a : arcs_) {
      if (a.src < 0 || a.dst < 0 || a.src >= static_cast<int>(hosts.size()) ||
          a.dst >= static_cast<int>(hosts.size()))
        throw UsageError("arc endpoint out of range");
      a.src = index_.at(hosts[a.src]);
      a.dst = index_.at(hosts[a.dst]);
    }
    std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) {
      return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
    });
    for (size_t i = 0; i + 1 < arcs_.size(); ++i)
      if (arcs_[i].src == arcs_[i + 1].src && arcs_[i].dst == arcs_[i + 1].dst)
        throw DuplicateEdge(hosts_[arcs_[i].src] + " -> " +
                            hosts_[arcs_[i].dst]);
    out_.assign(hosts_.size(), {});
    in_.assign(hosts_.size(), {});
    for (const Arc& a : arcs_) {
      if (a.src == a.dst) throw UsageError("self-loop arc");
      out_[a.src].push_back(a.dst);
      in_[a.dst].push_back(a.src);
    }
  }

  int n() const { return static_cast<int>(hosts_.size()); }
  int m() const { return static_cast<int>(arcs_.size()); }
  const std::string& host(int i) const { return hosts_[i]; }
  const std::vector<std::string>& hosts() const { return hosts_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<int>& out(int i) const { return out_[i]; }
  const std::vector<int>& in(int i) const { return in_[i]; }

  std::optional<int> index(const std::string& host) const {
    auto it = index_.find(host);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::string> hosts_;
  std::vector<Arc> arcs_;
  std::map<std::string, int> index_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

}  // namespace domainscope
