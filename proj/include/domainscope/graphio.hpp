#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "domainscope/errors.hpp"
#include "domainscope/graph.hpp"
#include "domainscope/html.hpp"
#include "domainscope/mention.hpp"
#include "domainscope/text.hpp"

namespace domainscope {

// --- Pajek NET ----------------------------------------------------------
// Carries structure and weights only; reliability flags live in GEXF.

inline std::string to_net(const DomainGraph& g) {
  std::string out = "*Vertices " + std::to_string(g.n()) + "\n";
  for (int i = 0; i < g.n(); ++i)
    out += std::to_string(i + 1) + " \"" + g.host(i) + "\"\n";
  out += "*Arcs\n";
  for (const auto& a : g.arcs())
    out += std::to_string(a.src + 1) + " " + std::to_string(a.dst + 1) + " " +
           std::to_string(a.weight) + "\n";
  return out;
}

inline DomainGraph from_net(std::string_view text) {
  std::vector<std::string> hosts;
  std::vector<DomainGraph::Arc> arcs;
  enum class Section { None, Vertices, Arcs } section = Section::None;
  int expected = -1;
  for (auto& raw_line : split(text, '\n')) {
    std::string_view line = trim(raw_line);
    if (line.empty()) continue;
    if (line[0] == '*') {
      std::string head = ascii_lower(line);
      if (head.rfind("*vertices", 0) == 0) {
        section = Section::Vertices;
        auto parts = split(trim(line.substr(9)), ' ');
        if (!parts.empty() && !parts[0].empty()) expected = std::stoi(parts[0]);
      } else if (head.rfind("*arcs", 0) == 0 || head.rfind("*edges", 0) == 0) {
        section = Section::Arcs;
      } else {
        section = Section::None;
      }
      continue;
    }
    if (section == Section::Vertices) {
      size_t q1 = line.find('"');
      size_t q2 = q1 == std::string_view::npos ? q1 : line.find('"', q1 + 1);
      if (q1 == std::string_view::npos || q2 == std::string_view::npos)
        throw ParseError("NET vertex line without quoted label: " +
                         std::string(line));
      hosts.emplace_back(line.substr(q1 + 1, q2 - q1 - 1));
    } else if (section == Section::Arcs) {
      long long src, dst, weight = 1;
      auto fields = split(line, ' ');
      std::vector<std::string> nonempty;
      for (auto& f : fields)
        if (!trim(f).empty()) nonempty.emplace_back(trim(f));
      if (nonempty.size() < 2)
        throw ParseError("NET arc line too short: " + std::string(line));
      src = std::stoll(nonempty[0]);
      dst = std::stoll(nonempty[1]);
      if (nonempty.size() >= 3) weight = std::stoll(nonempty[2]);
      arcs.push_back({static_cast<int>(src - 1), static_cast<int>(dst - 1),
                      weight, true});
    }
  }
  if (expected >= 0 && expected != static_cast<int>(hosts.size()))
    throw ParseError("NET vertex count mismatch: header says " +
                     std::to_string(expected) + ", found " +
                     std::to_string(hosts.size()));
  return DomainGraph(std::move(hosts), std::move(arcs));
}

// --- GEXF ----------------------------------------------------------------

namespace graphio_detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace graphio_detail

inline std::string to_gexf(const DomainGraph& g) {
  using graphio_detail::xml_escape;
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n"
      "  <graph defaultedgetype=\"directed\">\n"
      "    <attributes class=\"edge\">\n"
      "      <attribute id=\"0\" title=\"reliable\" type=\"boolean\"/>\n"
      "    </attributes>\n"
      "    <nodes>\n";
  for (int i = 0; i < g.n(); ++i)
    out += "      <node id=\"" + std::to_string(i + 1) + "\" label=\"" +
           xml_escape(g.host(i)) + "\"/>\n";
  out += "    </nodes>\n    <edges>\n";
  int edge_id = 0;
  for (const auto& a : g.arcs()) {
    out += "      <edge id=\"" + std::to_string(edge_id++) + "\" source=\"" +
           std::to_string(a.src + 1) + "\" target=\"" +
           std::to_string(a.dst + 1) + "\" weight=\"" +
           std::to_string(a.weight) + "\">\n";
    out += std::string("        <attvalues>\n") +
           "          <attvalue for=\"0\" value=\"" +
           (a.reliable ? "true" : "false") + "\"/>\n" +
           "        </attvalues>\n      </edge>\n";
  }
  out += "    </edges>\n  </graph>\n</gexf>\n";
  return out;
}

inline DomainGraph from_gexf(std::string_view xml) {
  std::vector<std::string> hosts;
  std::vector<DomainGraph::Arc> arcs;
  size_t pos = 0;
  DomainGraph::Arc* open_edge = nullptr;
  while (pos < xml.size()) {
    size_t lt = xml.find('<', pos);
    if (lt == std::string_view::npos) break;
    pos = lt;
    auto tag = html_detail::parse_tag(xml, pos);
    if (!tag) {
      pos = lt + 1;
      continue;
    }
    if (tag->closing) continue;
    if (tag->name == "node") {
      hosts.push_back(tag->attrs.count("label") ? tag->attrs["label"]
                                                : tag->attrs["id"]);
    } else if (tag->name == "edge") {
      DomainGraph::Arc a;
      a.src = std::stoi(tag->attrs.at("source")) - 1;
      a.dst = std::stoi(tag->attrs.at("target")) - 1;
      a.weight = tag->attrs.count("weight")
                     ? std::stoll(tag->attrs.at("weight"))
                     : 1;
      arcs.push_back(a);
      open_edge = &arcs.back();
    } else if (tag->name == "attvalue" && open_edge) {
      if (tag->attrs.count("for") && tag->attrs["for"] == "0")
        open_edge->reliable = tag->attrs["value"] == "true";
    }
  }
  return DomainGraph(std::move(hosts), std::move(arcs));
}

// --- edge-list CSV ---------------------------------------------------------

inline std::string to_edge_csv(const std::vector<MentionEdge>& edges) {
  std::string out = "source,target,raw,corrected,collision,reliable\n";
  for (const auto& e : edges) {
    out += csv_field(e.source) + "," + csv_field(e.target) + "," +
           std::to_string(e.raw_hce) + "," + std::to_string(e.corrected_hce) +
           "," + (e.has_collision() ? "true" : "false") + "," +
           (e.reliable ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace domainscope
