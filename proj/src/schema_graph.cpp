// SPDX-License-Identifier: Apache-2.0
#include "ldprof/schema_graph.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ldprof/error.hpp"
#include "ldprof/json_io.hpp"

namespace ldprof {

using nlohmann::json;
using nlohmann::ordered_json;

const char* node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::cls: return "class";
    case NodeKind::object_property: return "object_property";
    case NodeKind::data_property: return "data_property";
    case NodeKind::datatype: return "datatype";
  }
  return "?";
}

const char* edge_role_name(EdgeRole r) { return r == EdgeRole::domain ? "domain" : "range"; }

namespace {

NodeKind node_kind_from(const std::string& name) {
  for (NodeKind k : {NodeKind::cls, NodeKind::object_property, NodeKind::data_property,
                     NodeKind::datatype})
    if (name == node_kind_name(k)) return k;
  fail(Err::parse, "unknown node kind '" + name + "'");
}

EdgeRole edge_role_from(const std::string& name) {
  if (name == "domain") return EdgeRole::domain;
  if (name == "range") return EdgeRole::range;
  fail(Err::parse, "unknown edge role '" + name + "'");
}

bool is_standard_datatype(const std::string& uri) {
  return uri.starts_with(XSD) || uri.starts_with("http://www.w3.org/2000/01/rdf-schema#") ||
         uri.starts_with("http://www.w3.org/1999/02/22-rdf-syntax-ns#");
}

// Deterministic, commutative choice between two summaries of the same
// element: the larger sample wins, ties break on the serialized form.
const ValueSummary& richer_summary(const ValueSummary& a, const ValueSummary& b) {
  if (a.sample_size != b.sample_size) return a.sample_size > b.sample_size ? a : b;
  if (a == b) return a;
  return summary_to_json(a).dump() > summary_to_json(b).dump() ? a : b;
}

void add_facet(LslodSchemaGraph& g, const std::string& uri, const std::string& source,
               NodeKind kind, long long count, const ValueSummary& summary) {
  SchemaNode& node = g.nodes[uri];
  node.uri = uri;
  NodeFacet& f = node.facets[{source, kind}];
  f.count += count;
  f.summary = richer_summary(f.summary, summary);
  if (kind == NodeKind::datatype && !is_standard_datatype(uri)) node.nonstandard_datatype = true;
}

void add_edge(LslodSchemaGraph& g, std::string from, std::string to, EdgeRole role,
              const std::string& source, long long count, const ValueSummary& summary) {
  EdgeInfo& e = g.edges[EdgeKey{std::move(from), std::move(to), role, source}];
  e.count += count;
  e.summary = richer_summary(e.summary, summary);
}

} // namespace

bool SchemaNode::has_kind(NodeKind k) const {
  return std::any_of(facets.begin(), facets.end(),
                     [&](const auto& f) { return f.first.second == k; });
}

std::set<std::string> SchemaNode::sources() const {
  std::set<std::string> out;
  for (const auto& [key, facet] : facets) out.insert(key.first);
  return out;
}

long long SchemaNode::total_count() const {
  long long n = 0;
  for (const auto& [key, facet] : facets) n += facet.count;
  return n;
}

GraphRules GraphRules::parse(std::istream& in, const std::string& name) {
  GraphRules out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
      fail(Err::config, name + ":" + std::to_string(lineno) + ": expected pattern<TAB>source_id");
    Rule r;
    r.source_id = line.substr(tab + 1);
    try {
      r.re = std::regex(line.substr(0, tab));
    } catch (const std::regex_error& e) {
      fail(Err::config,
           name + ":" + std::to_string(lineno) + ": bad pattern: " + e.what());
    }
    out.rules_.push_back(std::move(r));
  }
  return out;
}

GraphRules GraphRules::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::io, "cannot open rules file " + path);
  return parse(in, path);
}

std::string normalize_graph_uri(const std::string& graph_uri, const GraphRules& rules) {
  for (const auto& rule : rules.rules_)
    if (std::regex_search(graph_uri, rule.re)) return rule.source_id;

  // Default: host plus first path segment.
  size_t scheme = graph_uri.find("://");
  if (scheme == std::string::npos) return graph_uri;
  size_t host_start = scheme + 3;
  size_t slash = graph_uri.find('/', host_start);
  if (slash == std::string::npos) return graph_uri.substr(host_start);
  std::string host = graph_uri.substr(host_start, slash - host_start);
  size_t seg_end = graph_uri.find('/', slash + 1);
  std::string segment = seg_end == std::string::npos
                            ? graph_uri.substr(slash + 1)
                            : graph_uri.substr(slash + 1, seg_end - slash - 1);
  if (segment.empty()) return host;
  return host + "/" + segment;
}

void merge_into(LslodSchemaGraph& g, const SourcedFragment& sf) {
  SourceInfo& info = g.sources[sf.source];
  if (info.graph_uris.contains(sf.fragment.graph_uri)) return;
  info.graph_uris.insert(sf.fragment.graph_uri);
  if (!sf.endpoint_url.empty()) info.endpoints.insert(sf.endpoint_url);

  for (const ClassProfile& c : sf.fragment.classes)
    add_facet(g, c.uri, sf.source, NodeKind::cls, c.instance_count, c.summary);

  for (const PropertyRealization& r : sf.fragment.realizations) {
    // The domain class normally already has a facet from the class list; the
    // zero count covers hand-built fragments without one.
    add_facet(g, r.domain, sf.source, NodeKind::cls, 0, {});
    NodeKind pk =
        r.kind == PropertyKind::object ? NodeKind::object_property : NodeKind::data_property;
    add_facet(g, r.property, sf.source, pk, r.assertion_count, r.summary);
    add_edge(g, r.domain, r.property, EdgeRole::domain, sf.source, r.assertion_count, r.summary);
    if (r.kind == PropertyKind::object && r.range) {
      add_facet(g, *r.range, sf.source, NodeKind::cls, 0, {});
      add_edge(g, r.property, *r.range, EdgeRole::range, sf.source, r.assertion_count, r.summary);
    } else if (r.kind == PropertyKind::data && r.datatype) {
      add_facet(g, *r.datatype, sf.source, NodeKind::datatype, r.assertion_count, r.summary);
      add_edge(g, r.property, *r.datatype, EdgeRole::range, sf.source, r.assertion_count,
               r.summary);
    }
    // Anonymous or undetermined ranges contribute the domain edge only.
  }
}

LslodSchemaGraph merge_fragments(const std::vector<SourcedFragment>& fragments) {
  // Absorbing in a canonical order makes the result independent of the
  // caller's ordering even where merging itself is order-sensitive.
  std::vector<const SourcedFragment*> ordered;
  ordered.reserve(fragments.size());
  for (const SourcedFragment& sf : fragments) ordered.push_back(&sf);
  std::sort(ordered.begin(), ordered.end(), [](const SourcedFragment* a, const SourcedFragment* b) {
    if (a->source != b->source) return a->source < b->source;
    if (a->fragment.graph_uri != b->fragment.graph_uri)
      return a->fragment.graph_uri < b->fragment.graph_uri;
    return a->endpoint_url < b->endpoint_url;
  });
  LslodSchemaGraph g;
  for (const SourcedFragment* sf : ordered) merge_into(g, *sf);
  return g;
}

GraphStats stats(const LslodSchemaGraph& g) {
  GraphStats st;
  for (NodeKind k : {NodeKind::cls, NodeKind::object_property, NodeKind::data_property,
                     NodeKind::datatype})
    st.total[k] = 0;
  for (const auto& [uri, node] : g.nodes) {
    std::set<NodeKind> kinds;
    for (const auto& [key, facet] : node.facets) {
      kinds.insert(key.second);
      auto& per = st.per_source[key.first];
      per[key.second]++;
    }
    for (NodeKind k : kinds) st.total[k]++;
    if (kinds.size() > 1) st.multi_kind_uris.push_back(uri);
  }
  return st;
}

void write_stats_tsv(const LslodSchemaGraph& g, std::ostream& out) {
  GraphStats st = stats(g);
  const NodeKind kinds[] = {NodeKind::cls, NodeKind::object_property, NodeKind::data_property,
                            NodeKind::datatype};
  out << "source\tclasses\tobject_properties\tdata_properties\tdatatypes\n";
  for (const auto& [source, per] : st.per_source) {
    out << source;
    for (NodeKind k : kinds) {
      auto it = per.find(k);
      out << '\t' << (it == per.end() ? 0 : it->second);
    }
    out << '\n';
  }
  out << "total";
  for (NodeKind k : kinds) out << '\t' << st.total.at(k);
  out << '\n';
  for (const std::string& uri : st.multi_kind_uris) {
    out << "# multiple kinds: " << uri << " (";
    bool first = true;
    for (const auto& [key, facet] : g.nodes.at(uri).facets) {
      if (!first) out << "; ";
      first = false;
      out << node_kind_name(key.second) << " in " << key.first;
    }
    out << ")\n";
  }
}

std::string graph_to_json(const LslodSchemaGraph& g) {
  ordered_json doc;
  doc["format"] = "schema-graph";
  doc["version"] = 1;

  ordered_json sources = ordered_json::object();
  for (const auto& [id, info] : g.sources) {
    ordered_json o;
    o["endpoints"] = info.endpoints;
    o["graph_uris"] = info.graph_uris;
    sources[id] = std::move(o);
  }
  doc["sources"] = std::move(sources);

  ordered_json nodes = ordered_json::array();
  for (const auto& [uri, node] : g.nodes) {
    ordered_json o;
    o["uri"] = uri;
    ordered_json facets = ordered_json::array();
    for (const auto& [key, facet] : node.facets) {
      ordered_json f;
      f["source"] = key.first;
      f["kind"] = node_kind_name(key.second);
      f["count"] = facet.count;
      f["summary"] = summary_to_json(facet.summary);
      facets.push_back(std::move(f));
    }
    o["facets"] = std::move(facets);
    if (node.nonstandard_datatype) o["nonstandard_datatype"] = true;
    nodes.push_back(std::move(o));
  }
  doc["nodes"] = std::move(nodes);

  ordered_json edges = ordered_json::array();
  for (const auto& [key, info] : g.edges) {
    ordered_json e;
    e["from"] = key.from;
    e["to"] = key.to;
    e["role"] = edge_role_name(key.role);
    e["source"] = key.source;
    e["count"] = info.count;
    e["summary"] = summary_to_json(info.summary);
    edges.push_back(std::move(e));
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

LslodSchemaGraph graph_from_json(const std::string& body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) fail(Err::parse, "schema graph is not valid JSON");
  try {
    if (doc.at("format") != "schema-graph") fail(Err::parse, "not a schema graph document");
    if (doc.at("version") != 1) fail(Err::parse, "unsupported schema graph version");

    LslodSchemaGraph g;
    for (const auto& [id, o] : doc.at("sources").items()) {
      SourceInfo info;
      info.endpoints = o.at("endpoints").get<std::set<std::string>>();
      info.graph_uris = o.at("graph_uris").get<std::set<std::string>>();
      g.sources[id] = std::move(info);
    }
    for (const json& o : doc.at("nodes")) {
      SchemaNode node;
      node.uri = o.at("uri").get<std::string>();
      for (const json& f : o.at("facets")) {
        std::string source = f.at("source").get<std::string>();
        NodeKind kind = node_kind_from(f.at("kind").get<std::string>());
        if (!g.sources.contains(source))
          fail(Err::parse, "node " + node.uri + " references unregistered source " + source);
        NodeFacet facet;
        facet.count = f.at("count").get<long long>();
        facet.summary = summary_from_json(f.at("summary"));
        if (!node.facets.emplace(std::make_pair(source, kind), std::move(facet)).second)
          fail(Err::parse, "node " + node.uri + " repeats facet " + source);
      }
      bool flagged = o.value("nonstandard_datatype", false);
      bool expected = node.has_kind(NodeKind::datatype) && !is_standard_datatype(node.uri);
      if (flagged != expected)
        fail(Err::parse, "node " + node.uri + " has an inconsistent nonstandard_datatype flag");
      node.nonstandard_datatype = flagged;
      std::string uri = node.uri;
      if (!g.nodes.emplace(uri, std::move(node)).second)
        fail(Err::parse, "duplicate node " + uri);
    }
    for (const json& e : doc.at("edges")) {
      EdgeKey key;
      key.from = e.at("from").get<std::string>();
      key.to = e.at("to").get<std::string>();
      key.role = edge_role_from(e.at("role").get<std::string>());
      key.source = e.at("source").get<std::string>();
      if (!g.nodes.contains(key.from) || !g.nodes.contains(key.to))
        fail(Err::parse, "edge " + key.from + " -> " + key.to + " references a missing node");
      if (!g.sources.contains(key.source))
        fail(Err::parse, "edge " + key.from + " -> " + key.to + " references unregistered source " +
                             key.source);
      EdgeInfo info;
      info.count = e.at("count").get<long long>();
      info.summary = summary_from_json(e.at("summary"));
      if (!g.edges.emplace(std::move(key), std::move(info)).second)
        fail(Err::parse, "duplicate edge");
    }
    return g;
  } catch (const json::exception& e) {
    fail(Err::parse, std::string("bad schema graph document: ") + e.what());
  }
}

void write_kind_tsv(const LslodSchemaGraph& g, NodeKind kind, std::ostream& out) {
  out << "uri\tsource\tcount\tsample_size\tdistinct_count\tis_categorical\tinferred_datatype\t"
         "median_length";
  if (kind == NodeKind::datatype) out << "\tnonstandard";
  out << '\n';
  for (const auto& [uri, node] : g.nodes) {
    for (const auto& [key, facet] : node.facets) {
      if (key.second != kind) continue;
      const ValueSummary& s = facet.summary;
      out << uri << '\t' << key.first << '\t' << facet.count << '\t' << s.sample_size << '\t'
          << s.distinct_count << '\t' << (s.is_categorical ? "true" : "false") << '\t'
          << (s.inferred_datatype ? *s.inferred_datatype : "-") << '\t' << s.median_length;
      if (kind == NodeKind::datatype) out << '\t' << (node.nonstandard_datatype ? "true" : "false");
      out << '\n';
    }
  }
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

} // namespace

void write_graphml(const LslodSchemaGraph& g, std::ostream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
      << "  <key id=\"count\" for=\"node\" attr.name=\"count\" attr.type=\"long\"/>\n"
      << "  <key id=\"sources\" for=\"node\" attr.name=\"sources\" attr.type=\"string\"/>\n"
      << "  <key id=\"role\" for=\"edge\" attr.name=\"role\" attr.type=\"string\"/>\n"
      << "  <key id=\"origin\" for=\"edge\" attr.name=\"origin\" attr.type=\"string\"/>\n"
      << "  <key id=\"ecount\" for=\"edge\" attr.name=\"count\" attr.type=\"long\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"directed\">\n";
  for (const auto& [uri, node] : g.nodes) {
    std::set<std::string> kinds;
    for (const auto& [key, facet] : node.facets) kinds.insert(node_kind_name(key.second));
    std::string kind_list;
    for (const std::string& k : kinds) kind_list += (kind_list.empty() ? "" : ",") + k;
    std::string source_list;
    for (const std::string& s : node.sources())
      source_list += (source_list.empty() ? "" : ",") + s;
    out << "    <node id=\"" << xml_escape(uri) << "\">\n"
        << "      <data key=\"kind\">" << xml_escape(kind_list) << "</data>\n"
        << "      <data key=\"count\">" << node.total_count() << "</data>\n"
        << "      <data key=\"sources\">" << xml_escape(source_list) << "</data>\n"
        << "    </node>\n";
  }
  size_t i = 0;
  for (const auto& [key, info] : g.edges) {
    out << "    <edge id=\"e" << i++ << "\" source=\"" << xml_escape(key.from) << "\" target=\""
        << xml_escape(key.to) << "\">\n"
        << "      <data key=\"role\">" << edge_role_name(key.role) << "</data>\n"
        << "      <data key=\"origin\">" << xml_escape(key.source) << "</data>\n"
        << "      <data key=\"ecount\">" << info.count << "</data>\n"
        << "    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

} // namespace ldprof
