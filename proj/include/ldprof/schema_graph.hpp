// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ldprof/extractor.hpp"
#include "ldprof/summary.hpp"

namespace ldprof {

// Maps extraction graph URIs to stable source ids. Rules are ordered
// (pattern, source id) pairs; the first pattern found anywhere in the graph
// URI wins. Without a match the id is host plus first path segment.
class GraphRules {
public:
  GraphRules() = default;

  // Lines of "pattern<TAB>source_id"; blank lines and # comments skipped.
  // Throws Err::config with the offending line on a bad pattern.
  static GraphRules parse(std::istream& in, const std::string& name = "<rules>");
  static GraphRules load_file(const std::string& path);

  size_t size() const { return rules_.size(); }

private:
  struct Rule {
    std::regex re;
    std::string source_id;
  };
  std::vector<Rule> rules_;

  friend std::string normalize_graph_uri(const std::string&, const GraphRules&);
};

std::string normalize_graph_uri(const std::string& graph_uri, const GraphRules& rules = {});

enum class NodeKind { cls, object_property, data_property, datatype };
enum class EdgeRole { domain, range };

const char* node_kind_name(NodeKind k);
const char* edge_role_name(EdgeRole r);

struct NodeFacet {
  long long count = 0;
  ValueSummary summary;

  bool operator==(const NodeFacet&) const = default;
};

// One schema element. A URI may play different roles in different sources
// (an object property in one source can be a data property in another);
// each (source, kind) pair keeps its own count and summary.
struct SchemaNode {
  std::string uri;
  std::map<std::pair<std::string, NodeKind>, NodeFacet> facets;
  bool nonstandard_datatype = false; // a non-XSD/RDFS URI used as a datatype

  bool has_kind(NodeKind k) const;
  std::set<std::string> sources() const;
  long long total_count() const;

  bool operator==(const SchemaNode&) const = default;
};

struct EdgeKey {
  std::string from;
  std::string to;
  EdgeRole role = EdgeRole::domain;
  std::string source;

  auto operator<=>(const EdgeKey&) const = default;
};

struct EdgeInfo {
  long long count = 0;
  ValueSummary summary;

  bool operator==(const EdgeInfo&) const = default;
};

struct SourceInfo {
  std::set<std::string> endpoints;
  std::set<std::string> graph_uris;

  bool operator==(const SourceInfo&) const = default;
};

// The merged schema graph. Domain edges go class→property; range edges go
// property→(class|datatype).
struct LslodSchemaGraph {
  std::map<std::string, SchemaNode> nodes; // by uri
  std::map<EdgeKey, EdgeInfo> edges;
  std::map<std::string, SourceInfo> sources;

  bool operator==(const LslodSchemaGraph&) const = default;
};

struct SourcedFragment {
  std::string source;
  std::string endpoint_url;
  SchemaFragment fragment;
};

// Folds one extracted graph into the schema graph. A (source, graph URI)
// pair that was already merged is skipped, which makes re-merging the same
// fragment a no-op; distinct graphs of one source accumulate their counts.
void merge_into(LslodSchemaGraph& g, const SourcedFragment& sf);

// Order-independent: any permutation of the input yields the same graph.
LslodSchemaGraph merge_fragments(const std::vector<SourcedFragment>& fragments);

struct GraphStats {
  std::map<std::string, std::map<NodeKind, size_t>> per_source; // distinct URIs
  std::map<NodeKind, size_t> total;
  std::vector<std::string> multi_kind_uris; // sorted; play >1 role somewhere
};

GraphStats stats(const LslodSchemaGraph& g);
void write_stats_tsv(const LslodSchemaGraph& g, std::ostream& out);

// Versioned JSON document with stable key order; round-trips deep-equal.
std::string graph_to_json(const LslodSchemaGraph& g);
LslodSchemaGraph graph_from_json(const std::string& body);

// One row per (uri, source) facet of the kind, tab-separated with a header.
void write_kind_tsv(const LslodSchemaGraph& g, NodeKind kind, std::ostream& out);

void write_graphml(const LslodSchemaGraph& g, std::ostream& out);

} // namespace ldprof
