// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ldprof/schema_graph.hpp"
#include "ldprof/uri_analysis.hpp"

namespace ldprof {

// One node of the reuse network: a schema element observed in one source, or
// an instance-URI pattern observed in one source's class samples.
struct ReuseOccurrence {
  std::string uri; // element URI, or the generalized instance pattern
  std::string source;
  bool pattern = false;

  auto operator<=>(const ReuseOccurrence&) const = default;
};

// Undirected network over source-scoped occurrences. Identical URIs shared by
// several sources are chained (reuse), URIs resolved to the same catalog term
// through a variant group are chained (mapping), and instance patterns that
// classify into a catalog ontology link to the schema elements they mirror.
struct ReuseNetwork {
  std::vector<ReuseOccurrence> nodes;            // sorted, unique
  std::vector<std::pair<size_t, size_t>> edges;  // node indices, first < second

  size_t size() const { return nodes.size(); }

  bool operator==(const ReuseNetwork&) const = default;
};

ReuseNetwork build_reuse_network(const LslodSchemaGraph& graph, const OriginCatalog& catalog,
                                 const std::vector<VariantGroup>& variant_groups);

// Components as sorted node-index lists, ordered by their smallest member.
std::vector<std::vector<size_t>> connected_components(const ReuseNetwork& network);

// The vocabulary-reuse fraction: with M_r the components holding at least two
// occurrences, k = |M_r| and N the total node count, returns
// (sum of component sizes over M_r - k) / N. Throws Err::degenerate_network
// on an empty network.
double reuse_statistic(const ReuseNetwork& network);

// component id, component size, then one row per member occurrence.
void write_components_tsv(const ReuseNetwork& network, std::ostream& out);

// The five per-source reuse statistics. Percentages are 0..100.
struct SourceReuseStats {
  std::string source;

  // (1) distinct catalog ontologies and vocabularies contributing elements.
  size_t reused_origin_count = 0;

  // (2) elements whose URI classifies to another origin or appears in
  // another source of the graph.
  size_t schema_element_count = 0;
  size_t reused_element_count = 0;
  double reused_element_pct = 0.0;

  // (3)/(4) classes whose sampled property objects reach another source's
  // entities (inter) or the source's own (intra); the distributions carry the
  // per-class share of such objects for classes where it is nonzero.
  size_t class_count = 0;
  size_t interlinked_class_count = 0;
  double interlinked_class_pct = 0.0;
  std::map<std::string, double> interlinking;
  size_t intralinked_class_count = 0;
  double intralinked_class_pct = 0.0;
  std::map<std::string, double> intralinking;

  // (5) sampled class instances minted under an external namespace.
  size_t sampled_entity_count = 0;
  size_t external_entity_count = 0;
  double external_entity_pct = 0.0;

  bool operator==(const SourceReuseStats&) const = default;
};

std::vector<SourceReuseStats> source_statistics(const LslodSchemaGraph& graph,
                                                const OriginCatalog& catalog);

void write_source_stats_tsv(const std::vector<SourceReuseStats>& stats, std::ostream& out);
void write_linking_distribution_tsv(const std::vector<SourceReuseStats>& stats, std::ostream& out);

// Source-level linking map: how many distinct object properties keep a
// source's entities inside it, and how many connect each source pair. Links
// are read off range classes where typed and sampled-object namespaces
// otherwise; a namespace belongs to the source whose class samples minted it.
struct LinkNetwork {
  std::map<std::string, size_t> intra_links;                         // per source
  std::map<std::pair<std::string, std::string>, size_t> inter_links; // key: a < b

  bool operator==(const LinkNetwork&) const = default;
};

LinkNetwork build_link_network(const LslodSchemaGraph& graph);

size_t inter_count(const LinkNetwork& network, const std::string& a, const std::string& b);

// Node size = intra count, edge weight = inter count.
void write_link_network_graphml(const LinkNetwork& network, std::ostream& out);

} // namespace ldprof
