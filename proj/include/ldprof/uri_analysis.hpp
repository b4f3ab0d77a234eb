// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "ldprof/endpoint.hpp"
#include "ldprof/schema_graph.hpp"

namespace ldprof {

class SparqlClient;

// Where a URI comes from: a BioPortal ontology, an OWL file published on the
// Web, a vocabulary from the LOV repository, or another linked-data source.
enum class OriginKind { bioportal_ontology, owl_on_web, lov_vocab, ld_source };

const char* origin_kind_name(OriginKind k);

bool is_ontology_kind(OriginKind k);

struct Origin {
  std::string source_id;
  OriginKind kind = OriginKind::ld_source;

  bool operator==(const Origin&) const = default;
};

// One namespace notation under which an origin's terms appear. The pattern is
// regex-searched against the lowercased URI, so rules that mean "prefix"
// should anchor with '^'. `recommended` marks the representation publishers
// are advised to use; `display` is its printable prefix.
struct NamespaceRule {
  std::string pattern_text;
  std::regex pattern;
  bool recommended = false;
  std::string display;
};

struct IdentifierRule {
  std::string pattern_text;
  std::regex pattern;
};

struct CatalogEntry {
  std::string source_id;
  OriginKind kind = OriginKind::ld_source;
  std::vector<NamespaceRule> namespaces;
  std::vector<IdentifierRule> identifiers;
  std::map<std::string, std::string> labels; // term IRI -> preferred label
};

// Catalog of known origins, loaded from a TSV with columns
//   source_id  kind  namespace_regex  identifier_regex  labels_path
// plus two optional trailing columns: recommended (0/1) and display prefix.
// Rows sharing a source_id accumulate into one entry (several namespace
// notations per origin); '-' or an empty cell means "none" for the regex and
// path columns. labels_path is resolved against the catalog file's directory
// and names a TSV of `iri<TAB>label` lines.
class OriginCatalog {
public:
  static OriginCatalog parse(std::istream& in, const std::string& name,
                             const std::filesystem::path& base_dir = {});
  static OriginCatalog load_file(const std::string& path);

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  const CatalogEntry* entry(const std::string& source_id) const;

  // Lowercases the URI and applies the namespace rules in file order; the
  // first match decides. Unknown URIs get nothing.
  std::optional<Origin> classify(const std::string& uri) const;

private:
  std::vector<CatalogEntry> entries_;
  std::vector<std::pair<size_t, size_t>> rule_order_; // (entry, namespace rule)
};

std::optional<Origin> classify_origin(const std::string& uri, const OriginCatalog& catalog);

// Local identifier of a URI under an origin's notation rules, extracted from
// the lowercased form (first identifier rule that matches wins; capture group
// one if present, the whole match otherwise).
std::optional<std::string> extract_identifier(const CatalogEntry& entry, const std::string& uri);

enum class LabelMethod { catalog_annotation, endpoint_annotation, regexp };

const char* label_method_name(LabelMethod m);

struct LabeledUri {
  std::string uri;
  std::string label;
  LabelMethod method = LabelMethod::regexp;
  std::string source; // classified origin, empty when unknown

  bool operator==(const LabeledUri&) const = default;
};

// URI part after the namespace prefix (empty when the URI ends in a
// separator or has none at all).
std::string local_name(const std::string& uri);

// Splits on '-', '_', whitespace and camel-case boundaries, uppercases each
// token's first character and joins with single spaces: "mol_weight" becomes
// "Mol Weight", "hasMolecularWeight" becomes "Has Molecular Weight". Returns
// an empty string when no tokens survive. Idempotent on its own output.
std::string humanize_local_name(const std::string& local);

// Three-stage label extraction: a catalog label map, then rdfs:label or
// skos:prefLabel assertions fetched from the endpoint, then the humanized
// local name. The first stage producing a non-empty label wins; when even the
// local name is empty the full URI is the label. Endpoint failures fall
// through to stage three. Where an endpoint returns several labels the
// lexicographically smallest is kept, so the result does not depend on
// response order.
LabeledUri extract_label(const std::string& uri, const OriginCatalog& catalog);
LabeledUri extract_label(const std::string& uri, const OriginCatalog& catalog,
                         SparqlClient& client, const EndpointDescriptor& endpoint,
                         const CapabilityProfile& caps);

// URIs that share an origin and local identifier but appear under different
// namespace notations; the catalog's recommended notations are carried along.
struct VariantGroup {
  std::string origin;
  std::string identifier;
  std::vector<std::string> uris;       // sorted
  std::vector<std::string> namespaces; // sorted, distinct, size >= 2
  std::vector<std::string> recommended_namespaces;

  bool operator==(const VariantGroup&) const = default;
};

// Groups the given URIs by (origin, identifier) and keeps the groups spanning
// at least two distinct namespaces. Output is sorted by (origin, identifier)
// and does not depend on input order. URIs that classify to no origin or
// yield no identifier are ignored.
std::vector<VariantGroup> detect_uri_variants(const std::vector<std::string>& uris,
                                              const OriginCatalog& catalog);

// One row per group: origin, identifier, '|'-joined variant URIs and
// '|'-joined recommended namespaces ('-' when the catalog names none).
void write_variant_report_tsv(const std::vector<VariantGroup>& groups, std::ostream& out);

// A source whose typed classes drown in some ontology's namespace: either
// more than `class_threshold` of its class nodes classify to one catalog
// ontology, or its instance-URI patterns map into an ontology's namespace
// (ontology terms used as individuals).
struct MismatchRecord {
  std::string source;
  std::string ontology;
  long long class_count = 0;
  bool via_instance_pattern = false;

  auto operator<=>(const MismatchRecord&) const = default;
};

std::vector<MismatchRecord> detect_semantic_mismatch(const LslodSchemaGraph& graph,
                                                     const OriginCatalog& catalog,
                                                     long long class_threshold = 1000);

} // namespace ldprof
