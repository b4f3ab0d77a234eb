// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ldprof {

inline const std::string XSD = "http://www.w3.org/2001/XMLSchema#";
inline const std::string RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline const std::string RDF_LANGSTRING = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
inline const std::string RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label";
inline const std::string SKOS_PREFLABEL = "http://www.w3.org/2004/02/skos/core#prefLabel";

enum class TermKind : uint8_t { iri, literal, blank };

// One RDF term. Comparison order (kind, value, datatype, lang) doubles as the
// canonical sort used wherever a deterministic ordering of terms is needed.
struct Term {
  TermKind kind = TermKind::iri;
  std::string value;                   // IRI, lexical form, or blank node label
  std::optional<std::string> datatype; // literals only
  std::optional<std::string> lang;     // literals only

  static Term iri(std::string v) { return {TermKind::iri, std::move(v), {}, {}}; }
  static Term blank(std::string label) { return {TermKind::blank, std::move(label), {}, {}}; }
  static Term lit(std::string v) { return {TermKind::literal, std::move(v), {}, {}}; }
  static Term lit_typed(std::string v, std::string dt) {
    return {TermKind::literal, std::move(v), std::move(dt), {}};
  }
  static Term lit_lang(std::string v, std::string lang) {
    return {TermKind::literal, std::move(v), {}, std::move(lang)};
  }

  bool is_iri() const { return kind == TermKind::iri; }
  bool is_literal() const { return kind == TermKind::literal; }
  bool is_blank() const { return kind == TermKind::blank; }

  // N-Triples style rendering, used in logs and exports.
  std::string to_string() const;

  auto operator<=>(const Term&) const = default;
};

// SPARQL DATATYPE() semantics: declared datatype, xsd:string for plain
// literals, rdf:langString for language-tagged ones, nothing for IRIs and
// blank nodes (where the builtin errors and the variable stays unbound).
std::optional<std::string> datatype_of(const Term& t);

Term count_literal(long long n);

using Row = std::map<std::string, Term>;

struct QueryResult {
  std::vector<std::string> variables;
  std::vector<Row> rows;

  bool operator==(const QueryResult&) const = default;
};

// SPARQL 1.1 Query Results JSON (application/sparql-results+json).
std::string serialize_results(const QueryResult& r);
QueryResult parse_results(const std::string& body); // throws Err::malformed_response

// Parse one term in the rendering Term::to_string produces, starting at i and
// leaving i just past the term. Throws Err::parse.
Term parse_term_at(const std::string& text, size_t& i);
// Whole-string variant; trailing content is an error.
Term parse_term_text(const std::string& text);

} // namespace ldprof
