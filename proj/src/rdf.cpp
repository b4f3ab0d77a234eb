// SPDX-License-Identifier: Apache-2.0
#include "ldprof/rdf.hpp"

#include <cctype>

#include <nlohmann/json.hpp>

#include "ldprof/error.hpp"

namespace ldprof {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const char* err_name(Err k) {
  switch (k) {
    case Err::config: return "config";
    case Err::io: return "io";
    case Err::parse: return "parse";
    case Err::network_unreachable: return "network_unreachable";
    case Err::query_timeout: return "query_timeout";
    case Err::endpoint_error: return "endpoint_error";
    case Err::malformed_response: return "malformed_response";
    case Err::missing_param: return "missing_param";
    case Err::unsupported_template: return "unsupported_template";
    case Err::probe_ambiguous: return "probe_ambiguous";
    case Err::endpoint_unusable: return "endpoint_unusable";
    case Err::port_in_use: return "port_in_use";
    case Err::dimension_mismatch: return "dimension_mismatch";
    case Err::empty_label: return "empty_label";
    case Err::zero_vector: return "zero_vector";
    case Err::degenerate_network: return "degenerate_network";
  }
  return "unknown";
}

std::string Term::to_string() const {
  switch (kind) {
    case TermKind::iri: return "<" + value + ">";
    case TermKind::blank: return "_:" + value;
    case TermKind::literal: {
      std::string out = "\"";
      for (char c : value) {
        switch (c) {
          case '"': out += "\\\""; break;
          case '\\': out += "\\\\"; break;
          case '\n': out += "\\n"; break;
          case '\r': out += "\\r"; break;
          case '\t': out += "\\t"; break;
          default: out += c;
        }
      }
      out += "\"";
      if (lang) out += "@" + *lang;
      else if (datatype) out += "^^<" + *datatype + ">";
      return out;
    }
  }
  return value;
}

std::optional<std::string> datatype_of(const Term& t) {
  if (!t.is_literal()) return std::nullopt;
  if (t.lang) return RDF_LANGSTRING;
  if (t.datatype) return *t.datatype;
  return XSD + "string";
}

Term count_literal(long long n) { return Term::lit_typed(std::to_string(n), XSD + "integer"); }

Term parse_term_at(const std::string& s, size_t& i) {
  if (i >= s.size()) fail(Err::parse, "expected a term, found end of input");
  if (s[i] == '<') {
    size_t end = s.find('>', i + 1);
    if (end == std::string::npos) fail(Err::parse, "unterminated IRI");
    Term t = Term::iri(s.substr(i + 1, end - i - 1));
    i = end + 1;
    return t;
  }
  if (s[i] == '_' && i + 1 < s.size() && s[i + 1] == ':') {
    size_t start = i + 2;
    size_t end = start;
    while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end]))) ++end;
    if (end == start) fail(Err::parse, "empty blank node label");
    Term t = Term::blank(s.substr(start, end - start));
    i = end;
    return t;
  }
  if (s[i] == '"') {
    std::string lex;
    size_t j = i + 1;
    bool closed = false;
    while (j < s.size()) {
      char c = s[j];
      if (c == '\\') {
        if (j + 1 >= s.size()) fail(Err::parse, "dangling escape");
        char e = s[j + 1];
        switch (e) {
          case '"': lex += '"'; break;
          case '\\': lex += '\\'; break;
          case 'n': lex += '\n'; break;
          case 'r': lex += '\r'; break;
          case 't': lex += '\t'; break;
          default: fail(Err::parse, std::string("unknown escape \\") + e);
        }
        j += 2;
        continue;
      }
      if (c == '"') {
        closed = true;
        ++j;
        break;
      }
      lex += c;
      ++j;
    }
    if (!closed) fail(Err::parse, "unterminated literal");
    Term t = Term::lit(std::move(lex));
    if (j < s.size() && s[j] == '@') {
      size_t start = j + 1;
      size_t end = start;
      while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end]))) ++end;
      if (end == start) fail(Err::parse, "empty language tag");
      t.lang = s.substr(start, end - start);
      j = end;
    } else if (j + 1 < s.size() && s[j] == '^' && s[j + 1] == '^') {
      j += 2;
      if (j >= s.size() || s[j] != '<') fail(Err::parse, "datatype must be an IRI");
      size_t end = s.find('>', j + 1);
      if (end == std::string::npos) fail(Err::parse, "unterminated datatype IRI");
      t.datatype = s.substr(j + 1, end - j - 1);
      j = end + 1;
    }
    i = j;
    return t;
  }
  fail(Err::parse, std::string("unexpected character '") + s[i] + "'");
}

Term parse_term_text(const std::string& text) {
  size_t i = 0;
  Term t = parse_term_at(text, i);
  if (i != text.size()) fail(Err::parse, "trailing content after term");
  return t;
}

namespace {

ordered_json term_to_json(const Term& t) {
  ordered_json o;
  switch (t.kind) {
    case TermKind::iri: o["type"] = "uri"; break;
    case TermKind::blank: o["type"] = "bnode"; break;
    case TermKind::literal: o["type"] = "literal"; break;
  }
  o["value"] = t.value;
  if (t.is_literal()) {
    if (t.lang) o["xml:lang"] = *t.lang;
    else if (t.datatype) o["datatype"] = *t.datatype;
  }
  return o;
}

Term term_from_json(const json& o) {
  if (!o.is_object() || !o.contains("type") || !o.contains("value"))
    fail(Err::malformed_response, "binding is not a term object");
  const std::string type = o.at("type").get<std::string>();
  const std::string value = o.at("value").get<std::string>();
  if (type == "uri") return Term::iri(value);
  if (type == "bnode") return Term::blank(value);
  if (type == "literal" || type == "typed-literal") {
    Term t = Term::lit(value);
    if (o.contains("xml:lang")) t.lang = o.at("xml:lang").get<std::string>();
    else if (o.contains("datatype")) t.datatype = o.at("datatype").get<std::string>();
    return t;
  }
  fail(Err::malformed_response, "unknown term type '" + type + "'");
}

} // namespace

std::string serialize_results(const QueryResult& r) {
  ordered_json doc;
  doc["head"]["vars"] = r.variables;
  ordered_json bindings = ordered_json::array();
  for (const Row& row : r.rows) {
    ordered_json b = ordered_json::object();
    for (const auto& [var, term] : row) b[var] = term_to_json(term);
    bindings.push_back(std::move(b));
  }
  doc["results"]["bindings"] = std::move(bindings);
  return doc.dump();
}

QueryResult parse_results(const std::string& body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) fail(Err::malformed_response, "response is not valid JSON");
  if (!doc.is_object() || !doc.contains("head") || !doc.contains("results"))
    fail(Err::malformed_response, "response lacks head/results");
  QueryResult r;
  const json& head = doc.at("head");
  if (!head.is_object() || !head.contains("vars") || !head.at("vars").is_array())
    fail(Err::malformed_response, "head.vars missing");
  for (const json& v : head.at("vars")) r.variables.push_back(v.get<std::string>());
  const json& results = doc.at("results");
  if (!results.is_object() || !results.contains("bindings") || !results.at("bindings").is_array())
    fail(Err::malformed_response, "results.bindings missing");
  for (const json& b : results.at("bindings")) {
    if (!b.is_object()) fail(Err::malformed_response, "binding row is not an object");
    Row row;
    for (auto it = b.begin(); it != b.end(); ++it) {
      bool declared = false;
      for (const auto& v : r.variables) declared = declared || v == it.key();
      if (!declared) fail(Err::malformed_response, "binding for undeclared variable ?" + it.key());
      row.emplace(it.key(), term_from_json(it.value()));
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

} // namespace ldprof
