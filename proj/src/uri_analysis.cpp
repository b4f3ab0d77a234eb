// SPDX-License-Identifier: Apache-2.0
#include "ldprof/uri_analysis.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "ldprof/client.hpp"
#include "ldprof/error.hpp"
#include "ldprof/summary.hpp"

namespace ldprof {

const char* origin_kind_name(OriginKind k) {
  switch (k) {
    case OriginKind::bioportal_ontology: return "bioportal_ontology";
    case OriginKind::owl_on_web: return "owl_on_web";
    case OriginKind::lov_vocab: return "lov_vocab";
    case OriginKind::ld_source: return "ld_source";
  }
  return "?";
}

bool is_ontology_kind(OriginKind k) {
  return k == OriginKind::bioportal_ontology || k == OriginKind::owl_on_web;
}

const char* label_method_name(LabelMethod m) {
  switch (m) {
    case LabelMethod::catalog_annotation: return "catalog_annotation";
    case LabelMethod::endpoint_annotation: return "endpoint_annotation";
    case LabelMethod::regexp: return "regexp";
  }
  return "?";
}

namespace {

std::string lower_copy(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

OriginKind origin_kind_from(const std::string& name, const std::string& where) {
  for (OriginKind k : {OriginKind::bioportal_ontology, OriginKind::owl_on_web,
                       OriginKind::lov_vocab, OriginKind::ld_source})
    if (name == origin_kind_name(k)) return k;
  fail(Err::config, where + ": unknown origin kind '" + name + "'");
}

bool cell_absent(const std::string& cell) { return cell.empty() || cell == "-"; }

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::regex compile_rule(const std::string& text, const std::string& where) {
  try {
    return std::regex(text, std::regex::ECMAScript | std::regex::icase);
  } catch (const std::regex_error& e) {
    fail(Err::config, where + ": bad pattern: " + e.what());
  }
}

void load_label_map(const std::filesystem::path& path, std::map<std::string, std::string>& into) {
  std::ifstream in(path);
  if (!in) fail(Err::io, "cannot open label map " + path.string());
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
      fail(Err::config, path.string() + ":" + std::to_string(lineno) + ": expected iri<TAB>label");
    into.emplace(line.substr(0, tab), line.substr(tab + 1)); // first label wins
  }
}

} // namespace

OriginCatalog OriginCatalog::parse(std::istream& in, const std::string& name,
                                   const std::filesystem::path& base_dir) {
  OriginCatalog out;
  std::map<std::string, size_t> index;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string where = name + ":" + std::to_string(lineno);
    std::vector<std::string> cells = split_tabs(line);
    if (cells.size() < 5 || cells.size() > 7)
      fail(Err::config, where + ": expected 5 to 7 tab-separated columns, got " +
                            std::to_string(cells.size()));
    if (cells[0].empty()) fail(Err::config, where + ": empty source id");

    OriginKind kind = origin_kind_from(cells[1], where);
    auto [it, fresh] = index.emplace(cells[0], out.entries_.size());
    if (fresh) {
      CatalogEntry e;
      e.source_id = cells[0];
      e.kind = kind;
      out.entries_.push_back(std::move(e));
    }
    CatalogEntry& entry = out.entries_[it->second];
    if (entry.kind != kind)
      fail(Err::config, where + ": conflicting kind for source '" + cells[0] + "'");

    if (!cell_absent(cells[2])) {
      NamespaceRule rule;
      rule.pattern_text = cells[2];
      rule.pattern = compile_rule(cells[2], where);
      if (cells.size() > 5 && !cells[5].empty()) {
        if (cells[5] != "0" && cells[5] != "1")
          fail(Err::config, where + ": recommended flag must be 0 or 1");
        rule.recommended = cells[5] == "1";
      }
      if (cells.size() > 6) rule.display = cells[6];
      out.rule_order_.emplace_back(it->second, entry.namespaces.size());
      entry.namespaces.push_back(std::move(rule));
    }
    if (!cell_absent(cells[3]))
      entry.identifiers.push_back({cells[3], compile_rule(cells[3], where)});
    if (!cell_absent(cells[4])) {
      std::filesystem::path p = cells[4];
      if (p.is_relative()) p = base_dir / p;
      load_label_map(p, entry.labels);
    }
  }
  return out;
}

OriginCatalog OriginCatalog::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::io, "cannot open catalog file " + path);
  return parse(in, path, std::filesystem::path(path).parent_path());
}

const CatalogEntry* OriginCatalog::entry(const std::string& source_id) const {
  for (const CatalogEntry& e : entries_)
    if (e.source_id == source_id) return &e;
  return nullptr;
}

std::optional<Origin> OriginCatalog::classify(const std::string& uri) const {
  const std::string low = lower_copy(uri);
  for (const auto& [entry_idx, rule_idx] : rule_order_)
    if (std::regex_search(low, entries_[entry_idx].namespaces[rule_idx].pattern))
      return Origin{entries_[entry_idx].source_id, entries_[entry_idx].kind};
  return std::nullopt;
}

std::optional<Origin> classify_origin(const std::string& uri, const OriginCatalog& catalog) {
  return catalog.classify(uri);
}

std::optional<std::string> extract_identifier(const CatalogEntry& entry, const std::string& uri) {
  const std::string low = lower_copy(uri);
  for (const IdentifierRule& rule : entry.identifiers) {
    std::smatch m;
    if (!std::regex_search(low, m, rule.pattern)) continue;
    std::string id = m.size() > 1 && m[1].matched ? m[1].str() : m[0].str();
    if (!id.empty()) return id;
  }
  return std::nullopt;
}

std::string local_name(const std::string& uri) {
  return uri.substr(namespace_of(uri).size());
}

std::string humanize_local_name(const std::string& local) {
  auto lower = [](char c) { return std::islower(static_cast<unsigned char>(c)) != 0; };
  auto upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };

  std::vector<std::string> tokens;
  std::string cur;
  auto cut = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (size_t i = 0; i < local.size(); ++i) {
    char c = local[i];
    if (c == '-' || c == '_' || std::isspace(static_cast<unsigned char>(c))) {
      cut();
      continue;
    }
    if (!cur.empty()) {
      char prev = cur.back();
      // Camel-case boundaries: aX and (in an acronym run) XXy starts a word.
      bool rising = (lower(prev) || digit(prev)) && upper(c);
      bool acronym_end =
          upper(prev) && upper(c) && i + 1 < local.size() && lower(local[i + 1]);
      if (rising || acronym_end) cut();
    }
    cur.push_back(c);
  }
  cut();

  std::string out;
  for (std::string& t : tokens) {
    t[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

namespace {

LabeledUri extract_label_impl(const std::string& uri, const OriginCatalog& catalog,
                              SparqlClient* client, const EndpointDescriptor* endpoint,
                              const CapabilityProfile* caps) {
  LabeledUri out;
  out.uri = uri;
  if (auto origin = catalog.classify(uri)) out.source = origin->source_id;

  for (const CatalogEntry& entry : catalog.entries()) {
    auto it = entry.labels.find(uri);
    if (it == entry.labels.end() || it->second.empty()) continue;
    out.label = it->second;
    out.method = LabelMethod::catalog_annotation;
    out.source = entry.source_id;
    return out;
  }

  if (client) {
    for (const std::string& annotation : {RDFS_LABEL, SKOS_PREFLABEL}) {
      std::optional<std::string> best;
      try {
        TemplateParams params;
        params.term_uri = uri;
        params.annotation_uri = annotation;
        QueryResult r =
            client->execute_template(*endpoint, *caps, TemplateId::label_lookup, params);
        for (const Row& row : r.rows) {
          auto it = row.find("label");
          if (it == row.end() || !it->second.is_literal() || it->second.value.empty()) continue;
          if (!best || it->second.value < *best) best = it->second.value;
        }
      } catch (const Error&) {
        // Unreachable or uncooperative endpoint; the regexp stage still applies.
      }
      if (best) {
        out.label = *best;
        out.method = LabelMethod::endpoint_annotation;
        return out;
      }
    }
  }

  out.label = humanize_local_name(local_name(uri));
  if (out.label.empty()) out.label = uri;
  out.method = LabelMethod::regexp;
  return out;
}

} // namespace

LabeledUri extract_label(const std::string& uri, const OriginCatalog& catalog) {
  return extract_label_impl(uri, catalog, nullptr, nullptr, nullptr);
}

LabeledUri extract_label(const std::string& uri, const OriginCatalog& catalog,
                         SparqlClient& client, const EndpointDescriptor& endpoint,
                         const CapabilityProfile& caps) {
  return extract_label_impl(uri, catalog, &client, &endpoint, &caps);
}

std::vector<VariantGroup> detect_uri_variants(const std::vector<std::string>& uris,
                                              const OriginCatalog& catalog) {
  struct Bucket {
    std::set<std::string> uris;
    std::set<std::string> namespaces;
  };
  std::map<std::pair<std::string, std::string>, Bucket> buckets;
  for (const std::string& uri : uris) {
    auto origin = catalog.classify(uri);
    if (!origin) continue;
    const CatalogEntry* entry = catalog.entry(origin->source_id);
    auto id = extract_identifier(*entry, uri);
    if (!id) continue;
    Bucket& b = buckets[{origin->source_id, *id}];
    b.uris.insert(uri);
    b.namespaces.insert(namespace_of(uri));
  }

  std::vector<VariantGroup> out;
  for (const auto& [key, bucket] : buckets) {
    if (bucket.namespaces.size() < 2) continue;
    VariantGroup g;
    g.origin = key.first;
    g.identifier = key.second;
    g.uris.assign(bucket.uris.begin(), bucket.uris.end());
    g.namespaces.assign(bucket.namespaces.begin(), bucket.namespaces.end());
    for (const NamespaceRule& rule : catalog.entry(key.first)->namespaces)
      if (rule.recommended)
        g.recommended_namespaces.push_back(rule.display.empty() ? rule.pattern_text : rule.display);
    out.push_back(std::move(g));
  }
  return out;
}

void write_variant_report_tsv(const std::vector<VariantGroup>& groups, std::ostream& out) {
  auto joined = [](const std::vector<std::string>& items) {
    if (items.empty()) return std::string("-");
    std::string s;
    for (const std::string& item : items) {
      if (!s.empty()) s.push_back('|');
      s += item;
    }
    return s;
  };
  out << "origin\tidentifier\tvariant_uris\trecommended_namespace\n";
  for (const VariantGroup& g : groups)
    out << g.origin << '\t' << g.identifier << '\t' << joined(g.uris) << '\t'
        << joined(g.recommended_namespaces) << '\n';
}

std::vector<MismatchRecord> detect_semantic_mismatch(const LslodSchemaGraph& graph,
                                                     const OriginCatalog& catalog,
                                                     long long class_threshold) {
  std::map<std::pair<std::string, std::string>, long long> class_counts;
  std::set<std::pair<std::string, std::string>> pattern_evidence;
  std::map<std::string, std::optional<Origin>> pattern_cache;

  for (const auto& [uri, node] : graph.nodes) {
    std::optional<Origin> node_origin;
    bool classified = false;
    for (const auto& [key, facet] : node.facets) {
      if (key.second != NodeKind::cls) continue;
      if (!classified) {
        node_origin = catalog.classify(uri);
        classified = true;
      }
      if (node_origin && is_ontology_kind(node_origin->kind))
        ++class_counts[{key.first, node_origin->source_id}];
      for (const auto& [pattern, n] : facet.summary.uri_patterns) {
        (void)n;
        auto [it, fresh] = pattern_cache.emplace(pattern, std::nullopt);
        if (fresh) it->second = catalog.classify(pattern);
        if (it->second && is_ontology_kind(it->second->kind))
          pattern_evidence.insert({key.first, it->second->source_id});
      }
    }
  }

  std::vector<MismatchRecord> out;
  for (const auto& [key, count] : class_counts)
    if (count > class_threshold || pattern_evidence.contains(key))
      out.push_back({key.first, key.second, count, pattern_evidence.contains(key)});
  for (const auto& key : pattern_evidence)
    if (!class_counts.contains(key)) out.push_back({key.first, key.second, 0, true});
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace ldprof
