// SPDX-License-Identifier: Apache-2.0
#include "ldprof/templates.hpp"

#include <algorithm>
#include <array>
#include <regex>
#include <vector>

#include "ldprof/error.hpp"
#include "ldprof/sampling.hpp"

namespace ldprof {

namespace {

// Raw template text. {G} {C} {P} {T} {A} are IRI slots, {N} a number slot.
// The canonical five are pinned byte for byte, tab indents and trailing
// spaces included; the golden tests assert the exact text, so keep editors
// from re-indenting this block.
const char* CANON_SQ1 =
    "SELECT DISTINCT ?g WHERE {\n"
    "\tGRAPH ?g { ?s ?p ?o }\n"
    "}";

const char* CANON_SQ2 =
    "SELECT ?Concept (COUNT (?x) AS ?cCount) WHERE {\n"
    "\tGRAPH <{G}> { ?x rdf:type ?Concept }\n"
    "} GROUP BY ?Concept ORDER BY DESC(?cCount)";

const char* CANON_SQ3 =
    "SELECT DISTINCT ?p ?c (COUNT(?x) AS ?count) ?valType WHERE {\n"
    "\tGRAPH <{G}> { ?x rdf:type <{C}>; ?p ?o . \n"
    "    OPTIONAL {?o rdf:type ?c} . \n"
    "    FILTER(!(?p = 'rdf:type')) . \n"
    "    BIND(DATATYPE(?o) AS ?valType) }\n"
    "} GROUP BY ?p ?c ?valType ORDER BY DESC(?count)";

const char* CANON_SQ4 =
    "SELECT ?x WHERE {\n"
    "\tGRAPH <{G}> { ?x rdf:type <{C}> }\n"
    "} ORDER BY RAND() LIMIT {N}";

const char* CANON_SQ5 =
    "SELECT ?x WHERE {\n"
    "\tGRAPH <{G}> { ?c rdf:type <{C}>; <{P}> ?x }\n"
    "} ORDER BY RAND() LIMIT {N}";

const char* CANON_LQ =
    "SELECT ?label WHERE {\n"
    "\tGRAPH ?g { <{T}> <{A}> ?label }\n"
    "}";

const char* FB_SQ1 =
    "SELECT DISTINCT ?g WHERE {\n"
    "\tGRAPH ?g { ?s ?p ?o }\n"
    "} LIMIT {N} OFFSET {N}";

const char* FB_SQ2 =
    "SELECT ?x ?Concept WHERE {\n"
    "\tGRAPH <{G}> { ?x rdf:type ?Concept }\n"
    "} LIMIT {N} OFFSET {N}";

const char* FB_SQ3 =
    "SELECT ?p ?o ?c WHERE {\n"
    "\tGRAPH <{G}> { ?x rdf:type <{C}>; ?p ?o . \n"
    "    OPTIONAL {?o rdf:type ?c} . \n"
    "    FILTER(!(?p = 'rdf:type')) }\n"
    "} LIMIT {N} OFFSET {N}";

const char* FB_SQ4 =
    "SELECT ?x WHERE {\n"
    "\tGRAPH <{G}> { ?x rdf:type <{C}> }\n"
    "} LIMIT {N} OFFSET {N}";

const char* FB_SQ5 =
    "SELECT ?x WHERE {\n"
    "\tGRAPH <{G}> { ?c rdf:type <{C}>; <{P}> ?x }\n"
    "} LIMIT {N} OFFSET {N}";

// Slot order as the slots appear in each raw string.
enum class Slot { graph, cls, property, term, annot, number };

std::vector<Slot> slots_of(const std::string& raw) {
  std::vector<Slot> out;
  for (size_t i = 0; i + 2 < raw.size(); ++i) {
    if (raw[i] != '{') continue;
    switch (raw[i + 1]) {
      case 'G': out.push_back(Slot::graph); break;
      case 'C': out.push_back(Slot::cls); break;
      case 'P': out.push_back(Slot::property); break;
      case 'T': out.push_back(Slot::term); break;
      case 'A': out.push_back(Slot::annot); break;
      case 'N': out.push_back(Slot::number); break;
      default: continue;
    }
  }
  return out;
}

const std::string& slot_value(Slot s, TemplateId id, const TemplateParams& p,
                              const std::vector<long>& numbers, size_t& num_idx,
                              std::string& scratch) {
  auto need = [&](const std::optional<std::string>& v, const char* what) -> const std::string& {
    if (!v) fail(Err::missing_param, std::string(template_name(id)) + " requires " + what);
    return *v;
  };
  switch (s) {
    case Slot::graph: return need(p.graph_uri, "a graph URI");
    case Slot::cls: return need(p.concept_uri, "a concept URI");
    case Slot::property: return need(p.property_uri, "a property URI");
    case Slot::term: return need(p.term_uri, "a term URI");
    case Slot::annot: return need(p.annotation_uri, "an annotation URI");
    case Slot::number:
      scratch = std::to_string(numbers.at(num_idx++));
      return scratch;
  }
  return scratch;
}

std::string render(const std::string& raw, TemplateId id, const TemplateParams& p,
                   const std::vector<long>& numbers) {
  std::string out;
  out.reserve(raw.size() + 128);
  size_t num_idx = 0;
  std::string scratch;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '{' && i + 2 < raw.size() && raw[i + 2] == '}') {
      Slot s;
      switch (raw[i + 1]) {
        case 'G': s = Slot::graph; break;
        case 'C': s = Slot::cls; break;
        case 'P': s = Slot::property; break;
        case 'T': s = Slot::term; break;
        case 'A': s = Slot::annot; break;
        case 'N': s = Slot::number; break;
        default: out += raw[i]; continue;
      }
      out += slot_value(s, id, p, numbers, num_idx, scratch);
      i += 2;
      continue;
    }
    out += raw[i];
  }
  return out;
}

const std::string& raw_canonical(TemplateId id) {
  static const std::array<std::string, 6> raws = {CANON_SQ1, CANON_SQ2, CANON_SQ3,
                                                  CANON_SQ4, CANON_SQ5, CANON_LQ};
  return raws[static_cast<size_t>(id)];
}

const std::string* raw_fallback(TemplateId id) {
  static const std::array<std::string, 5> raws = {FB_SQ1, FB_SQ2, FB_SQ3, FB_SQ4, FB_SQ5};
  if (id == TemplateId::label_lookup) return nullptr;
  return &raws[static_cast<size_t>(id)];
}

std::string regex_escape(const std::string& s) {
  static const std::string special = "\\^$.|?*+()[]{}";
  std::string out;
  out.reserve(s.size() * 2);
  for (char c : s) {
    if (special.find(c) != std::string::npos) out += '\\';
    out += c;
  }
  return out;
}

// Turn a raw template into a full-match regex: IRI slots capture [^>]*,
// number slots capture digit runs.
std::regex pattern_of(const std::string& raw) {
  std::string pat = regex_escape(raw);
  std::string out;
  for (size_t i = 0; i < pat.size();) {
    if (pat.compare(i, 4, "\\{G\\") == 0 || pat.compare(i, 4, "\\{C\\") == 0 ||
        pat.compare(i, 4, "\\{P\\") == 0 || pat.compare(i, 4, "\\{T\\") == 0 ||
        pat.compare(i, 4, "\\{A\\") == 0) {
      out += "([^>]*)";
      i += 5; // {X} escaped is \{X\}
    } else if (pat.compare(i, 4, "\\{N\\") == 0) {
      out += "(\\d+)";
      i += 5;
    } else {
      out += pat[i];
      ++i;
    }
  }
  return std::regex(out);
}

struct ShapeDef {
  TemplateId id;
  bool fallback;
  const std::string* raw;
};

const std::vector<ShapeDef>& shapes() {
  static const std::vector<ShapeDef> defs = [] {
    std::vector<ShapeDef> v;
    const TemplateId ids[] = {TemplateId::sq1, TemplateId::sq2, TemplateId::sq3,
                              TemplateId::sq4, TemplateId::sq5, TemplateId::label_lookup};
    for (TemplateId id : ids) v.push_back({id, false, &raw_canonical(id)});
    for (TemplateId id : ids) {
      if (const std::string* fb = raw_fallback(id)) v.push_back({id, true, fb});
    }
    return v;
  }();
  return defs;
}

const std::vector<std::regex>& shape_patterns() {
  static const std::vector<std::regex> pats = [] {
    std::vector<std::regex> v;
    for (const ShapeDef& d : shapes()) v.push_back(pattern_of(*d.raw));
    return v;
  }();
  return pats;
}

} // namespace

const char* template_name(TemplateId id) {
  switch (id) {
    case TemplateId::sq1: return "SQ1";
    case TemplateId::sq2: return "SQ2";
    case TemplateId::sq3: return "SQ3";
    case TemplateId::sq4: return "SQ4";
    case TemplateId::sq5: return "SQ5";
    case TemplateId::label_lookup: return "LQ";
  }
  return "?";
}

TemplateCaps required_capabilities(TemplateId id) {
  switch (id) {
    case TemplateId::sq2: return {.group_by = true};
    case TemplateId::sq3: return {.group_by = true, .bind = true};
    case TemplateId::sq4:
    case TemplateId::sq5: return {.order_by_rand = true};
    default: return {};
  }
}

std::string render_canonical(TemplateId id, const TemplateParams& params) {
  std::vector<long> numbers;
  if (id == TemplateId::sq4 || id == TemplateId::sq5) numbers.push_back(params.limit);
  return render(raw_canonical(id), id, params, numbers);
}

bool has_fallback(TemplateId id) { return raw_fallback(id) != nullptr; }

std::string render_fallback(TemplateId id, const TemplateParams& params, long offset,
                            long page_size) {
  const std::string* raw = raw_fallback(id);
  if (!raw) fail(Err::unsupported_template, std::string(template_name(id)) + " has no fallback form");
  return render(*raw, id, params, {page_size, offset});
}

std::optional<MatchedQuery> match_query(const std::string& query) {
  const auto& defs = shapes();
  const auto& pats = shape_patterns();
  for (size_t i = 0; i < defs.size(); ++i) {
    std::smatch m;
    if (!std::regex_match(query, m, pats[i])) continue;
    MatchedQuery out;
    out.id = defs[i].id;
    out.fallback = defs[i].fallback;
    std::vector<long> numbers;
    const auto roles = slots_of(*defs[i].raw);
    for (size_t g = 0; g < roles.size(); ++g) {
      std::string val = m[g + 1].str();
      switch (roles[g]) {
        case Slot::graph: out.params.graph_uri = val; break;
        case Slot::cls: out.params.concept_uri = val; break;
        case Slot::property: out.params.property_uri = val; break;
        case Slot::term: out.params.term_uri = val; break;
        case Slot::annot: out.params.annotation_uri = val; break;
        case Slot::number:
          try {
            numbers.push_back(std::stol(val));
          } catch (const std::exception&) {
            numbers.push_back(-1);
          }
          break;
      }
    }
    if (std::find(numbers.begin(), numbers.end(), -1L) != numbers.end()) continue;
    if (out.fallback) {
      if (numbers.size() == 2) {
        out.page_size = numbers[0];
        out.offset = numbers[1];
      }
    } else if (numbers.size() == 1) {
      out.params.limit = static_cast<int>(numbers[0]);
    }
    return out;
  }
  return std::nullopt;
}

uint64_t sample_seed(uint64_t run_seed, TemplateId id, const TemplateParams& params) {
  auto or_empty = [](const std::optional<std::string>& v) -> std::string_view {
    return v ? std::string_view(*v) : std::string_view();
  };
  // Mix in only the parameters the template's query text carries, so both
  // sides of the wire derive the seed from the same information regardless
  // of what else happens to be set on the params struct.
  if (id == TemplateId::sq5)
    return mix_seed(run_seed, {template_name(id), or_empty(params.graph_uri),
                               or_empty(params.concept_uri), or_empty(params.property_uri)});
  return mix_seed(run_seed, {template_name(id), or_empty(params.graph_uri),
                             or_empty(params.concept_uri)});
}

} // namespace ldprof
