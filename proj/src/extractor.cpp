// SPDX-License-Identifier: Apache-2.0
#include "ldprof/extractor.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "ldprof/error.hpp"
#include "ldprof/json_io.hpp"

namespace ldprof {

using nlohmann::json;
using nlohmann::ordered_json;

const char* property_kind_name(PropertyKind k) {
  return k == PropertyKind::object ? "object" : "data";
}

namespace {

PropertyKind property_kind_from(const std::string& name) {
  if (name == "object") return PropertyKind::object;
  if (name == "data") return PropertyKind::data;
  fail(Err::parse, "unknown property kind '" + name + "'");
}

std::string uri_of(const Term& t) { return t.is_iri() ? t.value : t.to_string(); }

void note_error(std::optional<std::string>& slot, std::string msg) {
  if (!slot)
    slot = std::move(msg);
  else
    *slot += "; " + msg;
}

std::optional<long long> parse_count(const Row& row, const char* var) {
  auto it = row.find(var);
  if (it == row.end()) return std::nullopt;
  try {
    size_t used = 0;
    long long n = std::stoll(it->second.value, &used);
    if (used != it->second.value.size() || n < 0) return std::nullopt;
    return n;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// One parsed property-survey row.
struct SurveyRow {
  Term property;
  std::optional<Term> range_class;
  std::optional<Term> val_type;
  long long count = 0;
};

// Assertion values for one (class, property) pair, fetched once and shared by
// that pair's realizations.
struct ValueSample {
  std::vector<Term> values;
  ValueSummary summary;
  std::optional<std::string> error;
};

ValueSample fetch_values(SparqlClient& client, const ExtractorOptions& opts,
                         const EndpointDescriptor& ep, const CapabilityProfile& caps,
                         TemplateParams params, const std::string& property_uri) {
  ValueSample vs;
  params.property_uri = property_uri;
  try {
    QueryResult r = client.execute_template(ep, caps, TemplateId::sq5, params);
    for (const Row& row : r.rows)
      if (auto it = row.find("x"); it != row.end()) vs.values.push_back(it->second);
    vs.summary = summarize(vs.values, opts.categorical_threshold);
  } catch (const Error& e) {
    vs.error = std::string("value sample failed: ") + e.what();
  }
  return vs;
}

PropertyRealization build_realization(const std::string& domain, const std::string& property,
                                      const SurveyRow& row, const ValueSample& vs) {
  PropertyRealization pr;
  pr.domain = domain;
  pr.property = property;
  pr.assertion_count = row.count;
  pr.sample = vs.values;
  pr.summary = vs.summary;
  pr.error = vs.error;

  if (row.range_class && row.range_class->is_iri()) {
    pr.kind = PropertyKind::object;
    pr.range = row.range_class->value;
  } else if (row.range_class && row.range_class->is_blank()) {
    pr.kind = PropertyKind::object;
    pr.anonymous_range = true;
  } else if (row.val_type) {
    pr.kind = PropertyKind::data;
    pr.datatype = uri_of(*row.val_type);
  } else if (!vs.values.empty()) {
    // No range class and no datatype from the survey (the endpoint could not
    // evaluate BIND, or the objects are untyped IRIs): fall back to the
    // dominant term kind in the value sample, preferring IRI on a tie.
    size_t tally[3] = {0, 0, 0};
    for (const Term& t : vs.values) tally[static_cast<size_t>(t.kind)]++;
    size_t best = 0;
    for (size_t i = 1; i < 3; ++i)
      if (tally[i] > tally[best]) best = i;
    if (best == static_cast<size_t>(TermKind::blank)) {
      pr.kind = PropertyKind::object;
      pr.anonymous_range = true;
    } else if (best == static_cast<size_t>(TermKind::iri)) {
      pr.kind = PropertyKind::object;
    } else {
      pr.kind = PropertyKind::data;
    }
  } else {
    pr.kind = PropertyKind::data;
  }
  return pr;
}

void drill_class(SparqlClient& client, const ExtractorOptions& opts, const EndpointDescriptor& ep,
                 const CapabilityProfile& caps, const std::string& graph_uri, ClassProfile& cp,
                 std::vector<PropertyRealization>& out) {
  TemplateParams params;
  params.graph_uri = graph_uri;
  params.concept_uri = cp.uri;
  params.limit = opts.sample_n;

  try {
    QueryResult sample = client.execute_template(ep, caps, TemplateId::sq4, params);
    for (const Row& row : sample.rows)
      if (auto it = row.find("x"); it != row.end()) cp.sample.push_back(it->second);
    cp.summary = summarize(cp.sample, opts.categorical_threshold);
  } catch (const Error& e) {
    note_error(cp.error, std::string("instance sample failed: ") + e.what());
  }

  QueryResult survey;
  try {
    survey = client.execute_template(ep, caps, TemplateId::sq3, params);
  } catch (const Error& e) {
    note_error(cp.error, std::string("property survey failed: ") + e.what());
    return;
  }

  // Bucket the survey rows per property, keeping first-appearance property
  // order and row order within a property, so one value sample serves all of
  // a property's realizations.
  std::vector<std::pair<std::string, std::vector<SurveyRow>>> buckets;
  for (const Row& row : survey.rows) {
    auto p = row.find("p");
    std::optional<long long> n = parse_count(row, "count");
    if (p == row.end() || !n) {
      note_error(cp.error, "property survey returned an unusable row");
      continue;
    }
    SurveyRow sr;
    sr.property = p->second;
    sr.count = *n;
    if (auto it = row.find("c"); it != row.end()) sr.range_class = it->second;
    if (auto it = row.find("valType"); it != row.end()) sr.val_type = it->second;
    std::string key = uri_of(sr.property);
    auto bucket = std::find_if(buckets.begin(), buckets.end(),
                               [&](const auto& b) { return b.first == key; });
    if (bucket == buckets.end()) {
      buckets.emplace_back(key, std::vector<SurveyRow>{});
      bucket = std::prev(buckets.end());
    }
    bucket->second.push_back(std::move(sr));
  }

  for (const auto& [property, rows] : buckets) {
    ValueSample vs = fetch_values(client, opts, ep, caps, params, property);
    for (const SurveyRow& row : rows) out.push_back(build_realization(cp.uri, property, row, vs));
  }
}

} // namespace

SchemaExtractor::SchemaExtractor(SparqlClient& client, ExtractorOptions opts)
    : client_(client), opts_(opts) {}

std::map<std::string, SchemaFragment> SchemaExtractor::extract_endpoint(
    const EndpointDescriptor& ep, const CapabilityProfile& caps) {
  QueryResult graphs;
  try {
    graphs = client_.execute_template(ep, caps, TemplateId::sq1, TemplateParams{});
  } catch (const Error& e) {
    fail(Err::endpoint_unusable, "graph listing failed for " + ep.url + ": " + e.what());
  }
  std::map<std::string, SchemaFragment> out;
  for (const Row& row : graphs.rows) {
    auto it = row.find("g");
    if (it == row.end()) continue;
    std::string g = uri_of(it->second);
    if (out.contains(g)) continue;
    out.emplace(g, extract_graph(ep, caps, g));
  }
  return out;
}

SchemaFragment SchemaExtractor::extract_graph(const EndpointDescriptor& ep,
                                              const CapabilityProfile& caps,
                                              const std::string& graph_uri) {
  SchemaFragment frag;
  frag.graph_uri = graph_uri;

  TemplateParams params;
  params.graph_uri = graph_uri;
  QueryResult listing;
  try {
    listing = client_.execute_template(ep, caps, TemplateId::sq2, params);
  } catch (const Error& e) {
    frag.errors.push_back(std::string("class listing failed: ") + e.what());
    return frag;
  }

  // Rows arrive ordered by count descending, class ascending. Everything past
  // the cap is the long tail of smallest classes; those are recorded but not
  // drilled into, since a class count this large usually means instances were
  // typed against an exhaustive external ontology.
  struct Listed {
    std::string uri;
    long long count;
  };
  std::vector<Listed> listed;
  for (const Row& row : listing.rows) {
    auto c = row.find("Concept");
    std::optional<long long> n = parse_count(row, "cCount");
    if (c == row.end() || !n) {
      frag.errors.push_back("class listing returned an unusable row");
      continue;
    }
    listed.push_back({uri_of(c->second), *n});
  }

  size_t cap = opts_.class_cap < 0 ? 0 : static_cast<size_t>(opts_.class_cap);
  for (size_t i = 0; i < listed.size(); ++i) {
    ClassProfile cp;
    cp.uri = listed[i].uri;
    cp.instance_count = listed[i].count;
    if (i >= cap) {
      cp.mismatch_suspect = true;
      frag.classes.push_back(std::move(cp));
      continue;
    }
    drill_class(client_, opts_, ep, caps, graph_uri, cp, frag.realizations);
    frag.classes.push_back(std::move(cp));
  }
  return frag;
}

std::string fragment_to_json(const SchemaFragment& f, const std::string& source) {
  ordered_json doc;
  doc["format"] = "schema-fragment";
  doc["version"] = 1;
  doc["source"] = source;
  doc["source_uri"] = f.graph_uri;

  ordered_json classes = ordered_json::array();
  for (const ClassProfile& c : f.classes) {
    ordered_json o;
    o["class_uri"] = c.uri;
    o["instance_count"] = c.instance_count;
    ordered_json inst = ordered_json::array();
    for (const Term& t : c.sample) inst.push_back(t.to_string());
    o["sample_instances"] = std::move(inst);
    o["summary"] = summary_to_json(c.summary);
    if (c.mismatch_suspect) o["mismatch_suspect"] = true;
    if (c.error) o["error"] = *c.error;
    classes.push_back(std::move(o));
  }
  doc["classes"] = std::move(classes);

  // Realizations nest under their property, as extraction produces them.
  ordered_json props = ordered_json::array();
  std::map<std::string, size_t> where;
  for (const PropertyRealization& r : f.realizations) {
    auto it = where.find(r.property);
    if (it == where.end()) {
      ordered_json p;
      p["property_uri"] = r.property;
      p["realizations"] = ordered_json::array();
      it = where.emplace(r.property, props.size()).first;
      props.push_back(std::move(p));
    }
    ordered_json o;
    o["kind"] = property_kind_name(r.kind);
    o["domain"] = r.domain;
    if (r.range) o["range"] = *r.range;
    if (r.datatype) o["datatype"] = *r.datatype;
    if (r.anonymous_range) o["anonymous_range"] = true;
    o["assertion_count"] = r.assertion_count;
    ordered_json vals = ordered_json::array();
    for (const Term& t : r.sample) vals.push_back(t.to_string());
    o["sample_assertion_values"] = std::move(vals);
    o["summary"] = summary_to_json(r.summary);
    if (r.error) o["error"] = *r.error;
    props[it->second]["realizations"].push_back(std::move(o));
  }
  doc["properties"] = std::move(props);
  if (!f.errors.empty()) doc["errors"] = f.errors;
  return doc.dump(2) + "\n";
}

SchemaFragment fragment_from_json(const std::string& body, std::string* source) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) fail(Err::parse, "fragment is not valid JSON");
  try {
    if (doc.at("format") != "schema-fragment") fail(Err::parse, "not a schema fragment document");
    if (doc.at("version") != 1) fail(Err::parse, "unsupported fragment version");
    if (source) *source = doc.at("source").get<std::string>();

    SchemaFragment f;
    f.graph_uri = doc.at("source_uri").get<std::string>();
    for (const json& o : doc.at("classes")) {
      ClassProfile c;
      c.uri = o.at("class_uri").get<std::string>();
      c.instance_count = o.at("instance_count").get<long long>();
      for (const json& s : o.at("sample_instances"))
        c.sample.push_back(parse_term_text(s.get<std::string>()));
      c.summary = summary_from_json(o.at("summary"));
      c.mismatch_suspect = o.value("mismatch_suspect", false);
      if (o.contains("error")) c.error = o.at("error").get<std::string>();
      f.classes.push_back(std::move(c));
    }
    for (const json& p : doc.at("properties")) {
      std::string property = p.at("property_uri").get<std::string>();
      for (const json& o : p.at("realizations")) {
        PropertyRealization r;
        r.property = property;
        r.kind = property_kind_from(o.at("kind").get<std::string>());
        r.domain = o.at("domain").get<std::string>();
        if (o.contains("range")) r.range = o.at("range").get<std::string>();
        if (o.contains("datatype")) r.datatype = o.at("datatype").get<std::string>();
        r.anonymous_range = o.value("anonymous_range", false);
        r.assertion_count = o.at("assertion_count").get<long long>();
        for (const json& s : o.at("sample_assertion_values"))
          r.sample.push_back(parse_term_text(s.get<std::string>()));
        r.summary = summary_from_json(o.at("summary"));
        if (o.contains("error")) r.error = o.at("error").get<std::string>();
        f.realizations.push_back(std::move(r));
      }
    }
    if (doc.contains("errors")) f.errors = doc.at("errors").get<std::vector<std::string>>();
    return f;
  } catch (const json::exception& e) {
    fail(Err::parse, std::string("bad fragment document: ") + e.what());
  }
}

} // namespace ldprof
