// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ldprof/client.hpp"
#include "ldprof/endpoint.hpp"
#include "ldprof/summary.hpp"

namespace ldprof {

// Profile of one class within a named graph.
struct ClassProfile {
  std::string uri;
  long long instance_count = 0;
  std::vector<Term> sample; // distinct instances, at most sample_n
  ValueSummary summary;
  bool mismatch_suspect = false;    // beyond the class cap; not drilled into
  std::optional<std::string> error; // sub-query failure, profile incomplete

  bool operator==(const ClassProfile&) const = default;
};

enum class PropertyKind { object, data };

const char* property_kind_name(PropertyKind k);

// One (domain class, property, range-or-datatype) group from the property
// survey. Ranges and datatypes are mutually exclusive; an object realization
// whose objects are blank nodes records anonymous_range instead of a range,
// and one whose objects are untyped IRIs records neither.
struct PropertyRealization {
  std::string domain;
  std::string property;
  PropertyKind kind = PropertyKind::data;
  std::optional<std::string> range;
  std::optional<std::string> datatype;
  bool anonymous_range = false;
  long long assertion_count = 0;
  std::vector<Term> sample; // shared across realizations of one (domain, property)
  ValueSummary summary;
  std::optional<std::string> error;

  bool operator==(const PropertyRealization&) const = default;
};

// Everything extracted from one named graph.
struct SchemaFragment {
  std::string graph_uri;
  std::vector<ClassProfile> classes;
  std::vector<PropertyRealization> realizations;
  std::vector<std::string> errors; // graph-level failures

  bool operator==(const SchemaFragment&) const = default;
};

struct ExtractorOptions {
  int sample_n = 2000;
  long class_cap = 10000; // classes beyond this many are flagged, not drilled
  double categorical_threshold = 0.1;
};

// Drives the query templates against one endpoint to produce per-graph schema
// fragments. Sub-query failures degrade to error markers on the affected
// class or realization; only a failing graph listing aborts the endpoint.
class SchemaExtractor {
public:
  explicit SchemaExtractor(SparqlClient& client, ExtractorOptions opts = {});

  // Throws Err::endpoint_unusable when the graph listing and its fallback
  // both fail.
  std::map<std::string, SchemaFragment> extract_endpoint(const EndpointDescriptor& ep,
                                                         const CapabilityProfile& caps);

  SchemaFragment extract_graph(const EndpointDescriptor& ep, const CapabilityProfile& caps,
                               const std::string& graph_uri);

  const ExtractorOptions& options() const { return opts_; }

private:
  SparqlClient& client_;
  ExtractorOptions opts_;
};

// Fragment (de)serialization as a versioned JSON document whose shape follows
// the extraction report layout: source, source URI, classes with sample
// instances, properties with realizations, domains, ranges, and sample
// assertion values. Terms render in their N-Triples form.
std::string fragment_to_json(const SchemaFragment& f, const std::string& source);
SchemaFragment fragment_from_json(const std::string& body, std::string* source = nullptr);

} // namespace ldprof
