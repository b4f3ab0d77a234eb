// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ldprof/rdf.hpp"

namespace ldprof {

// Compact profile of a value sample (class instances or property assertion
// values), attached to schema nodes and edges.
struct ValueSummary {
  size_t sample_size = 0;
  size_t distinct_count = 0;
  bool is_categorical = false;
  std::optional<std::string> inferred_datatype;
  std::map<std::string, size_t> namespaces;   // IRI values only
  double median_length = 0.0;                 // characters over lexical forms
  std::map<std::string, size_t> uri_patterns; // generalized IRI shapes

  bool operator==(const ValueSummary&) const = default;
};

// IRI prefix up to and including the rightmost of '/', '#', ':'.
std::string namespace_of(const std::string& iri);

// namespace + local part with digit runs collapsed to \d+ and lowercase runs
// to [a-z]+. The namespace half is kept literal.
std::string generalize_uri(const std::string& iri);

// Lexical shape of a plain literal: xsd integer, float (decimal/exponent) or
// date, falling back to string.
std::string lexical_datatype(const std::string& lexical);

ValueSummary summarize(const std::vector<Term>& values, double categorical_threshold = 0.1);

} // namespace ldprof
