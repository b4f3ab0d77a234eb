// SPDX-License-Identifier: Apache-2.0
#include "ldprof/json_io.hpp"

#include "ldprof/error.hpp"

namespace ldprof {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json freq_map_to_json(const std::map<std::string, size_t>& m) {
  ordered_json o = ordered_json::object();
  for (const auto& [k, n] : m) o[k] = n;
  return o;
}

std::map<std::string, size_t> freq_map_from_json(const json& o, const char* what) {
  if (!o.is_object()) fail(Err::parse, std::string(what) + " must be an object");
  std::map<std::string, size_t> m;
  for (const auto& [k, v] : o.items()) {
    if (!v.is_number_unsigned()) fail(Err::parse, std::string(what) + " counts must be unsigned");
    m[k] = v.get<size_t>();
  }
  return m;
}

} // namespace

ordered_json summary_to_json(const ValueSummary& s) {
  ordered_json o;
  o["sample_size"] = s.sample_size;
  o["distinct_count"] = s.distinct_count;
  o["is_categorical"] = s.is_categorical;
  if (s.inferred_datatype) o["inferred_datatype"] = *s.inferred_datatype;
  o["namespaces"] = freq_map_to_json(s.namespaces);
  o["median_length"] = s.median_length;
  o["uri_patterns"] = freq_map_to_json(s.uri_patterns);
  return o;
}

ValueSummary summary_from_json(const json& o) {
  if (!o.is_object()) fail(Err::parse, "summary must be an object");
  ValueSummary s;
  try {
    s.sample_size = o.at("sample_size").get<size_t>();
    s.distinct_count = o.at("distinct_count").get<size_t>();
    s.is_categorical = o.at("is_categorical").get<bool>();
    if (o.contains("inferred_datatype")) s.inferred_datatype = o.at("inferred_datatype").get<std::string>();
    s.namespaces = freq_map_from_json(o.at("namespaces"), "namespaces");
    s.median_length = o.at("median_length").get<double>();
    s.uri_patterns = freq_map_from_json(o.at("uri_patterns"), "uri_patterns");
  } catch (const json::exception& e) {
    fail(Err::parse, std::string("bad summary: ") + e.what());
  }
  return s;
}

} // namespace ldprof
