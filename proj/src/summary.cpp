// SPDX-License-Identifier: Apache-2.0
#include "ldprof/summary.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace ldprof {

std::string namespace_of(const std::string& iri) {
  size_t cut = iri.find_last_of("/#:");
  if (cut == std::string::npos) return iri;
  return iri.substr(0, cut + 1);
}

std::string generalize_uri(const std::string& iri) {
  std::string ns = namespace_of(iri);
  std::string out = ns;
  size_t i = ns.size();
  const size_t n = iri.size();
  while (i < n) {
    unsigned char c = iri[i];
    if (std::isdigit(c)) {
      while (i < n && std::isdigit(static_cast<unsigned char>(iri[i]))) ++i;
      out += "\\d+";
    } else if (std::islower(c)) {
      while (i < n && std::islower(static_cast<unsigned char>(iri[i]))) ++i;
      out += "[a-z]+";
    } else {
      out += iri[i];
      ++i;
    }
  }
  return out;
}

std::string lexical_datatype(const std::string& s) {
  if (s.empty()) return XSD + "string";
  size_t i = 0;
  if (s[i] == '+' || s[i] == '-') ++i;
  size_t digits = 0, frac_digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  bool has_dot = i < s.size() && s[i] == '.';
  if (has_dot) {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++frac_digits;
  }
  bool has_exp = false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E') && (digits || frac_digits)) {
    size_t j = i + 1;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
    size_t exp_digits = 0;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j, ++exp_digits;
    if (exp_digits) {
      has_exp = true;
      i = j;
    }
  }
  if (i == s.size() && (digits || frac_digits)) {
    if (has_dot || has_exp) return XSD + "float";
    return XSD + "integer";
  }
  // yyyy-mm-dd
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    bool ok = true;
    for (size_t k : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
      ok = ok && std::isdigit(static_cast<unsigned char>(s[k]));
    if (ok) return XSD + "date";
  }
  return XSD + "string";
}

ValueSummary summarize(const std::vector<Term>& values, double categorical_threshold) {
  ValueSummary out;
  out.sample_size = values.size();
  if (values.empty()) return out;

  std::set<Term> distinct(values.begin(), values.end());
  out.distinct_count = distinct.size();
  out.is_categorical =
      static_cast<double>(out.distinct_count) <= categorical_threshold * out.sample_size;

  std::map<std::string, size_t> declared;
  std::map<std::string, size_t> lexical;
  std::vector<size_t> lengths;
  lengths.reserve(values.size());
  for (const Term& t : values) {
    lengths.push_back(t.value.size());
    if (t.is_iri()) {
      out.namespaces[namespace_of(t.value)]++;
      out.uri_patterns[generalize_uri(t.value)]++;
    } else if (t.is_literal()) {
      if (t.datatype || t.lang) declared[*datatype_of(t)]++;
      else lexical[lexical_datatype(t.value)]++;
    }
  }

  auto modal = [](const std::map<std::string, size_t>& m) -> std::optional<std::string> {
    std::optional<std::string> best;
    size_t best_n = 0;
    for (const auto& [dt, n] : m) {
      if (n > best_n) best = dt, best_n = n;
    }
    return best;
  };
  out.inferred_datatype = modal(declared);
  if (!out.inferred_datatype) out.inferred_datatype = modal(lexical);

  std::sort(lengths.begin(), lengths.end());
  const size_t n = lengths.size();
  if (n % 2 == 1) out.median_length = static_cast<double>(lengths[n / 2]);
  else out.median_length = (static_cast<double>(lengths[n / 2 - 1]) + lengths[n / 2]) / 2.0;
  return out;
}

} // namespace ldprof
