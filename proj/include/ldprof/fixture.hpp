// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>

#include "ldprof/rdf.hpp"

namespace ldprof {

struct Triple {
  Term s, p, o;
  auto operator<=>(const Triple&) const = default;
};

// In-memory quad store backing a simulated endpoint. Triples are kept per
// named graph, deduplicated and in canonical term order.
class FixtureStore {
public:
  void add(const std::string& graph, Triple t) { graphs_[graph].insert(std::move(t)); }

  // Line-based N-Quads-style input: <s> <p> <o|"literal"> <g> .
  // Literals take an optional @lang or ^^<datatype>; blank nodes are _:label.
  // Blank lines and full-line # comments are skipped. Throws Err::parse with
  // the offending line number.
  static FixtureStore load_file(const std::string& path);
  static FixtureStore parse(std::istream& in, const std::string& name = "<input>");

  const std::map<std::string, std::set<Triple>>& graphs() const { return graphs_; }

  size_t quad_count() const {
    size_t n = 0;
    for (const auto& [g, ts] : graphs_) n += ts.size();
    return n;
  }

private:
  std::map<std::string, std::set<Triple>> graphs_;
};

} // namespace ldprof
