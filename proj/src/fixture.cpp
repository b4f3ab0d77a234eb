// SPDX-License-Identifier: Apache-2.0
#include "ldprof/fixture.hpp"

#include <fstream>
#include <sstream>

#include "ldprof/error.hpp"

namespace ldprof {

namespace {

[[noreturn]] void bad_line(const std::string& name, size_t lineno, const std::string& why) {
  fail(Err::parse, name + ":" + std::to_string(lineno) + ": " + why);
}

void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

Term parse_term(const std::string& s, size_t& i, const std::string& name, size_t lineno) {
  try {
    return parse_term_at(s, i);
  } catch (const Error& e) {
    bad_line(name, lineno, e.what());
  }
}

} // namespace

FixtureStore FixtureStore::parse(std::istream& in, const std::string& name) {
  FixtureStore store;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t i = 0;
    skip_ws(line, i);
    if (i >= line.size() || line[i] == '#') continue;

    Term s = parse_term(line, i, name, lineno);
    skip_ws(line, i);
    Term p = parse_term(line, i, name, lineno);
    skip_ws(line, i);
    Term o = parse_term(line, i, name, lineno);
    skip_ws(line, i);
    Term g = parse_term(line, i, name, lineno);
    skip_ws(line, i);
    if (i < line.size() && line[i] == '.') {
      ++i;
      skip_ws(line, i);
    }
    if (i < line.size()) bad_line(name, lineno, "trailing content");
    if (!s.is_iri() && !s.is_blank()) bad_line(name, lineno, "subject must be IRI or blank node");
    if (!p.is_iri()) bad_line(name, lineno, "predicate must be an IRI");
    if (!g.is_iri()) bad_line(name, lineno, "graph must be an IRI");
    store.add(g.value, Triple{std::move(s), std::move(p), std::move(o)});
  }
  return store;
}

FixtureStore FixtureStore::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::io, "cannot open fixture file " + path);
  return parse(in, path);
}

} // namespace ldprof
