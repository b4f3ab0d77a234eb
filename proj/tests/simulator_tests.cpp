// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

#include "ldprof/error.hpp"
#include "ldprof/sampling.hpp"
#include "ldprof/simulator.hpp"

using namespace ldprof;

namespace {

const char* kSmallFixture = R"(# two graphs over a toy vocabulary
<http://ex.org/d1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex.org/Drug> <http://ex.org/g1> .
<http://ex.org/d2> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex.org/Drug> <http://ex.org/g1> .
<http://ex.org/t1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://ex.org/Target> <http://ex.org/g1> .

<http://ex.org/d1> <http://ex.org/weight> "180.159" <http://ex.org/g1> .
<http://ex.org/d2> <http://ex.org/weight> "210.5" <http://ex.org/g1> .
<http://ex.org/d1> <http://ex.org/target> <http://ex.org/t1> <http://ex.org/g1> .
<http://ex.org/d2> <http://ex.org/target> <http://ex.org/t1> <http://ex.org/g1> .
<http://ex.org/d1> <http://ex.org/label> "aspirin"@en <http://ex.org/g1> .
<http://ex.org/x1> <http://ex.org/p> "1"^^<http://www.w3.org/2001/XMLSchema#integer> <http://ex.org/g2> .
)";

FixtureStore small_store() {
  std::istringstream in(kSmallFixture);
  return FixtureStore::parse(in, "small");
}

MatchedQuery make_query(TemplateId id, bool fallback = false) {
  MatchedQuery q;
  q.id = id;
  q.fallback = fallback;
  q.params.graph_uri = "http://ex.org/g1";
  q.params.concept_uri = "http://ex.org/Drug";
  q.params.property_uri = "http://ex.org/weight";
  q.params.term_uri = "http://ex.org/d1";
  q.params.annotation_uri = "http://ex.org/label";
  return q;
}

} // namespace

TEST_CASE("fixture parser reads quads with comments and escapes") {
  std::istringstream in(
      "# comment\n"
      "\n"
      "<http://a/s> <http://a/p> \"a \\\"quoted\\\" value\\n\" <http://a/g> .\n"
      "<http://a/s> <http://a/p> \"wert\"@de <http://a/g> .\n"
      "<http://a/s> <http://a/p> \"5\"^^<http://www.w3.org/2001/XMLSchema#integer> <http://a/g>\n"
      "_:b0 <http://a/p> _:b1 <http://a/g> .\n");
  FixtureStore store = FixtureStore::parse(in, "t");
  CHECK(store.quad_count() == 4);
  const auto& g = store.graphs().at("http://a/g");
  CHECK(g.count(Triple{Term::iri("http://a/s"), Term::iri("http://a/p"),
                       Term::lit("a \"quoted\" value\n")}) == 1);
  CHECK(g.count(Triple{Term::iri("http://a/s"), Term::iri("http://a/p"),
                       Term::lit_lang("wert", "de")}) == 1);
  CHECK(g.count(Triple{Term::blank("b0"), Term::iri("http://a/p"), Term::blank("b1")}) == 1);
}

TEST_CASE("fixture parser reports the offending line") {
  auto parse_error = [](const std::string& text) {
    std::istringstream in(text);
    try {
      FixtureStore::parse(in, "bad");
      return std::string();
    } catch (const Error& e) {
      CHECK(e.kind() == Err::parse);
      return std::string(e.what());
    }
  };
  std::string msg = parse_error("<http://a/s> <http://a/p> <http://a/o> <http://a/g> .\nnot a quad\n");
  CHECK(msg.find("bad:2") != std::string::npos);
  CHECK_FALSE(parse_error("\"literal\" <http://a/p> <http://a/o> <http://a/g> .\n").empty());
  CHECK_FALSE(parse_error("<http://a/s> \"lit\" <http://a/o> <http://a/g> .\n").empty());
  CHECK_FALSE(parse_error("<http://a/s> <http://a/p> <http://a/o> _:g .\n").empty());
  CHECK_FALSE(parse_error("<http://a/s> <http://a/p> <http://a/o> <http://a/g> . junk\n").empty());
}

TEST_CASE("duplicate quads collapse") {
  std::istringstream in(
      "<http://a/s> <http://a/p> <http://a/o> <http://a/g> .\n"
      "<http://a/s> <http://a/p> <http://a/o> <http://a/g> .\n");
  CHECK(FixtureStore::parse(in).quad_count() == 1);
}

TEST_CASE("graph listing is sorted and complete") {
  FixtureStore store = small_store();
  QueryResult r = evaluate_template(store, make_query(TemplateId::sq1), 0);
  REQUIRE(r.variables == std::vector<std::string>{"g"});
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].at("g") == Term::iri("http://ex.org/g1"));
  CHECK(r.rows[1].at("g") == Term::iri("http://ex.org/g2"));

  // fallback pages concatenate to the same listing
  MatchedQuery page = make_query(TemplateId::sq1, true);
  page.page_size = 1;
  page.offset = 0;
  QueryResult p0 = evaluate_template(store, page, 0);
  page.offset = 1;
  QueryResult p1 = evaluate_template(store, page, 0);
  page.offset = 2;
  QueryResult p2 = evaluate_template(store, page, 0);
  CHECK(p0.rows.size() == 1);
  CHECK(p1.rows.size() == 1);
  CHECK(p2.rows.empty());
  CHECK(p0.rows[0] == r.rows[0]);
  CHECK(p1.rows[0] == r.rows[1]);
}

TEST_CASE("class counts come back ordered by frequency") {
  FixtureStore store = small_store();
  QueryResult r = evaluate_template(store, make_query(TemplateId::sq2), 0);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].at("Concept") == Term::iri("http://ex.org/Drug"));
  CHECK(r.rows[0].at("cCount") == count_literal(2));
  CHECK(r.rows[1].at("Concept") == Term::iri("http://ex.org/Target"));
  CHECK(r.rows[1].at("cCount") == count_literal(1));
}

TEST_CASE("property groups split on range class and value datatype") {
  FixtureStore store = small_store();
  QueryResult r = evaluate_template(store, make_query(TemplateId::sq3), 0);
  // Expected groups over the two Drug instances:
  //   target -> c=Target (2 assertions, IRI object with a type)
  //   weight -> valType=xsd:string (2 plain literals)
  //   label  -> valType=rdf:langString (1 tagged literal)
  // rdf:type itself is excluded.
  REQUIRE(r.rows.size() == 3);
  auto row_for = [&](const std::string& p) -> const Row& {
    for (const Row& row : r.rows)
      if (row.at("p") == Term::iri("http://ex.org/" + p)) return row;
    static Row none;
    return none;
  };
  const Row& target = row_for("target");
  CHECK(target.at("c") == Term::iri("http://ex.org/Target"));
  CHECK(target.at("count") == count_literal(2));
  CHECK(target.count("valType") == 0);
  const Row& weight = row_for("weight");
  CHECK(weight.count("c") == 0);
  CHECK(weight.at("valType") == Term::iri(XSD + "string"));
  CHECK(weight.at("count") == count_literal(2));
  const Row& label = row_for("label");
  CHECK(label.at("valType") == Term::iri(RDF_LANGSTRING));
  CHECK(label.at("count") == count_literal(1));
  // count-descending order
  CHECK(r.rows[0].at("count") == count_literal(2));
  CHECK(r.rows[1].at("count") == count_literal(2));
  CHECK(r.rows[2].at("count") == count_literal(1));
}

TEST_CASE("instance sample is the seeded draw over sorted instances") {
  FixtureStore store = small_store();
  MatchedQuery q = make_query(TemplateId::sq4);
  q.params.limit = 1;
  const uint64_t run_seed = 99;
  QueryResult r = evaluate_template(store, q, run_seed);
  REQUIRE(r.rows.size() == 1);
  std::vector<Term> pool = {Term::iri("http://ex.org/d1"), Term::iri("http://ex.org/d2")};
  auto expected = seeded_sample(pool, sample_seed(run_seed, TemplateId::sq4, q.params), 1);
  CHECK(r.rows[0].at("x") == expected[0]);
}

TEST_CASE("value sample keeps one entry per assertion") {
  FixtureStore store = small_store();
  MatchedQuery q = make_query(TemplateId::sq5);
  q.params.property_uri = "http://ex.org/target";
  q.params.limit = 10;
  QueryResult r = evaluate_template(store, q, 0);
  // both drugs point at the same target; the sample keeps both assertions
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].at("x") == Term::iri("http://ex.org/t1"));
  CHECK(r.rows[1].at("x") == Term::iri("http://ex.org/t1"));
}

TEST_CASE("annotation lookup scans every graph and dedupes") {
  FixtureStore store = small_store();
  QueryResult r = evaluate_template(store, make_query(TemplateId::label_lookup), 0);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].at("label") == Term::lit_lang("aspirin", "en"));

  MatchedQuery q = make_query(TemplateId::label_lookup);
  q.params.term_uri = "http://ex.org/t1"; // no label anywhere
  CHECK(evaluate_template(store, q, 0).rows.empty());
}

TEST_CASE("aggregate shapes agree with a naive evaluator on random stores") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    FixtureStore store;
    const std::string g = "http://r.org/g";
    std::vector<std::tuple<Term, Term, Term>> triples;
    auto subject = [&](int i) { return Term::iri("http://r.org/s" + std::to_string(i)); };
    auto cls = [&](int i) { return Term::iri("http://r.org/C" + std::to_string(i)); };
    auto prop = [&](int i) { return Term::iri("http://r.org/p" + std::to_string(i)); };
    int n_subjects = 2 + static_cast<int>(rng() % 10);
    for (int i = 0; i < n_subjects; ++i) {
      int n_types = static_cast<int>(rng() % 3);
      for (int t = 0; t < n_types; ++t)
        triples.emplace_back(subject(i), Term::iri(RDF_TYPE), cls(static_cast<int>(rng() % 3)));
      int n_props = static_cast<int>(rng() % 5);
      for (int t = 0; t < n_props; ++t) {
        Term o = rng() % 2 ? subject(static_cast<int>(rng() % n_subjects))
                           : Term::lit(std::to_string(rng() % 5));
        triples.emplace_back(subject(i), prop(static_cast<int>(rng() % 3)), o);
      }
    }
    for (auto& [s, p, o] : triples) store.add(g, Triple{s, p, o});

    MatchedQuery q2 = make_query(TemplateId::sq2);
    q2.params.graph_uri = g;
    QueryResult r2 = evaluate_template(store, q2, 0);

    // naive SQ2: count rdf:type assertions per object over the raw store
    std::map<Term, long long> expect_counts;
    for (const Triple& t : store.graphs().at(g))
      if (t.p == Term::iri(RDF_TYPE)) expect_counts[t.o]++;
    std::map<Term, long long> got_counts;
    long long prev = std::numeric_limits<long long>::max();
    for (const Row& row : r2.rows) {
      long long n = std::stoll(row.at("cCount").value);
      got_counts[row.at("Concept")] = n;
      CHECK(n <= prev); // ordered by count, descending
      prev = n;
    }
    CHECK(got_counts == expect_counts);

    // naive SQ3 for one class: nested loops over raw triples
    MatchedQuery q3 = make_query(TemplateId::sq3);
    q3.params.graph_uri = g;
    q3.params.concept_uri = "http://r.org/C0";
    QueryResult r3 = evaluate_template(store, q3, 0);
    using Key = std::tuple<Term, std::optional<Term>, std::optional<std::string>>;
    std::map<Key, long long> expect_groups;
    const auto& raw = store.graphs().at(g);
    for (const Triple& inst : raw) {
      if (!(inst.p == Term::iri(RDF_TYPE) && inst.o == Term::iri("http://r.org/C0"))) continue;
      for (const Triple& t : raw) {
        if (!(t.s == inst.s) || t.p == Term::iri(RDF_TYPE)) continue;
        std::vector<Term> types;
        for (const Triple& u : raw)
          if (u.s == t.o && u.p == Term::iri(RDF_TYPE)) types.push_back(u.o);
        if (types.empty()) expect_groups[Key{t.p, std::nullopt, datatype_of(t.o)}]++;
        else
          for (const Term& c : types) expect_groups[Key{t.p, c, datatype_of(t.o)}]++;
      }
    }
    std::map<Key, long long> got_groups;
    for (const Row& row : r3.rows) {
      std::optional<Term> c;
      if (auto it = row.find("c"); it != row.end()) c = it->second;
      std::optional<std::string> vt;
      if (auto it = row.find("valType"); it != row.end()) vt = it->second.value;
      got_groups[Key{row.at("p"), c, vt}] = std::stoll(row.at("count").value);
    }
    CHECK(got_groups == expect_groups);
  }
}

TEST_CASE("server answers template queries over http") {
  SimulatorServer server(small_store());
  server.start();
  httplib::Client cli("127.0.0.1", server.port());

  TemplateParams p;
  p.graph_uri = "http://ex.org/g1";
  auto res = cli.Get("/sparql", httplib::Params{{"query", render_canonical(TemplateId::sq2, p)}},
                     httplib::Headers{});
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Content-Type") == "application/sparql-results+json");
  QueryResult r = parse_results(res->body);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].at("Concept") == Term::iri("http://ex.org/Drug"));

  auto missing = cli.Get("/sparql");
  REQUIRE(missing);
  CHECK(missing->status == 400);

  auto unknown = cli.Get("/sparql", httplib::Params{{"query", "SELECT * WHERE { ?s ?p ?o }"}},
                         httplib::Headers{});
  REQUIRE(unknown);
  CHECK(unknown->status == 400);

  auto log = server.request_log();
  REQUIRE(log.size() == 3);
  CHECK(log[0].template_id == "SQ2");
  CHECK(log[0].params.find("g=http://ex.org/g1") != std::string::npos);
  CHECK(log[1].template_id == "-");
  CHECK(log[2].template_id == "-");
  server.stop();
}

TEST_CASE("fault scripts shape responses per template") {
  FaultScript script;
  script.per_template[TemplateId::sq2] = FaultBehavior::http_error(503);
  script.per_template[TemplateId::sq3] = FaultBehavior::reject("BIND");
  script.per_template[TemplateId::sq4] = FaultBehavior::timeouts(1);
  script.stall_ms = 80;
  SimulatorServer server(small_store(), script);
  server.start();
  httplib::Client cli("127.0.0.1", server.port());

  TemplateParams p;
  p.graph_uri = "http://ex.org/g1";
  p.concept_uri = "http://ex.org/Drug";
  p.limit = 1;

  auto sq2 = cli.Get("/sparql", httplib::Params{{"query", render_canonical(TemplateId::sq2, p)}},
                     httplib::Headers{});
  REQUIRE(sq2);
  CHECK(sq2->status == 503);

  auto sq3 = cli.Get("/sparql", httplib::Params{{"query", render_canonical(TemplateId::sq3, p)}},
                     httplib::Headers{});
  REQUIRE(sq3);
  CHECK(sq3->status == 400);
  CHECK(sq3->body.find("BIND") != std::string::npos);

  // the fallback form of the same template has no BIND, so it passes
  auto fb3 = cli.Get("/sparql", httplib::Params{{"query", render_fallback(TemplateId::sq3, p, 0, 100)}},
                     httplib::Headers{});
  REQUIRE(fb3);
  CHECK(fb3->status == 200);

  // first sampled-shape request stalls then fails, second goes through
  auto first = cli.Get("/sparql", httplib::Params{{"query", render_canonical(TemplateId::sq4, p)}},
                       httplib::Headers{});
  REQUIRE(first);
  CHECK(first->status == 503);
  auto second = cli.Get("/sparql", httplib::Params{{"query", render_canonical(TemplateId::sq4, p)}},
                        httplib::Headers{});
  REQUIRE(second);
  CHECK(second->status == 200);

  auto log = server.request_log();
  REQUIRE(log.size() == 5);
  CHECK(log[2].template_id == "SQ3F");
  CHECK(log[2].params.find("page=100;offset=0") != std::string::npos);
  CHECK(log[3].template_id == "SQ4");
  CHECK(log[3].params.find("limit=1") != std::string::npos);
  server.stop();
}

TEST_CASE("request log serializes as tsv with millisecond timestamps") {
  SimulatorServer server(small_store());
  server.start();
  httplib::Client cli("127.0.0.1", server.port());
  cli.Get("/sparql", httplib::Params{{"query", render_canonical(TemplateId::sq1, {})}},
          httplib::Headers{});
  server.stop();

  std::ostringstream out;
  server.write_request_log(out);
  std::string text = out.str();
  REQUIRE_FALSE(text.empty());
  // header plus one entry, two tabs each
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(std::count(text.begin(), text.end(), '\t') == 4);
  CHECK(text.rfind("timestamp_ms\ttemplate_id\tparams\n", 0) == 0);
  CHECK(text.find("\tSQ1\t") != std::string::npos);
}

TEST_CASE("two servers can run side by side on distinct ports") {
  SimulatorServer a(small_store());
  SimulatorServer b(small_store());
  a.start();
  b.start();
  CHECK(a.port() != b.port());
  CHECK(a.url() == "http://127.0.0.1:" + std::to_string(a.port()) + "/sparql");
  httplib::Client ca("127.0.0.1", a.port());
  httplib::Client cb("127.0.0.1", b.port());
  auto ra = ca.Get("/sparql", httplib::Params{{"query", render_canonical(TemplateId::sq1, {})}},
                   httplib::Headers{});
  auto rb = cb.Get("/sparql", httplib::Params{{"query", render_canonical(TemplateId::sq1, {})}},
                   httplib::Headers{});
  REQUIRE(ra);
  REQUIRE(rb);
  CHECK(ra->status == 200);
  CHECK(rb->status == 200);
  a.stop();
  b.stop();
}
