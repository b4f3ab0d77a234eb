// SPDX-License-Identifier: Apache-2.0
#include "ldprof/simulator.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <mutex>
#include <ostream>
#include <thread>

#include "ldprof/error.hpp"
#include "ldprof/sampling.hpp"
#include "ldprof/summary.hpp"

namespace ldprof {

namespace {

using TripleSet = std::set<Triple>;
const TripleSet kEmpty;

const TripleSet& graph_of(const FixtureStore& store, const std::string& uri) {
  auto it = store.graphs().find(uri);
  return it == store.graphs().end() ? kEmpty : it->second;
}

Term min_term() { return Term{TermKind::iri, "", {}, {}}; }

// All triples with the given subject.
template <typename Fn>
void for_subject(const TripleSet& g, const Term& s, Fn&& fn) {
  for (auto it = g.lower_bound(Triple{s, min_term(), min_term()}); it != g.end() && it->s == s;
       ++it)
    fn(*it);
}

std::vector<Term> instances_of(const TripleSet& g, const std::string& concept_uri) {
  std::vector<Term> out;
  const Term c = Term::iri(concept_uri);
  for (const Triple& t : g)
    if (t.p.is_iri() && t.p.value == RDF_TYPE && t.o == c) out.push_back(t.s);
  return out; // already in canonical order, distinct
}

std::vector<Term> types_of(const TripleSet& g, const Term& node) {
  std::vector<Term> out;
  if (!node.is_iri() && !node.is_blank()) return out;
  for_subject(g, node, [&](const Triple& t) {
    if (t.p.is_iri() && t.p.value == RDF_TYPE) out.push_back(t.o);
  });
  return out;
}

std::vector<Row> slice(std::vector<Row> rows, long offset, long page) {
  if (offset < 0) offset = 0;
  if (offset >= static_cast<long>(rows.size())) return {};
  rows.erase(rows.begin(), rows.begin() + offset);
  if (page >= 0 && static_cast<long>(rows.size()) > page) rows.resize(page);
  return rows;
}

QueryResult eval_sq1(const FixtureStore& store, const MatchedQuery& q) {
  QueryResult r;
  r.variables = {"g"};
  for (const auto& [uri, triples] : store.graphs()) {
    (void)triples;
    r.rows.push_back(Row{{"g", Term::iri(uri)}});
  }
  if (q.fallback) r.rows = slice(std::move(r.rows), q.offset, q.page_size);
  return r;
}

QueryResult eval_sq2(const FixtureStore& store, const MatchedQuery& q) {
  const TripleSet& g = graph_of(store, *q.params.graph_uri);
  QueryResult r;
  if (q.fallback) {
    r.variables = {"x", "Concept"};
    for (const Triple& t : g)
      if (t.p.is_iri() && t.p.value == RDF_TYPE)
        r.rows.push_back(Row{{"x", t.s}, {"Concept", t.o}});
    std::sort(r.rows.begin(), r.rows.end());
    r.rows = slice(std::move(r.rows), q.offset, q.page_size);
    return r;
  }
  r.variables = {"Concept", "cCount"};
  std::map<Term, long long> counts;
  for (const Triple& t : g)
    if (t.p.is_iri() && t.p.value == RDF_TYPE) counts[t.o]++;
  std::vector<std::pair<Term, long long>> ordered(counts.begin(), counts.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [cls, n] : ordered)
    r.rows.push_back(Row{{"Concept", cls}, {"cCount", count_literal(n)}});
  return r;
}

struct Sq3Solution {
  Term p;
  Term o;
  std::optional<Term> c;
};

std::vector<Sq3Solution> sq3_solutions(const TripleSet& g, const std::string& concept_uri) {
  std::vector<Sq3Solution> out;
  for (const Term& x : instances_of(g, concept_uri)) {
    for_subject(g, x, [&](const Triple& t) {
      if (t.p.is_iri() && t.p.value == RDF_TYPE) return;
      std::vector<Term> cs = types_of(g, t.o);
      if (cs.empty()) out.push_back({t.p, t.o, std::nullopt});
      else
        for (const Term& c : cs) out.push_back({t.p, t.o, c});
    });
  }
  return out;
}

QueryResult eval_sq3(const FixtureStore& store, const MatchedQuery& q) {
  const TripleSet& g = graph_of(store, *q.params.graph_uri);
  std::vector<Sq3Solution> sols = sq3_solutions(g, *q.params.concept_uri);
  QueryResult r;
  if (q.fallback) {
    r.variables = {"p", "o", "c"};
    for (const Sq3Solution& s : sols) {
      Row row{{"p", s.p}, {"o", s.o}};
      if (s.c) row.emplace("c", *s.c);
      r.rows.push_back(std::move(row));
    }
    std::sort(r.rows.begin(), r.rows.end());
    r.rows = slice(std::move(r.rows), q.offset, q.page_size);
    return r;
  }
  r.variables = {"p", "c", "count", "valType"};
  using Key = std::tuple<Term, std::optional<Term>, std::optional<std::string>>;
  std::map<Key, long long> groups;
  for (const Sq3Solution& s : sols) groups[Key{s.p, s.c, datatype_of(s.o)}]++;
  std::vector<std::pair<Key, long long>> ordered(groups.begin(), groups.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& [key, n] : ordered) {
    const auto& [p, c, val_type] = key;
    Row row{{"p", p}, {"count", count_literal(n)}};
    if (c) row.emplace("c", *c);
    if (val_type) row.emplace("valType", Term::iri(*val_type));
    r.rows.push_back(std::move(row));
  }
  return r;
}

QueryResult eval_sq4(const FixtureStore& store, const MatchedQuery& q, uint64_t seed) {
  const TripleSet& g = graph_of(store, *q.params.graph_uri);
  std::vector<Term> pool = instances_of(g, *q.params.concept_uri);
  QueryResult r;
  r.variables = {"x"};
  if (q.fallback) {
    for (const Term& t : pool) r.rows.push_back(Row{{"x", t}});
    r.rows = slice(std::move(r.rows), q.offset, q.page_size);
    return r;
  }
  for (const Term& t :
       seeded_sample(std::move(pool), sample_seed(seed, TemplateId::sq4, q.params),
                     static_cast<size_t>(q.params.limit)))
    r.rows.push_back(Row{{"x", t}});
  return r;
}

QueryResult eval_sq5(const FixtureStore& store, const MatchedQuery& q, uint64_t seed) {
  const TripleSet& g = graph_of(store, *q.params.graph_uri);
  const Term prop = Term::iri(*q.params.property_uri);
  std::vector<Term> pool; // one entry per assertion, duplicates across subjects kept
  for (const Term& x : instances_of(g, *q.params.concept_uri))
    for_subject(g, x, [&](const Triple& t) {
      if (t.p == prop) pool.push_back(t.o);
    });
  std::sort(pool.begin(), pool.end());
  QueryResult r;
  r.variables = {"x"};
  if (q.fallback) {
    for (const Term& t : pool) r.rows.push_back(Row{{"x", t}});
    r.rows = slice(std::move(r.rows), q.offset, q.page_size);
    return r;
  }
  for (const Term& t :
       seeded_sample(std::move(pool), sample_seed(seed, TemplateId::sq5, q.params),
                     static_cast<size_t>(q.params.limit)))
    r.rows.push_back(Row{{"x", t}});
  return r;
}

QueryResult eval_label_lookup(const FixtureStore& store, const MatchedQuery& q) {
  const Term subject = Term::iri(*q.params.term_uri);
  const Term prop = Term::iri(*q.params.annotation_uri);
  std::vector<Term> labels;
  for (const auto& [uri, g] : store.graphs()) {
    (void)uri;
    for_subject(g, subject, [&](const Triple& t) {
      if (t.p == prop && t.o.is_literal()) labels.push_back(t.o);
    });
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  QueryResult r;
  r.variables = {"label"};
  for (const Term& t : labels) r.rows.push_back(Row{{"label", t}});
  return r;
}

} // namespace

QueryResult evaluate_template(const FixtureStore& store, const MatchedQuery& q, uint64_t seed) {
  switch (q.id) {
    case TemplateId::sq1: return eval_sq1(store, q);
    case TemplateId::sq2: return eval_sq2(store, q);
    case TemplateId::sq3: return eval_sq3(store, q);
    case TemplateId::sq4: return eval_sq4(store, q, seed);
    case TemplateId::sq5: return eval_sq5(store, q, seed);
    case TemplateId::label_lookup: return eval_label_lookup(store, q);
  }
  fail(Err::unsupported_template, "unhandled template");
}

struct SimulatorServer::Impl {
  FixtureStore store;
  FaultScript script;
  uint64_t seed;

  httplib::Server svr;
  std::thread thread;
  int port = -1;

  mutable std::mutex mu; // one request at a time; guards log and stall counts
  std::vector<RequestLogEntry> log;
  std::map<TemplateId, int> stalls_done;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  Impl(FixtureStore s, FaultScript f, uint64_t sd)
      : store(std::move(s)), script(std::move(f)), seed(sd) {}

  std::string params_string(const MatchedQuery& q) const {
    std::string out;
    auto add = [&](const char* k, const std::optional<std::string>& v) {
      if (v) out += std::string(out.empty() ? "" : ";") + k + "=" + *v;
    };
    add("g", q.params.graph_uri);
    add("c", q.params.concept_uri);
    add("p", q.params.property_uri);
    add("t", q.params.term_uri);
    add("a", q.params.annotation_uri);
    if (q.fallback) {
      out += (out.empty() ? "" : ";");
      out += "page=" + std::to_string(q.page_size) + ";offset=" + std::to_string(q.offset);
    } else if (q.id == TemplateId::sq4 || q.id == TemplateId::sq5) {
      out += (out.empty() ? "" : ";");
      out += "limit=" + std::to_string(q.params.limit);
    }
    return out.empty() ? "-" : out;
  }

  void handle(const httplib::Request& req, httplib::Response& res) {
    std::lock_guard<std::mutex> lock(mu);

    std::string query;
    if (req.has_param("query")) query = req.get_param_value("query");

    std::optional<MatchedQuery> matched = query.empty() ? std::nullopt : match_query(query);
    RequestLogEntry entry;
    entry.t_us = std::chrono::duration_cast<std::chrono::microseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
    if (matched) {
      entry.template_id = template_name(matched->id);
      if (matched->fallback) entry.template_id += "F";
      entry.params = params_string(*matched);
    } else {
      entry.template_id = "-";
      entry.params = "-";
    }
    log.push_back(entry);

    if (script.latency_ms > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(script.latency_ms));

    if (query.empty()) {
      res.status = 400;
      res.set_content("missing query parameter", "text/plain");
      return;
    }
    if (!matched) {
      res.status = 400;
      res.set_content("unrecognized query shape", "text/plain");
      return;
    }

    FaultBehavior behavior = script.default_behavior;
    if (auto it = script.per_template.find(matched->id); it != script.per_template.end())
      behavior = it->second;

    switch (behavior.kind) {
      case FaultBehavior::Kind::reject_keyword:
        if (!behavior.keyword.empty() && query.find(behavior.keyword) != std::string::npos) {
          res.status = 400;
          res.set_content("keyword not supported: " + behavior.keyword, "text/plain");
          return;
        }
        break;
      case FaultBehavior::Kind::http_error:
        res.status = behavior.code;
        res.set_content("scripted error", "text/plain");
        return;
      case FaultBehavior::Kind::timeout_n_times:
        if (stalls_done[matched->id] < behavior.n) {
          stalls_done[matched->id]++;
          std::this_thread::sleep_for(std::chrono::milliseconds(script.stall_ms));
          res.status = 503;
          res.set_content("scripted stall", "text/plain");
          return;
        }
        break;
      case FaultBehavior::Kind::ok: break;
    }

    try {
      QueryResult result = evaluate_template(store, *matched, seed);
      res.status = 200;
      res.set_content(serialize_results(result), "application/sparql-results+json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(std::string("evaluation failed: ") + e.what(), "text/plain");
    }
  }
};

SimulatorServer::SimulatorServer(FixtureStore store, FaultScript script, uint64_t seed)
    : impl_(std::make_unique<Impl>(std::move(store), std::move(script), seed)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    impl_->handle(req, res);
  };
  impl_->svr.Get("/sparql", handler);
  impl_->svr.Post("/sparql", handler);
}

SimulatorServer::~SimulatorServer() { stop(); }

void SimulatorServer::start(int port) {
  if (port == 0) {
    impl_->port = impl_->svr.bind_to_any_port("127.0.0.1");
    if (impl_->port <= 0) fail(Err::port_in_use, "cannot bind an ephemeral port");
  } else {
    if (!impl_->svr.bind_to_port("127.0.0.1", port))
      fail(Err::port_in_use, "cannot bind port " + std::to_string(port));
    impl_->port = port;
  }
  impl_->thread = std::thread([this] { impl_->svr.listen_after_bind(); });
  impl_->svr.wait_until_ready();
}

void SimulatorServer::stop() {
  if (impl_->thread.joinable()) {
    impl_->svr.stop();
    impl_->thread.join();
  }
}

int SimulatorServer::port() const { return impl_->port; }

std::string SimulatorServer::url() const {
  return "http://127.0.0.1:" + std::to_string(impl_->port) + "/sparql";
}

std::vector<RequestLogEntry> SimulatorServer::request_log() const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  return impl_->log;
}

void SimulatorServer::write_request_log(std::ostream& out) const {
  out << "timestamp_ms\ttemplate_id\tparams\n";
  for (const RequestLogEntry& e : request_log()) {
    out << (e.t_us / 1000) << "." << (e.t_us % 1000 < 100 ? "0" : "")
        << (e.t_us % 1000 < 10 ? "0" : "") << (e.t_us % 1000) << "\t" << e.template_id << "\t"
        << e.params << "\n";
  }
}

} // namespace ldprof
