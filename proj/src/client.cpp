// SPDX-License-Identifier: Apache-2.0
#include "ldprof/client.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <thread>
#include <tuple>
#include <vector>

#include "ldprof/error.hpp"
#include "ldprof/sampling.hpp"
#include "ldprof/summary.hpp"

namespace ldprof {

namespace {

struct ParsedUrl {
  std::string host;
  int port = 80;
  std::string path = "/";
};

ParsedUrl parse_url(const std::string& url) {
  const std::string prefix = "http://";
  if (url.rfind(prefix, 0) != 0)
    fail(Err::config, "endpoint URL must start with http://: " + url);
  ParsedUrl out;
  size_t host_start = prefix.size();
  size_t path_start = url.find('/', host_start);
  std::string authority =
      path_start == std::string::npos ? url.substr(host_start) : url.substr(host_start, path_start - host_start);
  if (path_start != std::string::npos) out.path = url.substr(path_start);
  size_t colon = authority.rfind(':');
  if (colon != std::string::npos) {
    out.host = authority.substr(0, colon);
    try {
      out.port = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      fail(Err::config, "bad port in endpoint URL: " + url);
    }
  } else {
    out.host = authority;
  }
  if (out.host.empty()) fail(Err::config, "no host in endpoint URL: " + url);
  return out;
}

enum class AttemptStatus { ok, retry_timeout, retry_network, retry_http, fatal_http };

struct AttemptResult {
  AttemptStatus status;
  int http_status = 0;
  std::string body;
};

AttemptResult attempt_once(const EndpointDescriptor& ep, const std::string& query,
                           size_t get_limit) {
  ParsedUrl u = parse_url(ep.url);
  httplib::Client cli(u.host, u.port);
  const auto timeout = std::chrono::microseconds(static_cast<int64_t>(ep.timeout_s * 1e6));
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);

  httplib::Headers headers = {{"Accept", "application/sparql-results+json"}};
  httplib::Result res;
  if (query.size() < get_limit) {
    httplib::Params params = {{"query", query}};
    res = cli.Get(u.path, params, headers);
  } else {
    httplib::Params params = {{"query", query}};
    res = cli.Post(u.path, headers, params);
  }

  if (!res) {
    switch (res.error()) {
      case httplib::Error::Connection:
      case httplib::Error::BindIPAddress:
      case httplib::Error::SSLConnection:
        return {AttemptStatus::retry_network, 0, ""};
      default:
        return {AttemptStatus::retry_timeout, 0, ""};
    }
  }
  if (res->status >= 200 && res->status < 300) return {AttemptStatus::ok, res->status, res->body};
  if (res->status >= 500) return {AttemptStatus::retry_http, res->status, res->body};
  return {AttemptStatus::fatal_http, res->status, res->body};
}

std::string excerpt(const std::string& body) {
  if (body.size() <= 200) return body;
  return body.substr(0, 200) + "...";
}

} // namespace

struct SparqlClient::EndpointState {
  std::mutex mu;
  std::chrono::steady_clock::time_point last_done{};
  bool has_last = false;
};

SparqlClient::SparqlClient(ClientOptions opts) : opts_(opts) {}
SparqlClient::~SparqlClient() = default;

SparqlClient::EndpointState& SparqlClient::state_for(const std::string& url) {
  std::lock_guard<std::mutex> lock(registry_mu_);
  auto& slot = registry_[url];
  if (!slot) slot = std::make_unique<EndpointState>();
  return *slot;
}

QueryResult SparqlClient::execute(const EndpointDescriptor& ep, const std::string& query) {
  EndpointState& st = state_for(ep.url);
  std::lock_guard<std::mutex> lock(st.mu);

  const int attempts = ep.max_retries + 1;
  AttemptResult last{};
  for (int i = 0; i < attempts; ++i) {
    if (i > 0) {
      int backoff = opts_.retry.base_ms;
      for (int k = 1; k < i; ++k) backoff = std::min(backoff * 2, opts_.retry.cap_ms);
      backoff = std::min(backoff, opts_.retry.cap_ms);
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
    }
    if (st.has_last)
      std::this_thread::sleep_until(st.last_done +
                                    std::chrono::milliseconds(ep.politeness_delay_ms));
    last = attempt_once(ep, query, opts_.get_length_limit);
    st.last_done = std::chrono::steady_clock::now();
    st.has_last = true;

    switch (last.status) {
      case AttemptStatus::ok: return parse_results(last.body);
      case AttemptStatus::fatal_http:
        throw Error(Err::endpoint_error,
                    ep.id + ": HTTP " + std::to_string(last.http_status) + ": " +
                        excerpt(last.body),
                    last.http_status);
      default: break; // retry
    }
  }
  switch (last.status) {
    case AttemptStatus::retry_network:
      fail(Err::network_unreachable,
           ep.id + ": endpoint unreachable after " + std::to_string(attempts) + " attempts");
    case AttemptStatus::retry_http:
      throw Error(Err::endpoint_error,
                  ep.id + ": HTTP " + std::to_string(last.http_status) + " after " +
                      std::to_string(attempts) + " attempts: " + excerpt(last.body),
                  last.http_status);
    default:
      fail(Err::query_timeout,
           ep.id + ": query timed out after " + std::to_string(attempts) + " attempts");
  }
}

SparqlClient::ProbeOutcome SparqlClient::probe(const EndpointDescriptor& ep,
                                               const std::string& query) {
  try {
    execute(ep, query);
    return ProbeOutcome::ok;
  } catch (const Error& e) {
    switch (e.kind()) {
      case Err::endpoint_error:
        return e.http_status() >= 400 && e.http_status() < 500 ? ProbeOutcome::rejected
                                                               : ProbeOutcome::failed;
      case Err::network_unreachable: return ProbeOutcome::unreachable;
      default: return ProbeOutcome::failed;
    }
  }
}

CapabilityProfile SparqlClient::detect_capabilities(const EndpointDescriptor& ep) {
  TemplateParams probe_params;
  probe_params.graph_uri = "urn:capability:probe";
  probe_params.concept_uri = "urn:capability:concept";
  probe_params.property_uri = "urn:capability:property";
  probe_params.limit = 1;

  const bool probe_11 = ep.declared_version != SparqlVersion::v1_0;

  struct ProbeSpec {
    TemplateId id;
    bool run;
  };
  const ProbeSpec specs[] = {
      {TemplateId::sq1, true},      // named graphs
      {TemplateId::sq2, probe_11},  // GROUP BY
      {TemplateId::sq3, probe_11},  // BIND
      {TemplateId::sq4, true},      // ORDER BY RAND()
  };

  std::map<TemplateId, ProbeOutcome> outcomes;
  size_t ran = 0, ok = 0, unreachable = 0;
  for (const ProbeSpec& s : specs) {
    if (!s.run) continue;
    ProbeOutcome out = probe(ep, render_canonical(s.id, probe_params));
    outcomes[s.id] = out;
    ++ran;
    if (out == ProbeOutcome::ok) ++ok;
    if (out == ProbeOutcome::unreachable) ++unreachable;
  }

  if (ok == 0) {
    if (unreachable == ran)
      fail(Err::network_unreachable, ep.id + ": endpoint down, no probe could connect");
    fail(Err::probe_ambiguous, ep.id + ": every capability probe failed");
  }

  CapabilityProfile profile;
  auto flag = [&](TemplateId id) {
    auto it = outcomes.find(id);
    return it != outcomes.end() && it->second == ProbeOutcome::ok;
  };
  profile.supports_named_graphs = flag(TemplateId::sq1);
  profile.supports_group_by = flag(TemplateId::sq2);
  profile.supports_bind = flag(TemplateId::sq3);
  profile.supports_order_by_rand = flag(TemplateId::sq4);
  if (ep.declared_version == SparqlVersion::auto_detect)
    profile.version = (profile.supports_group_by || profile.supports_bind) ? SparqlVersion::v1_1
                                                                           : SparqlVersion::v1_0;
  else
    profile.version = ep.declared_version;
  return normalized(profile);
}

namespace {

std::optional<Term> row_term(const Row& row, const char* var) {
  auto it = row.find(var);
  if (it == row.end()) return std::nullopt;
  return it->second;
}

QueryResult aggregate_sq2(const std::vector<Row>& rows) {
  std::map<Term, long long> counts;
  for (const Row& row : rows) {
    auto cls = row_term(row, "Concept");
    if (cls) counts[*cls]++;
  }
  std::vector<std::pair<Term, long long>> ordered(counts.begin(), counts.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  QueryResult r;
  r.variables = {"Concept", "cCount"};
  for (const auto& [cls, n] : ordered)
    r.rows.push_back(Row{{"Concept", cls}, {"cCount", count_literal(n)}});
  return r;
}

QueryResult aggregate_sq3(const std::vector<Row>& rows) {
  using Key = std::tuple<Term, std::optional<Term>, std::optional<std::string>>;
  std::map<Key, long long> groups;
  for (const Row& row : rows) {
    auto p = row_term(row, "p");
    auto o = row_term(row, "o");
    if (!p || !o) continue;
    groups[Key{*p, row_term(row, "c"), datatype_of(*o)}]++;
  }
  std::vector<std::pair<Key, long long>> ordered(groups.begin(), groups.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  QueryResult r;
  r.variables = {"p", "c", "count", "valType"};
  for (const auto& [key, n] : ordered) {
    const auto& [p, c, val_type] = key;
    Row row{{"p", p}, {"count", count_literal(n)}};
    if (c) row.emplace("c", *c);
    if (val_type) row.emplace("valType", Term::iri(*val_type));
    r.rows.push_back(std::move(row));
  }
  return r;
}

} // namespace

QueryResult SparqlClient::run_fallback(const EndpointDescriptor& ep, TemplateId id,
                                       const TemplateParams& params) {
  const bool sampled = id == TemplateId::sq4 || id == TemplateId::sq5;
  std::vector<Row> collected;
  long offset = 0;
  for (;;) {
    QueryResult page = execute(ep, render_fallback(id, params, offset, opts_.page_size));
    collected.insert(collected.end(), page.rows.begin(), page.rows.end());
    if (static_cast<long>(page.rows.size()) < opts_.page_size) break;
    offset += opts_.page_size;
    if (sampled && static_cast<long>(collected.size()) >= opts_.fallback_fetch_cap) break;
  }

  switch (id) {
    case TemplateId::sq1: {
      QueryResult r;
      r.variables = {"g"};
      r.rows = std::move(collected);
      return r;
    }
    case TemplateId::sq2: return aggregate_sq2(collected);
    case TemplateId::sq3: return aggregate_sq3(collected);
    case TemplateId::sq4:
    case TemplateId::sq5: {
      std::vector<Term> pool;
      pool.reserve(collected.size());
      for (const Row& row : collected)
        if (auto x = row_term(row, "x")) pool.push_back(*x);
      if (static_cast<long>(pool.size()) > opts_.fallback_fetch_cap)
        pool.resize(opts_.fallback_fetch_cap);
      pool = seeded_sample(std::move(pool), sample_seed(opts_.seed, id, params),
                           static_cast<size_t>(params.limit));
      QueryResult r;
      r.variables = {"x"};
      for (Term& t : pool) r.rows.push_back(Row{{"x", std::move(t)}});
      return r;
    }
    default: fail(Err::unsupported_template, "no fallback for this template");
  }
}

QueryResult SparqlClient::execute_template(const EndpointDescriptor& ep,
                                           const CapabilityProfile& caps, TemplateId id,
                                           const TemplateParams& params) {
  if (!caps.supports_named_graphs)
    fail(Err::unsupported_template,
         ep.id + ": endpoint has no named graph support, no usable form for " +
             template_name(id));

  TemplateCaps need = required_capabilities(id);
  const bool canonical_ok = (!need.group_by || caps.supports_group_by) &&
                            (!need.bind || caps.supports_bind) &&
                            (!need.order_by_rand || caps.supports_order_by_rand);

  if (canonical_ok) {
    try {
      return execute(ep, render_canonical(id, params));
    } catch (const Error& e) {
      if (!has_fallback(id)) throw;
      if (e.kind() != Err::query_timeout && e.kind() != Err::endpoint_error) throw;
      return run_fallback(ep, id, params);
    }
  }
  if (!has_fallback(id))
    fail(Err::unsupported_template,
         ep.id + ": capabilities do not allow " + template_name(id));
  return run_fallback(ep, id, params);
}

} // namespace ldprof
