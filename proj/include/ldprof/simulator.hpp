// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ldprof/fixture.hpp"
#include "ldprof/templates.hpp"

namespace ldprof {

struct FaultBehavior {
  enum class Kind { ok, timeout_n_times, http_error, reject_keyword };
  Kind kind = Kind::ok;
  int n = 0;           // timeout_n_times: stall this many requests, then behave
  int code = 500;      // http_error
  std::string keyword; // reject_keyword: 400 if the query contains it

  static FaultBehavior pass() { return {}; }
  static FaultBehavior timeouts(int n) { return {Kind::timeout_n_times, n, 500, ""}; }
  static FaultBehavior http_error(int code) { return {Kind::http_error, 0, code, ""}; }
  static FaultBehavior reject(std::string keyword) {
    return {Kind::reject_keyword, 0, 400, std::move(keyword)};
  }
};

struct FaultScript {
  FaultBehavior default_behavior;
  std::map<TemplateId, FaultBehavior> per_template;
  int latency_ms = 0;
  int stall_ms = 1500; // how long a scripted "timeout" hangs the response
};

struct RequestLogEntry {
  int64_t t_us = 0; // since server start
  std::string template_id;
  std::string params;
};

// Direct evaluation of one recognized query shape over a store; the sampled
// shapes draw through the shared seeded sampler.
QueryResult evaluate_template(const FixtureStore& store, const MatchedQuery& q, uint64_t seed);

// Minimal SPARQL protocol endpoint over a fixture store. Answers only the
// recognized query shapes (HTTP 400 for anything else) and serves one request
// at a time, optionally injecting scripted faults.
class SimulatorServer {
public:
  explicit SimulatorServer(FixtureStore store, FaultScript script = {}, uint64_t seed = 0);
  ~SimulatorServer();

  SimulatorServer(const SimulatorServer&) = delete;
  SimulatorServer& operator=(const SimulatorServer&) = delete;

  // port 0 picks a free ephemeral port. Throws Err::port_in_use.
  void start(int port = 0);
  void stop();

  int port() const;
  std::string url() const; // http://127.0.0.1:<port>/sparql

  std::vector<RequestLogEntry> request_log() const;
  // TSV: timestamp_ms <tab> template_id <tab> params
  void write_request_log(std::ostream& out) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace ldprof
