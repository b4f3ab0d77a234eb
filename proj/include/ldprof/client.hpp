// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "ldprof/endpoint.hpp"
#include "ldprof/rdf.hpp"
#include "ldprof/templates.hpp"

namespace ldprof {

struct RetryPolicy {
  int base_ms = 1000; // doubles per attempt, capped
  int cap_ms = 30000;
};

struct ClientOptions {
  uint64_t seed = 0;            // drives client-side subsampling
  RetryPolicy retry;
  long page_size = 10000;       // fallback pagination
  long fallback_fetch_cap = 20000; // max values fetched before subsampling
  size_t get_length_limit = 2000;  // longer queries go as form-encoded POST
};

// SPARQL protocol client. Safe to share across threads; requests to one
// endpoint are serialized and spaced by its politeness delay, different
// endpoints proceed concurrently.
class SparqlClient {
public:
  explicit SparqlClient(ClientOptions opts = {});
  ~SparqlClient();

  SparqlClient(const SparqlClient&) = delete;
  SparqlClient& operator=(const SparqlClient&) = delete;

  // One query over the wire, with retry/backoff. Throws Err::query_timeout,
  // Err::network_unreachable, Err::endpoint_error, Err::malformed_response.
  QueryResult execute(const EndpointDescriptor& ep, const std::string& query);

  // Canonical form when the capability profile allows it (with one fallback
  // attempt if the canonical form fails), paginated fallback otherwise. The
  // result is the same either way.
  QueryResult execute_template(const EndpointDescriptor& ep, const CapabilityProfile& caps,
                               TemplateId id, const TemplateParams& params);

  // Probe the endpoint with the template shapes and record which keywords it
  // accepts. Throws Err::network_unreachable / Err::probe_ambiguous when no
  // probe gets through.
  CapabilityProfile detect_capabilities(const EndpointDescriptor& ep);

  const ClientOptions& options() const { return opts_; }

private:
  struct EndpointState;
  EndpointState& state_for(const std::string& url);

  enum class ProbeOutcome { ok, rejected, unreachable, failed };
  ProbeOutcome probe(const EndpointDescriptor& ep, const std::string& query);

  QueryResult run_fallback(const EndpointDescriptor& ep, TemplateId id,
                           const TemplateParams& params);

  ClientOptions opts_;
  std::mutex registry_mu_;
  std::map<std::string, std::unique_ptr<EndpointState>> registry_;
};

} // namespace ldprof
