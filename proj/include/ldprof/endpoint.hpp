// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace ldprof {

enum class SparqlVersion { auto_detect, v1_0, v1_1 };

const char* version_name(SparqlVersion v);

struct EndpointDescriptor {
  std::string id;
  std::string url;
  SparqlVersion declared_version = SparqlVersion::auto_detect;
  double timeout_s = 10.0;
  int max_retries = 2;
  int politeness_delay_ms = 200;
};

struct CapabilityProfile {
  SparqlVersion version = SparqlVersion::v1_1;
  bool supports_group_by = true;
  bool supports_bind = true;
  bool supports_order_by_rand = true;
  bool supports_named_graphs = true;

  bool operator==(const CapabilityProfile&) const = default;
};

// A 1.0 endpoint cannot do GROUP BY or BIND; keep the flags consistent.
inline CapabilityProfile normalized(CapabilityProfile p) {
  if (p.version == SparqlVersion::v1_0) {
    p.supports_group_by = false;
    p.supports_bind = false;
  }
  return p;
}

} // namespace ldprof
