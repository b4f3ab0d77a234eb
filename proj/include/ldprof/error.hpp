// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ldprof {

enum class Err {
  config,
  io,
  parse,
  network_unreachable,
  query_timeout,
  endpoint_error,
  malformed_response,
  missing_param,
  unsupported_template,
  probe_ambiguous,
  endpoint_unusable,
  port_in_use,
  dimension_mismatch,
  empty_label,
  zero_vector,
  degenerate_network,
};

const char* err_name(Err k);

class Error : public std::runtime_error {
public:
  Error(Err kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  Error(Err kind, std::string msg, int http_status)
      : std::runtime_error(std::move(msg)), kind_(kind), http_status_(http_status) {}

  Err kind() const noexcept { return kind_; }
  int http_status() const noexcept { return http_status_; }

private:
  Err kind_;
  int http_status_ = 0;
};

[[noreturn]] inline void fail(Err kind, const std::string& msg) { throw Error(kind, msg); }

} // namespace ldprof
