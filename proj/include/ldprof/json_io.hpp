// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include "ldprof/summary.hpp"

namespace ldprof {

// Shared JSON shapes for the pieces that appear in more than one export
// (schema fragments, the merged schema graph). Keys keep insertion order so
// serialized documents are byte-stable.
nlohmann::ordered_json summary_to_json(const ValueSummary& s);
ValueSummary summary_from_json(const nlohmann::json& o);

} // namespace ldprof
