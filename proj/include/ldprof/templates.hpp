// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

namespace ldprof {

// The five schema-extraction query shapes plus the annotation (label) lookup.
enum class TemplateId { sq1, sq2, sq3, sq4, sq5, label_lookup };

const char* template_name(TemplateId id);

struct TemplateParams {
  std::optional<std::string> graph_uri;
  std::optional<std::string> concept_uri;
  std::optional<std::string> property_uri;
  std::optional<std::string> term_uri;       // label lookup
  std::optional<std::string> annotation_uri; // label lookup
  int limit = 2000;                          // sq4/sq5 sample size
};

struct TemplateCaps {
  bool group_by = false;
  bool bind = false;
  bool order_by_rand = false;
};

// Keywords the canonical form of a template depends on (all forms need named
// graph support on top of this).
TemplateCaps required_capabilities(TemplateId id);

// Canonical query text. Throws Err::missing_param when a placeholder has no
// value. sq4/sq5 honour params.limit; everything else ignores it.
std::string render_canonical(TemplateId id, const TemplateParams& params);

// Paginated plain-SELECT equivalent used when a needed keyword is missing or
// the canonical form timed out. label_lookup has no fallback form.
std::string render_fallback(TemplateId id, const TemplateParams& params, long offset,
                            long page_size);

bool has_fallback(TemplateId id);

// Simulator-side recognition of the shapes above.
struct MatchedQuery {
  TemplateId id = TemplateId::sq1;
  bool fallback = false;
  TemplateParams params;
  long offset = 0;    // fallback forms
  long page_size = 0; // fallback forms
};

std::optional<MatchedQuery> match_query(const std::string& query);

// Seed for the sampled shapes (sq4/sq5), derived identically on both sides of
// the wire from the run seed and the query parameters.
uint64_t sample_seed(uint64_t run_seed, TemplateId id, const TemplateParams& params);

} // namespace ldprof
