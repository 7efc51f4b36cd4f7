#pragma once

#include <string>

#include "arccrit/arc.hpp"
#include "arccrit/config.hpp"
#include "arccrit/criterion.hpp"
#include "arccrit/germ.hpp"
#include "arccrit/inner.hpp"
#include "arccrit/series.hpp"

namespace arccrit {

inline constexpr int kReportSchemaVersion = 1;

/// Series literal: a sum of terms `c`, `c*t`, `c*t^k`, `t^(p/q)`, `-3/2*t^(5/2)`,
/// optionally ending in `+ O(t^e)` which sets the truncation. Coefficients and
/// exponents must be written in lowest terms. Throws SpecError with the offset.
PuiseuxSeries parse_series(const std::string& text, Exponent truncation = kDefaultTruncation,
                           std::int64_t max_ramification = kDefaultMaxRamification);

/// Arc literal `(s_1, ..., s_n)`. The arc is flagged distance-parametrized when its
/// squared norm is exactly t^2 up to truncation.
Arc parse_arc(const std::string& text, Exponent truncation = kDefaultTruncation,
              std::int64_t max_ramification = kDefaultMaxRamification);
std::string format_arc(const Arc& arc);

/// Germ spec document. Schema violations throw SpecError naming the JSON pointer of
/// the offending field; syntax errors name line and column.
GermModel parse_germ_spec(const std::string& json_text);
std::string germ_spec_json(const GermModel& g);

/// `builtin:family[:param...]` (e.g. builtin:cusp:3:2, builtin:horn:3/2) or a path
/// to a germ spec file.
GermModel resolve_germ(const std::string& ref);

/// Overrides the fields present in the document on top of `base`; unknown keys are
/// errors. The result is validated.
RunConfig parse_run_config(const std::string& json_text, RunConfig base = {});
std::string run_config_json(const RunConfig& config);
/// Defaults, overridden by the file named in ARCCRIT_CONFIG when set.
RunConfig default_run_config();

std::string inner_estimate_json(const InnerOrderEstimate& e);
std::string report_json(const CriterionReport& r);
/// Versioned, byte-stable under fixed seed and configuration.
std::string verdict_json(const Verdict& v, const RunConfig& config);

} // namespace arccrit
