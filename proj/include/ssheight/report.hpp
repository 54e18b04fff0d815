#pragma once

// JSON renderings shared by the command-line tool and the acceptance run.

#include "ssheight/logscale.hpp"
#include "ssheight/ssearch.hpp"
#include "ssheight/verify.hpp"

#include <json.hpp>

namespace ssheight::report {

using json = nlohmann::ordered_json;

inline constexpr const char* tool_version = "0.1.0";
inline constexpr const char* schema_id = "ssheight/run-report/1";

/// {level, value, meaning, slack[, exact]} with the value as a decimal string.
json to_json(const BoundValue& b, int digits = 30);

/// {level, value, meaning} for an upper bound on a large quantity.
json to_json(const Magnitude& m, int digits = 30);

/// {value, precision_bits} for a real known to its working precision.
json real_json(const Real& r, int digits = 30);

json to_json(const ssearch::SupersingularCertificate& c);
json to_json(const verify::SuiteResult& r);

/// Parse errors surface as invalid_argument.
BoundValue bound_from_json(const json& j);

}  // namespace ssheight::report
