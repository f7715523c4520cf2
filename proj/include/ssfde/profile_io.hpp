#pragma once

// CSV (r,f,q) and JSON sidecar serialization for sampled profiles.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssfde/ode.hpp"

namespace ssfde {

inline constexpr const char* kFormatVersion = "ssfde/1";

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

void write_profile_csv(std::ostream& out, const Profile& profile);

/// Parses the CSV written by write_profile_csv. Throws InvalidArgument on a
/// malformed header or row.
std::vector<Sample> read_profile_csv(std::istream& in);

nlohmann::json to_json(const ProblemParams& params);
nlohmann::json to_json(const IntegratorOptions& opts);

/// Sidecar with params, tolerances, statistics and the termination cause.
nlohmann::json profile_metadata(const Profile& profile);

}  // namespace ssfde
