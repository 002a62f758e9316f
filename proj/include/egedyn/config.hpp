#pragma once

#include <string>

#include "egedyn/process.hpp"
#include "egedyn/report.hpp"
#include "egedyn/spectral_stats.hpp"

namespace ege {

inline constexpr const char* kVersion = "0.1.0";

// The canonical configuration is one JSON document holding a global seed and
// one section per subcommand; every tunable lives here so that a single hash
// fingerprints a run. Thread count and output directory are execution
// details, deliberately outside the document (results are independent of
// both).
Json default_config();

// Parses a JSON config file; throws ArgumentError on unreadable/invalid input.
Json load_config_file(const std::string& path);

// Overlays `user` onto `base` recursively. Unknown keys and category
// mismatches (object vs number vs array ...) are rejected — the defaults
// document doubles as the schema.
void merge_config(Json& base, const Json& user, const std::string& path = "");

// Applies one `--set key.path=value` override; the value is parsed as JSON
// with a bare-string fallback. Paths must already exist in the document.
void apply_override(Json& cfg, const std::string& assignment);

// Sorted-key compact dump; the SHA-256 of it identifies the run.
std::string canonical_dump(const Json& cfg);
std::string config_hash(const Json& cfg);

// Typed extraction (validates; throws ArgumentError on bad values).
SimConfig sim_config_from(const Json& cfg);
StatsConfig stats_config_from(const Json& cfg);

}  // namespace ege
