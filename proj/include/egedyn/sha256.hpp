#pragma once

#include <string>
#include <string_view>

namespace ege {

// SHA-256 hex digest (FIPS 180-4) of a byte string; used to fingerprint
// canonicalized configurations in run manifests.
std::string sha256_hex(std::string_view data);

}  // namespace ege
