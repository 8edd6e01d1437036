// spsearch command line: verify, survey, sequences, search, psi, scan.
//
// Exit status: 0 clean, 1 flag or usage error, 2 hard error during work.

#pragma once

#include <iostream>
#include <string>

#include "spsp/numth.hpp"

namespace spsp::cli {

/// Environment variable holding the default shard count for `search`.
inline constexpr const char* kShardsEnv = "SPSP_SHARDS";

int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

/// Decimal, or mantissa-exponent ("1.5e6") when the value is an integer.
/// Throws std::invalid_argument, or std::out_of_range above 2^63.
numth::u64 parse_number(const std::string& s);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

}  // namespace spsp::cli
