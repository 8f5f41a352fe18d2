#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "polya/urn.hpp"

namespace polya {

// JSON urn files:
//   { "colors": [..], "activities": [..], "initial": [..],
//     "replacements": [ {"deterministic": [..]} | {"atoms": [{"p": .., "v": [..]}, ..]}, .. ] }
// parse_spec validates the result; serialize_spec(parse_spec(s)) parses back
// to a bit-identical spec.
UrnSpec parse_spec(std::string_view json_text);
UrnSpec load_spec(const std::filesystem::path& path);
std::string serialize_spec(const UrnSpec& spec);

/// FNV-1a digest of the canonical serialization, printed in report headers.
std::uint64_t spec_digest(const UrnSpec& spec);
std::string spec_digest_hex(const UrnSpec& spec);

}  // namespace polya
