#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rulkit {

/// Splits on runs of whitespace; never yields empty tokens.
std::vector<std::string_view> split_ws(std::string_view line);

std::vector<std::string_view> split_char(std::string_view line, char sep);

std::string_view trim(std::string_view s);

/// Strict double parse of a whole token. Returns nullopt on any garbage.
std::optional<double> parse_double(std::string_view token);

/// Strict integer parse; rejects trailing characters.
std::optional<long long> parse_int(std::string_view token);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// FNV-1a 64-bit hash, used for config fingerprints embedded in outputs.
std::uint64_t fnv1a64(std::string_view data);

std::string to_hex(std::uint64_t v);

std::string read_file(const std::string& path);

void write_file(const std::string& path, const std::string& content);

}  // namespace rulkit
