#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tailorsql::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool istarts_with(std::string_view s, std::string_view prefix);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Lexical tokens: maximal runs of word characters (alphanumerics, '_' and any
// non-ASCII byte), every other non-whitespace character standing alone.
// "a,b" -> {"a", ",", "b"}.
std::vector<std::string_view> lexical_tokens(std::string_view s);

// FNV-1a, 64 bit. Stable across platforms; used for document ids and the mock
// embedding's feature hashing.
std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace tailorsql::text
