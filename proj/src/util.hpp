#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace aida {

/// Whitespace-delimited token count. This is the word metric used for
/// statement limits and memory budgets; crude but deterministic.
int count_words(std::string_view text);

/// Cuts `text` after its first `max_words` words, preserving the original
/// spacing up to the boundary. Returns `text` unchanged if it already fits.
std::string truncate_words(std::string_view text, int max_words);

std::string_view trim(std::string_view text);
std::vector<std::string> split_lines(std::string_view text);
std::string to_lower(std::string_view text);
bool contains_ci(std::string_view haystack, std::string_view needle);

/// Collapses internal newlines to spaces so the result is a single line.
std::string single_line(std::string_view text);

// FNV-1a, 64 bit. Stable across platforms and runs, which std::hash does
// not promise; digests computed with it are safe to persist.
std::uint64_t fnv1a(std::string_view data);
std::string fnv1a_hex(std::string_view data);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Process-wide warning hook. Defaults to stderr; tests swap it to capture
/// clamp/overwrite warnings.
using WarnHandler = std::function<void(const std::string&)>;
void set_warn_handler(WarnHandler handler);
void warn(const std::string& message);

}  // namespace aida
