#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wander::text {

// Unicode casefold, punctuation stripped, whitespace runs collapsed to one
// space, trimmed. Used wherever model output is matched against names.
std::string normalize(std::string_view s);

std::string trim(std::string_view s);
std::string ascii_lower(std::string_view s);
bool is_blank(std::string_view s);

// Position of `needle` in `haystack` as a whole-word match, or npos.
// Both arguments are expected to be normalized already.
std::size_t find_word(std::string_view haystack, std::string_view needle);

// Splits prose into sentences at ., ! or ? followed by whitespace or end.
// Terminators stay attached to their sentence.
std::vector<std::string> sentences(std::string_view s);

// "(x, y)" with one decimal, the form positions take inside prompts.
std::string format_point(double x, double y);
std::string format_point(double x, double y, double z);

// Python-style list rendering, e.g. ['painting 005', 'painting 003'].
std::string format_list(const std::vector<std::string>& items);

}  // namespace wander::text
