#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace wander {

// Recovers the JSON object a chat model meant to send:
//   1. strip markdown code fences
//   2. take the whole text if it already parses, else the first balanced {...}
//   3. parse
//   4. on failure repair: drop prose after the last '}', turn single-quoted
//      strings into double-quoted ones, drop trailing commas, map Python
//      None/True/False to JSON literals
//   5. parse again
// Throws RepairFailed carrying the raw text when nothing parses.
nlohmann::json extract_json(std::string_view raw);

// Same pipeline for a top-level list such as ['navigation', 'summary'].
nlohmann::json extract_json_array(std::string_view raw);

// Non-throwing form of extract_json.
std::optional<nlohmann::json> try_extract_json(std::string_view raw);

namespace repair {

std::string strip_fences(std::string_view raw);

// First balanced span opened by `open` ('{' or '['), honoring double-quoted
// strings. Unbalanced input yields the tail from the first `open`.
std::optional<std::string> first_balanced(std::string_view s, char open);

std::string single_to_double_quotes(std::string_view s);
std::string remove_trailing_commas(std::string_view s);
std::string python_literals(std::string_view s);

}  // namespace repair

}  // namespace wander
