#include "wander/json_repair.hpp"

#include "wander/errors.hpp"
#include "wander/text.hpp"

#include <cctype>

namespace wander {

using nlohmann::json;

namespace repair {

std::string strip_fences(std::string_view raw)
{
    auto open = raw.find("```");
    if (open == std::string_view::npos) return std::string(raw);
    auto body_start = raw.find('\n', open);
    if (body_start == std::string_view::npos) return std::string(raw.substr(open + 3));
    ++body_start;
    auto close = raw.find("```", body_start);
    if (close == std::string_view::npos) return std::string(raw.substr(body_start));
    return std::string(raw.substr(body_start, close - body_start));
}

std::optional<std::string> first_balanced(std::string_view s, char open)
{
    const char close = open == '{' ? '}' : ']';
    auto start = s.find(open);
    if (start == std::string_view::npos) return std::nullopt;
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == open) ++depth;
        else if (c == close && --depth == 0) return std::string(s.substr(start, i - start + 1));
    }
    return std::string(s.substr(start));
}

std::string single_to_double_quotes(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    bool in_double = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_double) {
            out += c;
            if (c == '\\' && i + 1 < s.size()) out += s[++i];
            else if (c == '"') in_double = false;
            continue;
        }
        if (c == '"') {
            in_double = true;
            out += c;
            continue;
        }
        if (c != '\'') {
            out += c;
            continue;
        }
        // A single-quoted string ends at the next quote followed by a JSON
        // delimiter, so apostrophes inside ("Let's") survive.
        std::size_t j = i + 1;
        for (; j < s.size(); ++j) {
            if (s[j] == '\\') {
                ++j;
                continue;
            }
            if (s[j] != '\'') continue;
            std::size_t k = j + 1;
            while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
            if (k == s.size() || s[k] == ',' || s[k] == ':' || s[k] == '}' || s[k] == ']') break;
        }
        if (j >= s.size()) {
            out += c;
            continue;
        }
        out += '"';
        for (std::size_t k = i + 1; k < j; ++k) {
            if (s[k] == '"') out += "\\\"";
            else if (s[k] == '\\' && k + 1 < j && s[k + 1] == '\'') {
                out += '\'';
                ++k;
            } else out += s[k];
        }
        out += '"';
        i = j;
    }
    return out;
}

std::string remove_trailing_commas(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            out += c;
            if (c == '\\' && i + 1 < s.size()) out += s[++i];
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        if (c == ',') {
            std::size_t k = i + 1;
            while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
            if (k < s.size() && (s[k] == '}' || s[k] == ']')) continue;
        }
        out += c;
    }
    return out;
}

std::string python_literals(std::string_view s)
{
    static constexpr std::pair<std::string_view, std::string_view> kMap[] = {
        {"None", "null"}, {"True", "true"}, {"False", "false"}};
    std::string out;
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            out += c;
            if (c == '\\' && i + 1 < s.size()) out += s[++i];
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
            out += c;
            continue;
        }
        bool replaced = false;
        const bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(s[i - 1]));
        for (auto [from, to] : kMap) {
            if (!left_ok || s.substr(i, from.size()) != from) continue;
            auto end = i + from.size();
            if (end < s.size() && std::isalnum(static_cast<unsigned char>(s[end]))) continue;
            out += to;
            i = end - 1;
            replaced = true;
            break;
        }
        if (!replaced) out += c;
    }
    return out;
}

}  // namespace repair

namespace {

std::optional<json> parse_quiet(std::string_view s)
{
    auto j = json::parse(s.begin(), s.end(), nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return j;
}

json extract(std::string_view raw, char open)
{
    const std::string body = repair::strip_fences(raw);
    if (auto whole = parse_quiet(text::trim(body))) {
        if (open == '{' || whole->is_array()) return *whole;
    }

    auto span = repair::first_balanced(body, open);
    if (!span) throw RepairFailed(std::string(raw));
    if (auto j = parse_quiet(*span)) return *j;

    // Repair pass.
    std::string candidate = *span;
    const char close = open == '{' ? '}' : ']';
    auto last = candidate.rfind(close);
    if (last != std::string::npos) candidate.erase(last + 1);
    candidate = repair::single_to_double_quotes(candidate);
    candidate = repair::remove_trailing_commas(candidate);
    candidate = repair::python_literals(candidate);
    // Quote conversion can change where the balanced span ends.
    if (auto rebalanced = repair::first_balanced(candidate, open)) candidate = *rebalanced;
    if (auto j = parse_quiet(candidate)) return *j;
    throw RepairFailed(std::string(raw));
}

}  // namespace

json extract_json(std::string_view raw)
{
    return extract(raw, '{');
}

json extract_json_array(std::string_view raw)
{
    return extract(raw, '[');
}

std::optional<json> try_extract_json(std::string_view raw)
{
    try {
        return extract_json(raw);
    } catch (const RepairFailed&) {
        return std::nullopt;
    }
}

}  // namespace wander
