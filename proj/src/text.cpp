#include "wander/text.hpp"

#include <boost/locale.hpp>

#include <fmt/format.h>

#include <cctype>

namespace wander::text {

namespace {

const std::locale& utf8_locale()
{
    static const std::locale loc = [] {
        boost::locale::generator gen;
        return gen("en_US.UTF-8");
    }();
    return loc;
}

// General punctuation that shows up in model output: curly quotes, dashes,
// ellipsis, CJK punctuation. Each entry is a UTF-8 sequence.
constexpr std::string_view kUnicodePunct[] = {
    "‘", "’", "“", "”", "–", "—", "…",
    "«", "»", "、", "。", "，", "：", "《", "》",
};

}  // namespace

std::string normalize(std::string_view s)
{
    std::string folded = boost::locale::fold_case(std::string(s), utf8_locale());

    std::string out;
    out.reserve(folded.size());
    bool pending_space = false;
    for (std::size_t i = 0; i < folded.size();) {
        auto c = static_cast<unsigned char>(folded[i]);
        if (c < 0x80) {
            if (std::isspace(c)) {
                pending_space = !out.empty();
            } else if (!std::ispunct(c)) {
                if (pending_space) out.push_back(' ');
                pending_space = false;
                out.push_back(static_cast<char>(c));
            }
            ++i;
            continue;
        }
        bool punct = false;
        for (auto p : kUnicodePunct) {
            if (std::string_view(folded).substr(i, p.size()) == p) {
                i += p.size();
                punct = true;
                break;
            }
        }
        if (punct) continue;
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(folded[i++]);
    }
    return out;
}

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string ascii_lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_blank(std::string_view s)
{
    return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::size_t find_word(std::string_view haystack, std::string_view needle)
{
    if (needle.empty()) return std::string_view::npos;
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string_view::npos) {
        bool left = pos == 0 || haystack[pos - 1] == ' ';
        auto end = pos + needle.size();
        bool right = end == haystack.size() || haystack[end] == ' ';
        if (left && right) return pos;
        ++pos;
    }
    return std::string_view::npos;
}

std::vector<std::string> sentences(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c != '.' && c != '!' && c != '?') continue;
        bool boundary = i + 1 == s.size() || std::isspace(static_cast<unsigned char>(s[i + 1]));
        if (!boundary) continue;
        auto sentence = trim(s.substr(start, i + 1 - start));
        if (!sentence.empty()) out.push_back(std::move(sentence));
        start = i + 1;
    }
    auto rest = trim(s.substr(std::min(start, s.size())));
    if (!rest.empty()) out.push_back(std::move(rest));
    return out;
}

std::string format_point(double x, double y)
{
    return fmt::format("({:.1f}, {:.1f})", x, y);
}

std::string format_point(double x, double y, double z)
{
    return fmt::format("({:.1f}, {:.1f}, {:.1f})", x, y, z);
}

std::string format_list(const std::vector<std::string>& items)
{
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += "'" + items[i] + "'";
    }
    return out + "]";
}

}  // namespace wander::text
