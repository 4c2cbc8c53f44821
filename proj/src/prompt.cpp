#include "wander/prompt.hpp"

#include "wander/errors.hpp"
#include "wander/text.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace wander {

namespace {

// Calls fn(name, begin, end) for each {{name}} in s.
template <typename Fn>
void for_each_placeholder(std::string_view s, Fn&& fn)
{
    std::size_t pos = 0;
    while ((pos = s.find("{{", pos)) != std::string_view::npos) {
        auto close = s.find("}}", pos + 2);
        if (close == std::string_view::npos) return;
        auto name = text::trim(s.substr(pos + 2, close - pos - 2));
        fn(name, pos, close + 2);
        pos = close + 2;
    }
}

std::string stage_token(std::string_view stage)
{
    std::string out = text::ascii_lower(text::trim(stage));
    std::replace(out.begin(), out.end(), ' ', '-');
    return out;
}

}  // namespace

std::vector<std::string> PromptTemplate::slots() const
{
    std::vector<std::string> out;
    for_each_placeholder(assemble(*this), [&](const std::string& name, std::size_t, std::size_t) {
        if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    });
    return out;
}

PromptTemplate PromptTemplate::for_stage(std::string_view stage) const
{
    PromptTemplate copy = *this;
    const auto want = stage_token(stage);
    std::erase_if(copy.constraints,
                  [&](const StagedConstraint& c) { return !c.stage.empty() && stage_token(c.stage) != want; });
    return copy;
}

std::string assemble(const PromptTemplate& tmpl)
{
    std::vector<std::string> blocks;
    if (!tmpl.perspective.empty()) blocks.push_back(tmpl.perspective);
    if (!tmpl.definitions.empty()) {
        std::string b;
        for (const auto& d : tmpl.definitions) b += (b.empty() ? "" : "\n") + d;
        blocks.push_back(std::move(b));
    }
    if (!tmpl.task_spec.empty()) blocks.push_back(tmpl.task_spec);
    if (!tmpl.constraints.empty()) {
        std::string b = "Constraints:";
        for (const auto& c : tmpl.constraints) b += "\n- " + c.text;
        blocks.push_back(std::move(b));
    }
    if (!tmpl.few_shots.empty()) {
        std::string b = "Examples:";
        for (const auto& shot : tmpl.few_shots) b += "\nInput: " + shot.input + "\nOutput: " + shot.output;
        blocks.push_back(std::move(b));
    }
    if (!tmpl.related.empty()) blocks.push_back("Related information:\n" + tmpl.related);

    std::string out;
    for (const auto& b : blocks) out += (out.empty() ? "" : "\n\n") + b;
    return out;
}

std::string render(const PromptTemplate& tmpl, const SlotMap& slots)
{
    const std::string body = assemble(tmpl);
    std::string out;
    out.reserve(body.size());
    std::size_t last = 0;
    for_each_placeholder(body, [&](const std::string& name, std::size_t begin, std::size_t end) {
        auto it = slots.find(name);
        if (it == slots.end()) throw MissingSlot(name);
        out.append(body, last, begin - last);
        out += it->second;
        last = end;
    });
    out.append(body, last, std::string::npos);
    return out;
}

PromptTemplate parse_template(std::string_view source, std::string name)
{
    PromptTemplate tmpl;
    tmpl.name = std::move(name);

    std::string section;
    std::string perspective, task, related;
    FewShot* shot = nullptr;
    std::string* shot_field = nullptr;
    // Last list item, so indented continuation lines can extend it.
    std::string* item = nullptr;

    auto append_line = [](std::string& dst, const std::string& line) {
        if (!dst.empty()) dst += '\n';
        dst += line;
    };

    std::istringstream in{std::string(source)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line.front() == ';') continue;
        auto trimmed = text::trim(line);
        if (trimmed.size() > 2 && trimmed.front() == '[' && trimmed.back() == ']' &&
            trimmed.find(' ') == std::string::npos) {
            section = trimmed.substr(1, trimmed.size() - 2);
            item = nullptr;
            if (section == "example") {
                tmpl.few_shots.emplace_back();
                shot = &tmpl.few_shots.back();
                shot_field = nullptr;
            }
            if (section != "perspective" && section != "definitions" && section != "task" &&
                section != "constraints" && section != "example" && section != "related")
                throw ParseError("prompt " + tmpl.name + ": unknown section [" + section + "]");
            continue;
        }

        if (section == "perspective") {
            append_line(perspective, line);
        } else if (section == "task") {
            append_line(task, line);
        } else if (section == "related") {
            append_line(related, line);
        } else if (section == "definitions" || section == "constraints") {
            if (trimmed.empty()) continue;
            if (trimmed.rfind("- ", 0) == 0) {
                auto body = trimmed.substr(2);
                if (section == "definitions") {
                    tmpl.definitions.push_back(body);
                    item = &tmpl.definitions.back();
                } else {
                    StagedConstraint c;
                    if (body.rfind('@', 0) == 0) {
                        auto space = body.find(' ');
                        c.stage = body.substr(1, space - 1);
                        body = space == std::string::npos ? "" : text::trim(body.substr(space + 1));
                    }
                    c.text = body;
                    tmpl.constraints.push_back(std::move(c));
                    item = &tmpl.constraints.back().text;
                }
            } else if (item) {
                *item += " " + trimmed;
            } else {
                throw ParseError("prompt " + tmpl.name + ": list item must start with '- '");
            }
        } else if (section == "example") {
            if (trimmed.rfind("Input:", 0) == 0) {
                shot->input = text::trim(trimmed.substr(6));
                shot_field = &shot->input;
            } else if (trimmed.rfind("Output:", 0) == 0) {
                shot->output = text::trim(trimmed.substr(7));
                shot_field = &shot->output;
            } else if (shot_field && !trimmed.empty()) {
                append_line(*shot_field, trimmed);
            }
        } else if (!trimmed.empty()) {
            throw ParseError("prompt " + tmpl.name + ": text outside any section");
        }
    }
    tmpl.perspective = text::trim(perspective);
    tmpl.task_spec = text::trim(task);
    tmpl.related = text::trim(related);
    return tmpl;
}

PromptTemplate load_template(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read prompt template " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_template(buf.str(), path.stem().string());
}

PromptSet load_prompt_set(const std::filesystem::path& dir)
{
    return {
        load_template(dir / "classifier.txt"),
        load_template(dir / "compiler.txt"),
        load_template(dir / "explorer.txt"),
        load_template(dir / "navigator.txt"),
        load_template(dir / "identifier.txt"),
    };
}

}  // namespace wander
