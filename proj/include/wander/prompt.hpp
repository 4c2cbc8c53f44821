#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wander {

// A constraint line, optionally limited to one tour stage ("beginning",
// "in progress", "ending"). Empty stage means always.
struct StagedConstraint {
    std::string text;
    std::string stage;
};

struct FewShot {
    std::string input;
    std::string output;
};

// Bot prompt in parts. Placeholders are written {{name}} and may appear in
// any part; `related` is the block that carries the live context.
struct PromptTemplate {
    std::string name;
    std::string perspective;
    std::vector<std::string> definitions;
    std::string task_spec;
    std::vector<StagedConstraint> constraints;
    std::vector<FewShot> few_shots;
    std::string related;

    // Placeholders referenced anywhere in the template, in first-use order.
    std::vector<std::string> slots() const;

    // Copy keeping only the constraints that apply at `stage`.
    PromptTemplate for_stage(std::string_view stage) const;
};

using SlotMap = std::map<std::string, std::string>;

// Template text with placeholders left in place.
std::string assemble(const PromptTemplate& tmpl);

// Assembles and fills every placeholder in one pass; slot values are never
// re-expanded. Throws MissingSlot for the first placeholder without a value.
std::string render(const PromptTemplate& tmpl, const SlotMap& slots);

// Parses the sectioned text format used under prompts/:
//
//   [perspective]   free text
//   [definitions]   one "- " item per definition
//   [task]          free text
//   [constraints]   one "- " item each; "- @in-progress ..." limits to a stage
//   [example]       "Input:" / "Output:" pair, repeatable
//   [related]       free text with placeholders
//
// Lines starting with ';' are comments.
PromptTemplate parse_template(std::string_view source, std::string name);
PromptTemplate load_template(const std::filesystem::path& path);

// All of prompts/{classifier,compiler,explorer,navigator,identifier}.txt.
struct PromptSet {
    PromptTemplate classifier;
    PromptTemplate compiler;
    PromptTemplate explorer;
    PromptTemplate navigator;
    PromptTemplate identifier;
};

PromptSet load_prompt_set(const std::filesystem::path& dir);

}  // namespace wander
