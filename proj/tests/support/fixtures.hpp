#pragma once

#include "wander/gateway.hpp"
#include "wander/prompt.hpp"
#include "wander/world.hpp"

#include <filesystem>
#include <string>

namespace testing {

inline std::filesystem::path source_dir()
{
    return WANDER_SOURCE_DIR;
}

inline std::filesystem::path fixture(const std::string& name)
{
    return source_dir() / "fixtures" / name;
}

// Loaded once per test binary; the world is immutable.
inline const wander::MuseumWorld& museum35()
{
    static const auto world = wander::load_museum(fixture("museum35.json"));
    return world;
}

inline const wander::PromptSet& prompts()
{
    static const auto set = wander::load_prompt_set(source_dir() / "prompts");
    return set;
}

inline wander::ScriptedBackend scripted()
{
    return wander::ScriptedBackend::from_file(fixture("scripted_rules.json"));
}

// Empty rectangular room with the given artworks; bounds from (0,0).
inline nlohmann::json room(double w, double h, nlohmann::json artworks, nlohmann::json obstacles = nlohmann::json::array(),
                           nlohmann::json spawn = {1.0, 1.0})
{
    return {{"schema", 1},
            {"bounds", {{"w", w}, {"h", h}}},
            {"spawn", spawn},
            {"obstacles", obstacles},
            {"artworks", artworks}};
}

inline nlohmann::json artwork(const std::string& id, const std::string& name, double x, double y, double fx, double fy)
{
    return {{"id", id}, {"name", name}, {"position", {x, y, 1.5}}, {"facing", {fx, fy}}, {"popularity", 1}};
}

}  // namespace testing
