#pragma once

#include "wander/gateway.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace wander {

// Server settings. Relative paths in a config file are resolved against the
// file's directory.
struct ServiceConfig {
    std::filesystem::path museum = "fixtures/museum35.json";
    std::filesystem::path prompts = "prompts";
    std::filesystem::path rules = "fixtures/scripted_rules.json";
    std::string address = "127.0.0.1";
    std::uint16_t port = 8080;
    std::string backend = "scripted";  // "scripted" or "live"
    std::string base_url;              // live only; falls back to WANDER_LLM_BASE_URL
    std::string model;                 // live only; falls back to WANDER_LLM_MODEL
    double speed = 1.2;
    double tick_rate = 10.0;
    int workers = 2;  // threads for chat backend calls
    std::optional<std::filesystem::path> log_dir;
};

// Throws ParseError / PreconditionError on bad values.
ServiceConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ServiceConfig load_config(const std::filesystem::path& path);

// WANDER_LLM_MODE, when set, overrides the configured backend mode. The API
// key is only ever read from WANDER_LLM_API_KEY.
std::unique_ptr<ChatBackend> make_backend(const ServiceConfig& config);

}  // namespace wander
