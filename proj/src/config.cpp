#include "wander/config.hpp"

#include "wander/errors.hpp"

#include <cstdlib>
#include <fstream>

namespace wander {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string env(const char* key)
{
    const char* v = std::getenv(key);
    return v ? std::string(v) : std::string{};
}

fs::path resolve(const fs::path& p, const fs::path& base)
{
    return p.is_absolute() ? p : base / p;
}

}  // namespace

ServiceConfig config_from_json(const json& doc, const fs::path& base_dir)
{
    if (!doc.is_object()) throw ParseError("config must be a JSON object");
    ServiceConfig cfg;
    try {
        if (doc.contains("museum")) cfg.museum = resolve(doc["museum"].get<std::string>(), base_dir);
        if (doc.contains("prompts")) cfg.prompts = resolve(doc["prompts"].get<std::string>(), base_dir);
        if (doc.contains("rules")) cfg.rules = resolve(doc["rules"].get<std::string>(), base_dir);
        if (doc.contains("log_dir")) cfg.log_dir = resolve(doc["log_dir"].get<std::string>(), base_dir);
        cfg.address = doc.value("address", cfg.address);
        cfg.port = doc.value("port", cfg.port);
        cfg.backend = doc.value("backend", cfg.backend);
        cfg.base_url = doc.value("base_url", cfg.base_url);
        cfg.model = doc.value("model", cfg.model);
        cfg.speed = doc.value("speed", cfg.speed);
        cfg.tick_rate = doc.value("tick_rate", cfg.tick_rate);
        cfg.workers = doc.value("workers", cfg.workers);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (cfg.backend != "scripted" && cfg.backend != "live") throw PreconditionError("config: backend must be 'scripted' or 'live'");
    if (!(cfg.speed > 0.0)) throw PreconditionError("config: speed must be positive");
    if (!(cfg.tick_rate > 0.0)) throw PreconditionError("config: tick_rate must be positive");
    if (cfg.workers < 1) throw PreconditionError("config: workers must be at least 1");
    return cfg;
}

ServiceConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("config " + path.string() + ": " + e.what());
    }
    return config_from_json(doc, path.parent_path());
}

std::unique_ptr<ChatBackend> make_backend(const ServiceConfig& config)
{
    if (!env("WANDER_LLM_MODE").empty()) return backend_from_env(config.rules);
    if (config.backend == "scripted") return std::make_unique<ScriptedBackend>(ScriptedBackend::from_file(config.rules));

    LiveConfig live;
    live.base_url = !config.base_url.empty() ? config.base_url : env("WANDER_LLM_BASE_URL");
    live.model = !config.model.empty() ? config.model : env("WANDER_LLM_MODEL");
    live.api_key = env("WANDER_LLM_API_KEY");
    if (live.base_url.empty()) live.base_url = "https://api.openai.com/v1";
    if (live.model.empty()) live.model = "gpt-3.5-turbo";
    return std::make_unique<LiveBackend>(std::move(live));
}

}  // namespace wander
