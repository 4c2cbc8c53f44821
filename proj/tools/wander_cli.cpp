// Command-line front end: serve, replay, validate, route.

#include "wander/config.hpp"
#include "wander/engine.hpp"
#include "wander/errors.hpp"
#include "wander/nav.hpp"
#include "wander/server.hpp"
#include "wander/transcript.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace wander;

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitIo = 2;

int cmd_validate(const fs::path& museum)
{
    if (!fs::exists(museum)) {
        std::cerr << "error: cannot read " << museum.string() << '\n';
        return kExitIo;
    }
    try {
        const auto world = load_museum(museum);
        std::cout << world.artworks().size() << " artworks, all reachable\n";
        std::cout << fmt::format("grid {}x{} at {} m, {} blocked cells\n", world.grid().width(), world.grid().height(),
                                 world.grid().resolution(), world.grid().blocked_count());
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "violation: " << e.what() << '\n';
        return kExitViolation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitViolation;
    }
}

int cmd_replay(const fs::path& transcript)
{
    Transcript t;
    try {
        t = load_transcript(transcript);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    try {
        return replay_transcript(t, std::cout).ok() ? 0 : kExitViolation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

int cmd_route(const fs::path& museum, const std::string& from, const std::string& to)
{
    double x = 0.0, y = 0.0;
    if (std::sscanf(from.c_str(), "%lf,%lf", &x, &y) != 2) {
        std::cerr << "error: --from expects X,Y\n";
        return kExitViolation;
    }
    try {
        const auto world = load_museum(museum);
        const auto* art = world.find_artwork(to);
        if (!art) throw UnknownArtwork(to);
        const auto path = plan_path(world, {x, y}, *art);
        std::cout << fmt::format("{} \"{}\": {} waypoints, {:.2f} m ({:.2f} m on the grid)\n", art->id, art->name,
                                 path.waypoints.size(), path.length, path.grid_length);
        for (const auto& p : path.waypoints) std::cout << fmt::format("  ({:.2f}, {:.2f})\n", p.x, p.y);
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitViolation;
    }
}

int cmd_serve(const fs::path& config_path, int port)
{
    try {
        auto config = config_path.empty() ? ServiceConfig{} : load_config(config_path);
        if (port >= 0) config.port = static_cast<std::uint16_t>(port);
        const auto world = load_museum(config.museum);
        VisitStats stats(world);
        const auto prompts = load_prompt_set(config.prompts);
        auto backend = make_backend(config);
        Engine engine(world, &stats, *backend, prompts);
        spdlog::info("{} artworks loaded, {} backend", world.artworks().size(), backend->name());

        Server server(config, world, stats, engine);
        server.start();
        server.wait();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitViolation;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Virtual museum tour guide"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Debug logging");

    auto* serve = app.add_subcommand("serve", "Run the HTTP/websocket server");
    std::string config_path;
    int port = -1;
    serve->add_option("-c,--config", config_path, "JSON config file");
    serve->add_option("-p,--port", port, "Override the configured port");

    auto* replay = app.add_subcommand("replay", "Replay a transcript against the scripted backend");
    std::string transcript;
    replay->add_option("transcript", transcript, "Transcript JSON")->required();

    auto* validate = app.add_subcommand("validate", "Check a museum file");
    std::string museum;
    validate->add_option("museum", museum, "Museum JSON")->required();

    auto* route = app.add_subcommand("route", "Print the path from a point to an artwork");
    std::string from, to, route_museum = "fixtures/museum35.json";
    route->add_option("--from", from, "Start point X,Y")->required();
    route->add_option("--to", to, "Artwork id or name")->required();
    route->add_option("--museum", route_museum, "Museum JSON");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);
    if (*serve) spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

    if (*serve) return cmd_serve(config_path, port);
    if (*replay) return cmd_replay(transcript);
    if (*validate) return cmd_validate(museum);
    return cmd_route(route_museum, from, to);
}
