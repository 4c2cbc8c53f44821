#pragma once

#include "wander/config.hpp"
#include "wander/engine.hpp"

#include <cstdint>
#include <memory>

namespace wander {

// HTTP GET /museum and /healthz plus the /session websocket. One shared
// timer ticks every live session; chat backend calls run on a worker pool
// and their results are handed back to the owning session.
class Server {
public:
    Server(const ServiceConfig& config, const MuseumWorld& world, VisitStats& stats, const Engine& engine);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // Binds (port 0 picks a free one) and starts serving on background
    // threads. Returns the bound port. Throws std::system_error when binding
    // fails.
    std::uint16_t start();

    // Blocks until stop() is called from another thread or a signal.
    void wait();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace wander
