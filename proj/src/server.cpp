#include "wander/server.hpp"

#include "wander/session_runner.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

#include <atomic>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <mutex>
#include <thread>

namespace wander {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

namespace {

class WsSession;

// Sessions the tick timer visits. Entries expire with their session.
class Registry {
public:
    void add(const std::shared_ptr<WsSession>& s)
    {
        std::lock_guard lock(mu_);
        sessions_.push_back(s);
    }

    std::vector<std::shared_ptr<WsSession>> live()
    {
        std::lock_guard lock(mu_);
        std::vector<std::shared_ptr<WsSession>> out;
        std::erase_if(sessions_, [&](const auto& w) {
            auto s = w.lock();
            if (!s) return true;
            out.push_back(std::move(s));
            return false;
        });
        return out;
    }

private:
    std::mutex mu_;
    std::vector<std::weak_ptr<WsSession>> sessions_;
};

struct Shared {
    const ServiceConfig& config;
    const MuseumWorld& world;
    VisitStats& stats;
    const Engine& engine;
    asio::thread_pool& pool;
    Registry& registry;
    std::string museum_body;
    std::atomic<std::uint64_t> next_id{0};
};

class WsSession : public std::enable_shared_from_this<WsSession> {
public:
    WsSession(tcp::socket&& socket, Shared& shared)
        : ws_(std::move(socket)), shared_(shared)
    {
        const auto id = "s" + std::to_string(++shared_.next_id);
        if (shared_.config.log_dir) {
            std::filesystem::create_directories(*shared_.config.log_dir);
            log_.open(*shared_.config.log_dir / (id + ".jsonl"));
        }
        runner_ = std::make_unique<SessionRunner>(id, shared_.engine, shared_.stats,
                                                  RunnerOptions{shared_.config.tick_rate, shared_.config.speed},
                                                  log_.is_open() ? &log_ : nullptr);
    }

    void run(http::request<http::string_body> req)
    {
        ws_.text(true);
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
    }

    // Called from the tick timer on any thread.
    void schedule_tick()
    {
        asio::post(ws_.get_executor(), [self = shared_from_this()] {
            if (self->closed_) return;
            try {
                self->send(self->runner_->tick());
            } catch (const std::exception& e) {
                spdlog::error("session {}: tick failed: {}", self->runner_->session().id, e.what());
            }
        });
    }

private:
    void on_accept(beast::error_code ec)
    {
        if (ec) {
            spdlog::warn("websocket accept failed: {}", ec.message());
            return;
        }
        spdlog::info("session {} connected", runner_->session().id);
        shared_.registry.add(shared_from_this());
        send({runner_->hello()});
        read();
    }

    void read()
    {
        ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t)
    {
        if (ec) {
            closed_ = true;
            spdlog::info("session {} closed: {}", runner_->session().id, ec.message());
            return;
        }
        const auto raw = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());

        auto accepted = runner_->accept(raw);
        send(accepted.out);
        if (accepted.job) dispatch(std::move(*accepted.job));
        read();
    }

    // The engine runs on the worker pool; its result comes back on this
    // session's strand.
    void dispatch(SessionRunner::Job job)
    {
        asio::post(shared_.pool, [self = shared_from_this(), job = std::move(job)]() mutable {
            std::optional<TurnOutcome> outcome;
            std::string failure;
            try {
                outcome = self->shared_.engine.run_turn(job.snapshot, job.utterance);
            } catch (const std::exception& e) {
                failure = e.what();
            }
            asio::post(self->ws_.get_executor(),
                       [self, job = std::move(job), outcome = std::move(outcome), failure = std::move(failure)] {
                           if (self->closed_) return;
                           self->send(outcome ? self->runner_->complete(job, *outcome)
                                              : self->runner_->fail(job, failure));
                       });
        });
    }

    void send(const std::vector<json>& messages)
    {
        for (const auto& m : messages) queue_.push_back(m.dump());
        if (!writing_) write_next();
    }

    void write_next()
    {
        if (queue_.empty() || closed_) {
            writing_ = false;
            return;
        }
        writing_ = true;
        ws_.async_write(asio::buffer(queue_.front()),
                        beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
    }

    void on_write(beast::error_code ec, std::size_t)
    {
        if (ec) {
            closed_ = true;
            writing_ = false;
            return;
        }
        queue_.pop_front();
        write_next();
    }

    websocket::stream<beast::tcp_stream> ws_;
    Shared& shared_;
    beast::flat_buffer buffer_;
    std::ofstream log_;
    std::unique_ptr<SessionRunner> runner_;
    std::deque<std::string> queue_;
    bool writing_ = false;
    bool closed_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket&& socket, Shared& shared) : stream_(std::move(socket)), shared_(shared) {}

    void run()
    {
        asio::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::read, shared_from_this()));
    }

private:
    void read()
    {
        req_ = {};
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t)
    {
        if (ec == http::error::end_of_stream) {
            stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
            return;
        }
        if (ec) return;

        if (websocket::is_upgrade(req_)) {
            if (req_.target() == "/session") {
                stream_.expires_never();
                std::make_shared<WsSession>(stream_.release_socket(), shared_)->run(std::move(req_));
            }
            return;
        }

        auto res = std::make_shared<http::response<http::string_body>>();
        res->version(req_.version());
        res->keep_alive(req_.keep_alive());
        res->set(http::field::content_type, "application/json");
        if (req_.method() != http::verb::get) {
            res->result(http::status::method_not_allowed);
            res->body() = R"({"error":"method not allowed"})";
        } else if (req_.target() == "/museum") {
            res->result(http::status::ok);
            res->body() = shared_.museum_body;
        } else if (req_.target() == "/healthz") {
            res->result(http::status::ok);
            res->body() = R"({"status":"ok"})";
        } else {
            res->result(http::status::not_found);
            res->body() = R"({"error":"not found"})";
        }
        res->prepare_payload();
        http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code wec, std::size_t) {
            if (wec) return;
            if (!res->keep_alive()) {
                self->stream_.socket().shutdown(tcp::socket::shutdown_send, wec);
                return;
            }
            self->read();
        });
    }

    beast::tcp_stream stream_;
    Shared& shared_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> req_;
};

}  // namespace

struct Server::Impl {
    Impl(const ServiceConfig& config, const MuseumWorld& world, VisitStats& stats, const Engine& engine)
        : config(config), pool(static_cast<std::size_t>(config.workers)),
          shared{config, world, stats, engine, pool, registry, world.to_json().dump(), {}},
          acceptor(ioc), ticker(ioc), signals(ioc, SIGINT, SIGTERM)
    {
    }

    void accept()
    {
        acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
            if (ec) {
                if (ec != asio::error::operation_aborted) spdlog::warn("accept failed: {}", ec.message());
                if (!acceptor.is_open()) return;
            } else {
                std::make_shared<HttpSession>(std::move(socket), shared)->run();
            }
            accept();
        });
    }

    void tick()
    {
        ticker.expires_after(period);
        ticker.async_wait([this](beast::error_code ec) {
            if (ec) return;
            for (auto& s : registry.live()) s->schedule_tick();
            tick();
        });
    }

    const ServiceConfig& config;
    asio::io_context ioc;
    asio::thread_pool pool;
    Registry registry;
    Shared shared;
    tcp::acceptor acceptor;
    asio::steady_timer ticker;
    asio::signal_set signals;
    std::chrono::nanoseconds period{};
    std::vector<std::thread> threads;
    std::mutex done_mu;
    std::condition_variable done_cv;
    bool done = false;
};

Server::Server(const ServiceConfig& config, const MuseumWorld& world, VisitStats& stats, const Engine& engine)
    : impl_(std::make_unique<Impl>(config, world, stats, engine))
{
}

Server::~Server()
{
    stop();
    for (auto& t : impl_->threads)
        if (t.joinable()) t.join();
    impl_->pool.join();
}

std::uint16_t Server::start()
{
    auto& im = *impl_;
    const tcp::endpoint endpoint(asio::ip::make_address(im.config.address), im.config.port);
    im.acceptor.open(endpoint.protocol());
    im.acceptor.set_option(asio::socket_base::reuse_address(true));
    im.acceptor.bind(endpoint);
    im.acceptor.listen(asio::socket_base::max_listen_connections);

    im.period = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::duration<double>(1.0 / im.config.tick_rate));
    im.accept();
    im.tick();
    im.signals.async_wait([this](beast::error_code ec, int) {
        if (!ec) stop();
    });

    for (int i = 0; i < 2; ++i) im.threads.emplace_back([&im] { im.ioc.run(); });
    const auto port = im.acceptor.local_endpoint().port();
    spdlog::info("listening on {}:{}", im.config.address, port);
    return port;
}

void Server::wait()
{
    std::unique_lock lock(impl_->done_mu);
    impl_->done_cv.wait(lock, [&] { return impl_->done; });
}

// Safe from any thread, including the io threads themselves.
void Server::stop()
{
    auto& im = *impl_;
    {
        std::lock_guard lock(im.done_mu);
        if (im.done) return;
        im.done = true;
    }
    im.ioc.stop();
    im.done_cv.notify_all();
}

}  // namespace wander
