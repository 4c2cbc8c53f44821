#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "support/fixtures.hpp"
#include "wander/server.hpp"

#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <doctest.h>

#include <chrono>

using namespace wander;
using nlohmann::json;
namespace beast = boost::beast;
namespace asio = boost::asio;
using tcp = asio::ip::tcp;

namespace {

struct Live {
    ServiceConfig config;
    ScriptedBackend backend = testing::scripted();
    VisitStats stats{testing::museum35()};
    Engine engine{testing::museum35(), &stats, backend, testing::prompts()};
    std::unique_ptr<Server> server;
    std::uint16_t port = 0;

    Live()
    {
        config.port = 0;
        config.tick_rate = 50.0;
        config.speed = 25.0;
        server = std::make_unique<Server>(config, testing::museum35(), stats, engine);
        port = server->start();
    }
    ~Live()
    {
        server->stop();
        server.reset();
    }
};

class Client {
public:
    explicit Client(std::uint16_t port) : ws_(ioc_)
    {
        tcp::resolver resolver(ioc_);
        auto results = resolver.resolve("127.0.0.1", std::to_string(port));
        asio::connect(ws_.next_layer(), results.begin(), results.end());
        ws_.handshake("127.0.0.1", "/session");
    }
    ~Client()
    {
        beast::error_code ec;
        ws_.close(beast::websocket::close_code::normal, ec);
    }

    void send(const json& msg) { ws_.write(asio::buffer(msg.dump())); }

    json read()
    {
        beast::flat_buffer buf;
        ws_.read(buf);
        return json::parse(beast::buffers_to_string(buf.data()));
    }

    // Reads until a message of `type` arrives; everything read is kept.
    json read_until(const std::string& type, std::vector<json>* seen = nullptr, int limit = 5000)
    {
        for (int i = 0; i < limit; ++i) {
            auto m = read();
            if (seen) seen->push_back(m);
            if (m.at("type") == type) return m;
        }
        throw std::runtime_error("no " + type + " message");
    }

private:
    asio::io_context ioc_;
    beast::websocket::stream<tcp::socket> ws_;
};

}  // namespace

TEST_CASE("HTTP endpoints")
{
    Live live;
    httplib::Client http("127.0.0.1", live.port);
    auto health = http.Get("/healthz");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(json::parse(health->body) == json{{"status", "ok"}});

    auto museum = http.Get("/museum");
    REQUIRE(museum);
    CHECK(museum->status == 200);
    CHECK(museum->get_header_value("Content-Type").find("application/json") != std::string::npos);
    auto doc = json::parse(museum->body);
    CHECK(doc.at("artworks").size() == 35);

    auto missing = http.Get("/nope");
    REQUIRE(missing);
    CHECK(missing->status == 404);
}

TEST_CASE("websocket session: hello, feedback, poses and arrival")
{
    Live live;
    Client c(live.port);
    auto hello = c.read();
    CHECK(hello.at("type") == "hello");
    CHECK(hello.at("tick_rate") == 50.0);

    c.send({{"type", "utterance"}, {"seq", 1}, {"text", "Take me to visit the painting named The Birth of Venus."}});
    std::vector<json> seen;
    auto fb = c.read_until("feedback", &seen);
    CHECK(fb.at("re") == 1);
    CHECK(fb.at("bundle").at("combo") == "C5");

    auto arrival = c.read_until("arrival", &seen);
    CHECK(arrival.at("artwork") == "painting 007");
    int poses = 0;
    for (const auto& m : seen) poses += m.at("type") == "pose";
    CHECK(poses > 5);

    c.send({{"type", "utterance"}, {"seq", 2}, {"text", "What are the most interesting details in this painting?"}});
    auto details = c.read_until("feedback");
    CHECK(details.at("bundle").at("combo") == "C3");
    CHECK(details.at("bundle").at("highlights").size() == 3);

    c.send({{"type", "utterance"}, {"seq", 2}, {"text", "again"}});
    auto err = c.read_until("error");
    CHECK(err.at("re") == 2);
}

TEST_CASE("two sessions are independent")
{
    Live live;
    Client a(live.port);
    Client b(live.port);
    auto ha = a.read();
    auto hb = b.read();
    CHECK(ha.at("session") != hb.at("session"));

    a.send({{"type", "utterance"}, {"seq", 1}, {"text", "Show me Picasso paintings first."}});
    b.send({{"type", "utterance"}, {"seq", 1}, {"text", "Is there any abstract painting in this museum?"}});
    CHECK(a.read_until("feedback").at("bundle").at("combo") == "C1");
    CHECK(b.read_until("feedback").at("bundle").at("combo") == "C4");
}
