#include "asub/netdemo.hpp"

#include <mutex>
#include <random>

#include "asub/envelope.hpp"
#include "asub/error.hpp"
#include "doctest.h"

using namespace asub;

namespace {

struct Recorder {
    std::mutex mutex;
    std::vector<std::string> messages;
    std::vector<std::string> errors;

    net::ServerOptions attach(net::ServerOptions options) {
        options.on_message = [this](const std::string& m) {
            std::lock_guard lock(mutex);
            messages.push_back(m);
        };
        options.on_error = [this](const std::string& m) {
            std::lock_guard lock(mutex);
            errors.push_back(m);
        };
        return options;
    }
};

std::string addr(const net::Server& server) { return "127.0.0.1:" + std::to_string(server.port()); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an asub::Error");
    return ErrorCode::InvalidConfig;
}

}  // namespace

TEST_CASE("frame codec") {
    const std::vector<std::uint8_t> payload = {1, 2, 3};
    const auto frame = net::encode_frame(payload);
    CHECK(frame == std::vector<std::uint8_t>{0, 0, 0, 3, 1, 2, 3});
    CHECK(net::decode_frame(frame) == payload);
    CHECK(net::decode_frame(net::encode_frame({})).empty());
    CHECK(code_of([&] { net::decode_frame(std::span(frame).first(5)); }) == ErrorCode::TruncatedInput);
    CHECK(code_of([&] { net::decode_frame(std::span(frame).first(2)); }) == ErrorCode::TruncatedInput);
    auto longer = frame;
    longer.push_back(9);
    CHECK(code_of([&] { net::decode_frame(longer); }) == ErrorCode::TrailingBytes);
    CHECK(code_of([&] { net::decode_frame(frame, 2); }) == ErrorCode::FrameTooLarge);

    std::mt19937_64 rng(41);
    for (int i = 0; i < 2000; ++i) {
        std::vector<std::uint8_t> junk(rng() % 12);
        for (auto& b : junk) b = static_cast<std::uint8_t>(rng());
        try {
            const auto p = net::decode_frame(junk, 64);
            REQUIRE(net::encode_frame(p) == junk);
        } catch (const Error&) {
        }
    }
}

TEST_CASE("handle_request answers OK or ERR without throwing") {
    net::ServerOptions options;
    const auto paper = CodecConfig::paper();
    const auto ks = derive_keys("RESPECTEVERYONE", paper);
    const auto request = encode_binary(Envelope::in_band(encrypt("RESPECTEVERYONE", ks, paper), ks));
    std::optional<std::string> plaintext;
    auto reply = net::handle_request(request, options, &plaintext);
    CHECK(plaintext == "RESPECTEVERYONE");
    CHECK(net::open_reply(reply, paper, std::nullopt) == "OK:15");

    auto corrupt = request;
    corrupt[1] ^= 0x40;
    reply = net::handle_request(corrupt, options, &plaintext);
    CHECK_FALSE(plaintext.has_value());
    CHECK(net::open_reply(reply, paper, std::nullopt) == "ERR:BADMAGIC");

    const auto ext = encode_binary(Envelope::external(encrypt("HI", KeySchedule({5, 6}), paper)));
    reply = net::handle_request(ext, options, &plaintext);
    CHECK(net::open_reply(reply, paper, std::nullopt) == "ERR:PROTOCOLERROR");

    options.external_keys = KeySchedule({5, 6});
    reply = net::handle_request(ext, options, &plaintext);
    CHECK(plaintext == "HI");
    CHECK(decode_binary(reply).key_transport == KeyTransport::external);
    CHECK(net::open_reply(reply, paper, KeySchedule({5, 6})) == "OK:2");
}

TEST_CASE("loopback exchange with in-band keys") {
    Recorder rec;
    net::Server server(rec.attach({}));
    server.start();
    REQUIRE(server.port() != 0);
    CHECK(net::send(addr(server), "RESPECTEVERYONE") == "OK:15");
    CHECK(net::send(addr(server), "") == "OK:0");
    server.stop();
    REQUIRE(rec.messages.size() == 2);
    CHECK(rec.messages[0] == "RESPECTEVERYONE");
    CHECK(rec.messages[1].empty());
}

TEST_CASE("loopback exchange with shared external keys") {
    net::ServerOptions options;
    options.config = CodecConfig::extended();
    options.external_keys = KeySchedule({1056, 1155});
    Recorder rec;
    net::Server server(rec.attach(options));
    server.start();
    net::SendOptions send_options;
    send_options.config = CodecConfig::extended();
    send_options.external_keys = KeySchedule({1056, 1155});
    CHECK(net::send(addr(server), "hello, world", send_options) == "OK:12");
    // Wrong shared keys: the server cannot decode and says so.
    send_options.external_keys = KeySchedule({1, 2});
    CHECK(code_of([&] { net::send(addr(server), "hello", send_options); }) == ErrorCode::ProtocolError);
    server.stop();
    REQUIRE(!rec.messages.empty());
    CHECK(rec.messages[0] == "hello, world");
}

TEST_CASE("server survives malformed and oversized frames") {
    net::ServerOptions options;
    options.max_frame = 64;
    Recorder rec;
    net::Server server(rec.attach(options));
    server.start();
    const auto paper = CodecConfig::paper();

    const std::vector<std::uint8_t> junk = {'n', 'o', 'p', 'e'};
    auto reply = net::exchange_raw(addr(server), net::encode_frame(junk));
    CHECK(net::open_reply(reply, paper, std::nullopt) == "ERR:BADMAGIC");

    const std::vector<std::uint8_t> oversized = {0, 0, 1, 0};
    reply = net::exchange_raw(addr(server), oversized);
    CHECK(net::open_reply(reply, paper, std::nullopt) == "ERR:FRAMETOOLARGE");

    CHECK(net::send(addr(server), "STILLUP") == "OK:7");
    server.stop();
    CHECK(rec.errors.size() >= 2);
}

TEST_CASE("mode mismatch is rejected") {
    net::Server server(net::ServerOptions{});
    server.start();
    net::SendOptions opts;
    opts.config = CodecConfig::extended();
    CHECK(code_of([&] { net::send(addr(server), "abc", opts); }) == ErrorCode::ProtocolError);
}

TEST_CASE("connection failures") {
    std::uint16_t closed_port = 0;
    {
        net::Server probe(net::ServerOptions{});
        probe.start();
        closed_port = probe.port();
    }
    net::SendOptions opts;
    opts.timeout = std::chrono::milliseconds(1000);
    CHECK(code_of([&] { net::send("127.0.0.1:" + std::to_string(closed_port), "X", opts); }) ==
          ErrorCode::ConnectionFailed);
    CHECK(code_of([&] { net::send("no-port-here", "X", opts); }) == ErrorCode::ConnectionFailed);
}

TEST_CASE("concurrent clients") {
    Recorder rec;
    net::Server server(rec.attach({}));
    server.start();
    std::vector<std::thread> clients;
    std::atomic<int> ok{0};
    for (int t = 0; t < 8; ++t) {
        clients.emplace_back([&, t] {
            for (int i = 0; i < 5; ++i) {
                const std::string msg(static_cast<std::size_t>(t + i), static_cast<char>('A' + t));
                if (net::send(addr(server), msg) == "OK:" + std::to_string(msg.size())) ++ok;
            }
        });
    }
    for (auto& c : clients) c.join();
    server.stop();
    CHECK(ok == 40);
    CHECK(rec.messages.size() == 40);
}
