#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <list>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "asub/cipher.hpp"
#include "asub/codec.hpp"

// Length-prefixed TCP exchange of binary envelopes.
//
// A frame is a u32 big-endian payload length followed by the payload. The
// server decrypts each request envelope and answers with an envelope holding
// "OK:<plaintext length>", or "ERR:<ERRORCODE>" when the request could not be
// handled. Replies use the request's key transport: auto-derived in-band
// keys, or the shared external keys.
namespace asub::net {

inline constexpr std::size_t kDefaultMaxFrame = 1 << 20;

std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> payload);
/// Exactly one frame. Throws TruncatedInput, TrailingBytes or FrameTooLarge.
std::vector<std::uint8_t> decode_frame(std::span<const std::uint8_t> bytes, std::size_t max_frame = kDefaultMaxFrame);

struct ServerOptions {
    std::string bind_address = "127.0.0.1";
    /// 0 picks an ephemeral port; see Server::port().
    std::uint16_t port = 0;
    CodecConfig config = CodecConfig::paper();
    /// Shared keys for requests that arrive with external key transport.
    std::optional<KeySchedule> external_keys;
    std::size_t max_frame = kDefaultMaxFrame;
    std::chrono::milliseconds io_timeout{5000};
    /// Called with each decrypted plaintext. Calls are serialized.
    std::function<void(const std::string&)> on_message;
    /// Called with a description of each rejected request. Calls are serialized.
    std::function<void(const std::string&)> on_error;
};

/// Decrypts one request payload and builds the reply payload. Never throws
/// for bad input; failures become "ERR:" replies. `plaintext` receives the
/// decrypted message on success.
std::vector<std::uint8_t> handle_request(std::span<const std::uint8_t> payload, const ServerOptions& options,
                                         std::optional<std::string>* plaintext = nullptr);

class Server {
public:
    explicit Server(ServerOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and starts accepting in a background thread. Throws ConnectionFailed.
    void start();
    /// Stops accepting, lets every connection finish its in-flight reply, joins.
    void stop();
    [[nodiscard]] std::uint16_t port() const noexcept { return port_; }

private:
    struct Connection {
        int fd = -1;
        std::thread worker;
        std::atomic<bool> done{false};
    };

    void accept_loop();
    void serve_connection(Connection& conn);
    void reap_finished();
    void report(const std::function<void(const std::string&)>& sink, const std::string& text);

    ServerOptions options_;
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::thread acceptor_;
    std::mutex connections_mutex_;
    std::list<Connection> connections_;
    std::mutex log_mutex_;
};

struct SendOptions {
    CodecConfig config = CodecConfig::paper();
    /// When set, the message is encrypted under these keys and sent without them.
    std::optional<KeySchedule> external_keys;
    std::chrono::milliseconds timeout{5000};
    std::size_t max_frame = kDefaultMaxFrame;
};

/// Encrypts `message`, sends it to "host:port" and returns the decrypted
/// acknowledgment. Throws ConnectionFailed, Timeout or ProtocolError
/// (including when the server answers "ERR:").
std::string send(const std::string& address, std::string_view message, const SendOptions& options = {});

/// Writes `wire` verbatim, then reads one reply frame and returns its payload.
/// Used to inject malformed frames.
std::vector<std::uint8_t> exchange_raw(const std::string& address, std::span<const std::uint8_t> wire,
                                       std::chrono::milliseconds timeout = std::chrono::milliseconds{5000},
                                       std::size_t max_frame = kDefaultMaxFrame);

/// Decrypts a reply payload with the request's transport in mind.
std::string open_reply(std::span<const std::uint8_t> payload, const CodecConfig& config,
                       const std::optional<KeySchedule>& external_keys);

}  // namespace asub::net
