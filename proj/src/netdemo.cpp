#include "asub/netdemo.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <memory>
#include <utility>

#include "asub/envelope.hpp"
#include "asub/error.hpp"

namespace asub::net {

namespace {

using Clock = std::chrono::steady_clock;

class Socket {
public:
    explicit Socket(int fd = -1) noexcept : fd_(fd) {}
    ~Socket() { reset(); }
    Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    Socket& operator=(Socket&& other) noexcept {
        if (this != &other) {
            reset();
            fd_ = std::exchange(other.fd_, -1);
        }
        return *this;
    }
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;

    [[nodiscard]] int get() const noexcept { return fd_; }
    int release() noexcept { return std::exchange(fd_, -1); }
    void reset() noexcept {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }

private:
    int fd_;
};

std::string errno_text() { return std::strerror(errno); }

int remaining_ms(Clock::time_point deadline) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    return left > 0 ? static_cast<int>(left) : 0;
}

// Waits for `events`; false on timeout.
bool wait_for(int fd, short events, Clock::time_point deadline) {
    for (;;) {
        pollfd p{fd, events, 0};
        const int rc = ::poll(&p, 1, remaining_ms(deadline));
        if (rc > 0) return true;
        if (rc == 0) return false;
        if (errno != EINTR) throw Error(ErrorCode::ConnectionFailed, "poll: " + errno_text());
    }
}

void write_all(int fd, std::span<const std::uint8_t> data, Clock::time_point deadline) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        if (!wait_for(fd, POLLOUT, deadline)) throw Error(ErrorCode::Timeout, "write timed out");
        const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR || errno == EAGAIN || errno == EWOULDBLOCK) continue;
            throw Error(ErrorCode::ConnectionFailed, "send: " + errno_text());
        }
        sent += static_cast<std::size_t>(n);
    }
}

// Reads exactly out.size() bytes. Returns false on a clean EOF before the first byte.
bool read_exact(int fd, std::span<std::uint8_t> out, Clock::time_point deadline) {
    std::size_t got = 0;
    while (got < out.size()) {
        if (!wait_for(fd, POLLIN, deadline)) throw Error(ErrorCode::Timeout, "read timed out");
        const ssize_t n = ::recv(fd, out.data() + got, out.size() - got, 0);
        if (n == 0) {
            if (got == 0) return false;
            throw Error(ErrorCode::ProtocolError, "connection closed inside a frame");
        }
        if (n < 0) {
            if (errno == EINTR || errno == EAGAIN || errno == EWOULDBLOCK) continue;
            throw Error(ErrorCode::ConnectionFailed, "recv: " + errno_text());
        }
        got += static_cast<std::size_t>(n);
    }
    return true;
}

std::uint32_t load_u32(const std::uint8_t* p) noexcept {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

// Reads one frame's payload. std::nullopt on clean EOF between frames.
std::optional<std::vector<std::uint8_t>> read_frame(int fd, std::size_t max_frame, Clock::time_point deadline) {
    std::array<std::uint8_t, 4> header{};
    if (!read_exact(fd, header, deadline)) return std::nullopt;
    const std::uint32_t length = load_u32(header.data());
    if (length > max_frame) {
        throw Error(ErrorCode::FrameTooLarge,
                    "frame of " + std::to_string(length) + " bytes exceeds limit " + std::to_string(max_frame));
    }
    std::vector<std::uint8_t> payload(length);
    if (length > 0 && !read_exact(fd, payload, deadline)) {
        throw Error(ErrorCode::ProtocolError, "connection closed inside a frame");
    }
    return payload;
}

std::pair<std::string, std::string> split_address(const std::string& address) {
    const auto colon = address.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == address.size()) {
        throw Error(ErrorCode::ConnectionFailed, "address must be HOST:PORT, got '" + address + "'");
    }
    std::string host = address.substr(0, colon);
    if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
    return {host, address.substr(colon + 1)};
}

Socket connect_to(const std::string& address, Clock::time_point deadline) {
    const auto [host, port] = split_address(address);
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    if (const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &found); rc != 0) {
        throw Error(ErrorCode::ConnectionFailed, "resolve " + address + ": " + ::gai_strerror(rc));
    }
    std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> list(found, &::freeaddrinfo);
    std::string last_error = "no addresses";
    for (addrinfo* ai = found; ai != nullptr; ai = ai->ai_next) {
        Socket sock(::socket(ai->ai_family, ai->ai_socktype | SOCK_NONBLOCK | SOCK_CLOEXEC, ai->ai_protocol));
        if (sock.get() < 0) {
            last_error = errno_text();
            continue;
        }
        if (::connect(sock.get(), ai->ai_addr, ai->ai_addrlen) == 0) return sock;
        if (errno != EINPROGRESS) {
            last_error = errno_text();
            continue;
        }
        if (!wait_for(sock.get(), POLLOUT, deadline)) throw Error(ErrorCode::Timeout, "connect to " + address + " timed out");
        int err = 0;
        socklen_t len = sizeof(err);
        ::getsockopt(sock.get(), SOL_SOCKET, SO_ERROR, &err, &len);
        if (err == 0) return sock;
        last_error = std::strerror(err);
    }
    throw Error(ErrorCode::ConnectionFailed, "connect to " + address + ": " + last_error);
}

std::string upper_name(ErrorCode code) {
    std::string name{to_string(code)};
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    return name;
}

std::vector<std::uint8_t> seal(std::string_view text, const CodecConfig& config, const std::optional<KeySchedule>& keys) {
    if (keys) return encode_binary(Envelope::external(encrypt(text, *keys, config)));
    const KeySchedule derived = derive_keys(text, config);
    return encode_binary(Envelope::in_band(encrypt(text, derived, config), derived));
}

}  // namespace

std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> payload) {
    if (payload.size() > 0xFFFFFFFFu) throw Error(ErrorCode::FrameTooLarge, "payload exceeds 32-bit length");
    std::vector<std::uint8_t> out;
    out.reserve(4 + payload.size());
    const auto n = static_cast<std::uint32_t>(payload.size());
    out.push_back(static_cast<std::uint8_t>(n >> 24));
    out.push_back(static_cast<std::uint8_t>(n >> 16));
    out.push_back(static_cast<std::uint8_t>(n >> 8));
    out.push_back(static_cast<std::uint8_t>(n));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

std::vector<std::uint8_t> decode_frame(std::span<const std::uint8_t> bytes, std::size_t max_frame) {
    if (bytes.size() < 4) throw Error(ErrorCode::TruncatedInput, "frame header needs 4 bytes", bytes.size());
    const std::uint32_t length = load_u32(bytes.data());
    if (length > max_frame) {
        throw Error(ErrorCode::FrameTooLarge,
                    "frame of " + std::to_string(length) + " bytes exceeds limit " + std::to_string(max_frame));
    }
    if (bytes.size() - 4 < length) throw Error(ErrorCode::TruncatedInput, "frame payload truncated", bytes.size());
    if (bytes.size() - 4 > length) throw Error(ErrorCode::TrailingBytes, "bytes after frame payload", 4 + length);
    return {bytes.begin() + 4, bytes.end()};
}

std::vector<std::uint8_t> handle_request(std::span<const std::uint8_t> payload, const ServerOptions& options,
                                         std::optional<std::string>* plaintext) {
    std::optional<KeySchedule> reply_keys = options.external_keys;
    try {
        const Envelope env = decode_binary(payload);
        if (env.mode_name != options.config.mode_name()) {
            throw Error(ErrorCode::ProtocolError, "envelope mode " + env.mode_name + " does not match server mode " +
                                                      options.config.mode_name());
        }
        std::optional<KeySchedule> keys = env.keys;
        if (env.key_transport == KeyTransport::external) {
            if (!options.external_keys) throw Error(ErrorCode::ProtocolError, "external keys not configured on server");
            keys = options.external_keys;
        } else {
            reply_keys.reset();
        }
        std::string text = decrypt(env.values, *keys, options.config);
        const std::string ack = "OK:" + std::to_string(text.size());
        if (plaintext != nullptr) *plaintext = std::move(text);
        return seal(ack, options.config, reply_keys);
    } catch (const Error& e) {
        if (plaintext != nullptr) plaintext->reset();
        return seal("ERR:" + upper_name(e.code()), options.config, reply_keys);
    }
}

std::string open_reply(std::span<const std::uint8_t> payload, const CodecConfig& config,
                       const std::optional<KeySchedule>& external_keys) {
    const Envelope env = decode_binary(payload);
    if (env.key_transport == KeyTransport::in_band) return decrypt(env.values, *env.keys, config);
    if (!external_keys) throw Error(ErrorCode::ProtocolError, "reply uses external keys but none were given");
    return decrypt(env.values, *external_keys, config);
}

Server::Server(ServerOptions options) : options_(std::move(options)) {}

Server::~Server() { stop(); }

void Server::start() {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* found = nullptr;
    const std::string port = std::to_string(options_.port);
    if (const int rc = ::getaddrinfo(options_.bind_address.c_str(), port.c_str(), &hints, &found); rc != 0) {
        throw Error(ErrorCode::ConnectionFailed, "resolve " + options_.bind_address + ": " + ::gai_strerror(rc));
    }
    std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> list(found, &::freeaddrinfo);
    Socket sock(::socket(found->ai_family, found->ai_socktype | SOCK_CLOEXEC, found->ai_protocol));
    if (sock.get() < 0) throw Error(ErrorCode::ConnectionFailed, "socket: " + errno_text());
    const int yes = 1;
    ::setsockopt(sock.get(), SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    if (::bind(sock.get(), found->ai_addr, found->ai_addrlen) != 0) {
        throw Error(ErrorCode::ConnectionFailed, "bind " + options_.bind_address + ":" + port + ": " + errno_text());
    }
    if (::listen(sock.get(), SOMAXCONN) != 0) throw Error(ErrorCode::ConnectionFailed, "listen: " + errno_text());
    sockaddr_storage bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(sock.get(), reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = bound.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port)
                                        : ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
    listen_fd_ = sock.release();
    stopping_ = false;
    acceptor_ = std::thread([this] { accept_loop(); });
}

void Server::stop() {
    if (stopping_.exchange(true)) return;
    if (acceptor_.joinable()) acceptor_.join();
    if (listen_fd_ >= 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    std::lock_guard lock(connections_mutex_);
    for (auto& conn : connections_) {
        if (conn.worker.joinable()) conn.worker.join();
    }
    connections_.clear();
}

void Server::reap_finished() {
    std::lock_guard lock(connections_mutex_);
    for (auto it = connections_.begin(); it != connections_.end();) {
        if (it->done) {
            it->worker.join();
            it = connections_.erase(it);
        } else {
            ++it;
        }
    }
}

void Server::accept_loop() {
    while (!stopping_) {
        pollfd p{listen_fd_, POLLIN, 0};
        const int rc = ::poll(&p, 1, 50);
        reap_finished();
        if (rc <= 0) continue;
        const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_NONBLOCK | SOCK_CLOEXEC);
        if (fd < 0) continue;
        std::lock_guard lock(connections_mutex_);
        Connection& conn = connections_.emplace_back();
        conn.fd = fd;
        conn.worker = std::thread([this, &conn] { serve_connection(conn); });
    }
}

void Server::report(const std::function<void(const std::string&)>& sink, const std::string& text) {
    if (!sink) return;
    std::lock_guard lock(log_mutex_);
    sink(text);
}

void Server::serve_connection(Connection& conn) {
    Socket sock(conn.fd);
    try {
        while (!stopping_) {
            // Idle between frames: wake periodically to notice shutdown.
            pollfd p{sock.get(), POLLIN, 0};
            const int rc = ::poll(&p, 1, 50);
            if (rc == 0) continue;
            if (rc < 0) {
                if (errno == EINTR) continue;
                break;
            }
            const auto deadline = Clock::now() + options_.io_timeout;
            std::optional<std::vector<std::uint8_t>> payload;
            try {
                payload = read_frame(sock.get(), options_.max_frame, deadline);
            } catch (const Error& e) {
                report(options_.on_error, e.what());
                if (e.code() == ErrorCode::FrameTooLarge) {
                    const auto reply = seal("ERR:" + upper_name(e.code()), options_.config, options_.external_keys);
                    write_all(sock.get(), encode_frame(reply), Clock::now() + options_.io_timeout);
                }
                break;
            }
            if (!payload) break;
            std::optional<std::string> plaintext;
            const auto reply = handle_request(*payload, options_, &plaintext);
            if (plaintext) {
                report(options_.on_message, *plaintext);
            } else {
                report(options_.on_error, "rejected request of " + std::to_string(payload->size()) + " bytes");
            }
            write_all(sock.get(), encode_frame(reply), Clock::now() + options_.io_timeout);
        }
    } catch (const Error& e) {
        report(options_.on_error, e.what());
    }
    conn.done = true;
}

std::string send(const std::string& address, std::string_view message, const SendOptions& options) {
    const auto deadline = Clock::now() + options.timeout;
    const auto request = seal(message, options.config, options.external_keys);
    Socket sock = connect_to(address, deadline);
    write_all(sock.get(), encode_frame(request), deadline);
    auto reply = read_frame(sock.get(), options.max_frame, deadline);
    if (!reply) throw Error(ErrorCode::ProtocolError, "server closed the connection without replying");
    std::string ack;
    try {
        ack = open_reply(*reply, options.config, options.external_keys);
    } catch (const Error& e) {
        throw Error(ErrorCode::ProtocolError, std::string("unreadable reply: ") + e.what());
    }
    if (ack.rfind("ERR:", 0) == 0) throw Error(ErrorCode::ProtocolError, "server replied " + ack);
    return ack;
}

std::vector<std::uint8_t> exchange_raw(const std::string& address, std::span<const std::uint8_t> wire,
                                       std::chrono::milliseconds timeout, std::size_t max_frame) {
    const auto deadline = Clock::now() + timeout;
    Socket sock = connect_to(address, deadline);
    write_all(sock.get(), wire, deadline);
    auto reply = read_frame(sock.get(), max_frame, deadline);
    if (!reply) throw Error(ErrorCode::ProtocolError, "server closed the connection without replying");
    return *reply;
}

}  // namespace asub::net
