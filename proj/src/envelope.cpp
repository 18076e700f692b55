#include "asub/envelope.hpp"

#include <array>
#include <limits>

#include "asub/error.hpp"

namespace asub {

namespace {

constexpr std::uint64_t kU32Max = std::numeric_limits<std::uint32_t>::max();
constexpr std::array<std::uint8_t, 4> kMagic = {'A', 'S', 'U', 'B'};

std::uint8_t mode_byte(const std::string& mode) {
    if (mode == "paper") return 1;
    if (mode == "extended") return 2;
    throw Error(ErrorCode::InvalidEnvelope, "mode '" + mode + "' cannot be carried in an envelope");
}

void append_list(std::string& out, const std::vector<std::uint64_t>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != 0) out.push_back(',');
        out += std::to_string(values[i]);
    }
}

// Strict left-to-right reader that reports offsets into the original text.
class TextReader {
public:
    explicit TextReader(std::string_view text) : text_(text) {}

    [[nodiscard]] std::size_t offset() const noexcept { return pos_; }
    [[nodiscard]] bool at_end() const noexcept { return pos_ == text_.size(); }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::ParseError, what + " at byte " + std::to_string(pos_), pos_);
    }

    void expect(std::string_view literal) {
        if (text_.substr(pos_, literal.size()) != literal) fail("expected '" + std::string(literal) + "'");
        pos_ += literal.size();
    }

    bool accept(std::string_view literal) {
        if (text_.substr(pos_, literal.size()) != literal) return false;
        pos_ += literal.size();
        return true;
    }

    [[nodiscard]] char peek() const noexcept { return at_end() ? '\0' : text_[pos_]; }

    // Canonical unsigned decimal: no sign, no leading zero unless the number is 0.
    std::uint64_t number() {
        const std::size_t start = pos_;
        std::uint64_t value = 0;
        while (!at_end() && text_[pos_] >= '0' && text_[pos_] <= '9') {
            value = value * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
            if (value > kU32Max) fail("number exceeds 32 bits");
            ++pos_;
        }
        if (pos_ == start) fail("expected digit");
        if (pos_ - start > 1 && text_[start] == '0') {
            pos_ = start;
            fail("leading zero");
        }
        return value;
    }

    std::string word() {
        const std::size_t start = pos_;
        while (!at_end() && text_[pos_] >= 'a' && text_[pos_] <= 'z') ++pos_;
        if (pos_ == start) fail("expected mode name");
        return std::string(text_.substr(start, pos_ - start));
    }

    std::vector<std::uint64_t> list(char close) {
        std::vector<std::uint64_t> out;
        if (peek() == close) return out;
        out.push_back(number());
        while (accept(",")) out.push_back(number());
        return out;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

void put_u32(std::vector<std::uint8_t>& out, std::uint64_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    [[nodiscard]] std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

    void need(std::size_t n, const char* what) const {
        if (remaining() < n) {
            throw Error(ErrorCode::TruncatedInput,
                        std::string("input ends inside ") + what + " at byte " + std::to_string(bytes_.size()),
                        bytes_.size());
        }
    }

    std::uint8_t u8(const char* what) {
        need(1, what);
        return bytes_[pos_++];
    }

    std::uint32_t u32(const char* what) {
        need(4, what);
        const std::uint32_t v = (std::uint32_t{bytes_[pos_]} << 24) | (std::uint32_t{bytes_[pos_ + 1]} << 16) |
                                (std::uint32_t{bytes_[pos_ + 2]} << 8) | std::uint32_t{bytes_[pos_ + 3]};
        pos_ += 4;
        return v;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

void Envelope::validate() const {
    if (version != kVersion) throw Error(ErrorCode::InvalidEnvelope, "unsupported version " + std::to_string(version));
    mode_byte(mode_name);
    if (key_transport == KeyTransport::in_band && !keys) {
        throw Error(ErrorCode::InvalidEnvelope, "in-band transport requires keys");
    }
    if (key_transport == KeyTransport::external && keys) {
        throw Error(ErrorCode::InvalidEnvelope, "external transport must not carry keys");
    }
    if (keys) {
        if (keys->size() > kMaxKeys) throw Error(ErrorCode::InvalidEnvelope, "more than 255 keys");
        for (const auto k : keys->keys()) {
            if (k > kU32Max) throw Error(ErrorCode::InvalidEnvelope, "key " + std::to_string(k) + " exceeds 32 bits");
        }
    }
    if (values.size() > kU32Max) throw Error(ErrorCode::InvalidEnvelope, "too many values");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > kU32Max) {
            throw Error(ErrorCode::InvalidEnvelope, "value at position " + std::to_string(i) + " exceeds 32 bits", i);
        }
    }
}

Envelope Envelope::in_band(const CipherText& ct, const KeySchedule& schedule) {
    return Envelope{kVersion, ct.config_mode, KeyTransport::in_band, schedule, ct.values};
}

Envelope Envelope::external(const CipherText& ct) {
    return Envelope{kVersion, ct.config_mode, KeyTransport::external, std::nullopt, ct.values};
}

std::string format_value_list(const std::vector<std::uint64_t>& values) {
    std::string out = "(";
    append_list(out, values);
    out.push_back(')');
    return out;
}

std::string encode_text(const Envelope& env) {
    env.validate();
    std::string out = "ASUB;v=" + std::to_string(env.version) + ";mode=" + env.mode_name + ";keys=";
    if (env.keys) {
        out += "in-band:";
        append_list(out, env.keys->keys());
    } else {
        out += "external";
    }
    out.push_back('\n');
    out += format_value_list(env.values);
    out.push_back('\n');
    return out;
}

Envelope decode_text(std::string_view text) {
    TextReader r(text);
    Envelope env;
    r.expect("ASUB;v=");
    const std::size_t version_at = r.offset();
    const auto version = r.number();
    if (version != Envelope::kVersion) {
        throw Error(ErrorCode::ParseError, "unsupported version at byte " + std::to_string(version_at), version_at);
    }
    env.version = static_cast<int>(version);
    r.expect(";mode=");
    const std::size_t mode_at = r.offset();
    env.mode_name = r.word();
    if (env.mode_name != "paper" && env.mode_name != "extended") {
        throw Error(ErrorCode::ParseError, "unknown mode at byte " + std::to_string(mode_at), mode_at);
    }
    r.expect(";keys=");
    if (r.accept("external")) {
        env.key_transport = KeyTransport::external;
    } else {
        r.expect("in-band:");
        const std::size_t keys_at = r.offset();
        auto keys = r.list('\n');
        if (keys.empty()) r.fail("expected at least one key");
        if (keys.size() > Envelope::kMaxKeys) {
            throw Error(ErrorCode::ParseError, "more than 255 keys at byte " + std::to_string(keys_at), keys_at);
        }
        env.key_transport = KeyTransport::in_band;
        env.keys = KeySchedule(std::move(keys));
    }
    r.expect("\n(");
    env.values = r.list(')');
    r.expect(")\n");
    if (!r.at_end()) r.fail("unexpected trailing data");
    return env;
}

std::vector<std::uint64_t> parse_value_list(std::string_view text) {
    TextReader r(text);
    r.expect("(");
    auto values = r.list(')');
    r.expect(")");
    if (!r.at_end()) r.fail("unexpected trailing data");
    return values;
}

std::vector<std::uint8_t> encode_binary(const Envelope& env) {
    env.validate();
    std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
    const std::size_t key_count = env.keys ? env.keys->size() : 0;
    out.reserve(4 + 3 + 4 * key_count + 4 + 4 * env.values.size());
    out.push_back(static_cast<std::uint8_t>(env.version));
    out.push_back(mode_byte(env.mode_name));
    out.push_back(static_cast<std::uint8_t>(key_count));
    if (env.keys) {
        for (const auto k : env.keys->keys()) put_u32(out, k);
    }
    put_u32(out, env.values.size());
    for (const auto v : env.values) put_u32(out, v);
    return out;
}

Envelope decode_binary(std::span<const std::uint8_t> bytes) {
    for (std::size_t i = 0; i < kMagic.size(); ++i) {
        if (i >= bytes.size()) throw Error(ErrorCode::TruncatedInput, "input ends inside magic", bytes.size());
        if (bytes[i] != kMagic[i]) throw Error(ErrorCode::BadMagic, "magic mismatch at byte " + std::to_string(i), i);
    }
    ByteReader r(bytes.subspan(kMagic.size()));
    Envelope env;
    const auto version = r.u8("header");
    if (version != Envelope::kVersion) {
        throw Error(ErrorCode::InvalidEnvelope, "unsupported version " + std::to_string(version), 4);
    }
    env.version = version;
    switch (r.u8("header")) {
        case 1: env.mode_name = "paper"; break;
        case 2: env.mode_name = "extended"; break;
        default: throw Error(ErrorCode::InvalidEnvelope, "unknown mode byte", 5);
    }
    const std::size_t key_count = r.u8("header");
    if (key_count > 0) {
        std::vector<std::uint64_t> keys;
        keys.reserve(key_count);
        for (std::size_t i = 0; i < key_count; ++i) keys.push_back(r.u32("keys"));
        env.key_transport = KeyTransport::in_band;
        env.keys = KeySchedule(std::move(keys));
    }
    const std::uint32_t count = r.u32("value count");
    r.need(std::size_t{count} * 4, "values");
    env.values.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) env.values.push_back(r.u32("values"));
    if (r.remaining() != 0) {
        throw Error(ErrorCode::TrailingBytes, std::to_string(r.remaining()) + " bytes after the last value",
                    bytes.size() - r.remaining());
    }
    return env;
}

}  // namespace asub
