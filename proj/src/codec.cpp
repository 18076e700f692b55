#include "asub/codec.hpp"

#include <algorithm>
#include <sstream>

#include "asub/error.hpp"

namespace asub {

namespace {

std::uint32_t pow10(int width) noexcept {
    std::uint32_t p = 1;
    for (int i = 0; i < width; ++i) p *= 10;
    return p;
}

// Digit reversal of a value already known to be below 10^width.
std::uint32_t reverse_digits(std::uint32_t value, int width) noexcept {
    std::uint32_t out = 0;
    for (int i = 0; i < width; ++i) {
        out = out * 10 + value % 10;
        value /= 10;
    }
    return out;
}

}  // namespace

CodecConfig CodecConfig::paper() { return CodecConfig{2, 10, 99, "paper"}; }
CodecConfig CodecConfig::extended() { return CodecConfig{3, 0, 255, "extended"}; }
CodecConfig CodecConfig::uppercase() { return CodecConfig{2, 'A', 'Z', "upper"}; }

CodecConfig CodecConfig::from_name(std::string_view name) {
    if (name == "paper") return paper();
    if (name == "extended") return extended();
    if (name == "upper") return uppercase();
    throw Error(ErrorCode::InvalidConfig, "unknown mode '" + std::string(name) + "'");
}

CodecConfig::CodecConfig(int width, int min_code, int max_code, std::string mode_name)
    : width_(width), min_code_(min_code), max_code_(max_code), mode_name_(std::move(mode_name)) {
    if (width_ != 2 && width_ != 3) {
        throw Error(ErrorCode::InvalidConfig, "width must be 2 or 3, got " + std::to_string(width_));
    }
    const int limit = std::min<int>(255, static_cast<int>(pow10(width_)) - 1);
    if (min_code_ < 0 || min_code_ > max_code_ || max_code_ > limit) {
        std::ostringstream os;
        os << "code range [" << min_code_ << ", " << max_code_ << "] invalid for width " << width_;
        throw Error(ErrorCode::InvalidConfig, os.str());
    }
}

std::uint32_t CodecConfig::modulus() const noexcept { return pow10(width_); }

std::string ReversedCode::digits() const {
    std::string s = std::to_string(value);
    if (s.size() < static_cast<std::size_t>(width)) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
    return s;
}

ReversedCode reverse_code(int code, const CodecConfig& config) {
    if (!config.contains(code)) {
        std::ostringstream os;
        os << "code " << code << " outside [" << config.min_code() << ", " << config.max_code() << "]";
        throw Error(ErrorCode::CodeOutOfRange, os.str());
    }
    return ReversedCode{reverse_digits(static_cast<std::uint32_t>(code), config.width()), config.width()};
}

int try_unreverse(std::uint32_t value, const CodecConfig& config) noexcept {
    if (value >= config.modulus()) return -1;
    const auto code = static_cast<int>(reverse_digits(value, config.width()));
    return config.contains(code) ? code : -1;
}

int unreverse_code(ReversedCode rc, const CodecConfig& config) {
    if (rc.width != config.width()) {
        throw Error(ErrorCode::InvalidConfig, "reversed code width " + std::to_string(rc.width) +
                                                  " does not match config width " + std::to_string(config.width()));
    }
    if (rc.value >= config.modulus()) {
        throw Error(ErrorCode::DecodedCodeOutOfRange,
                    "reversed value " + std::to_string(rc.value) + " has more than " + std::to_string(rc.width) + " digits");
    }
    const int code = try_unreverse(rc.value, config);
    if (code < 0) {
        std::ostringstream os;
        os << "reversed value " << rc.digits() << " decodes to " << reverse_digits(rc.value, rc.width)
           << ", outside [" << config.min_code() << ", " << config.max_code() << "]";
        throw Error(ErrorCode::DecodedCodeOutOfRange, os.str());
    }
    return code;
}

void validate_text(std::string_view text, const CodecConfig& config) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        const int code = static_cast<unsigned char>(text[i]);
        if (!config.contains(code)) {
            std::ostringstream os;
            os << "byte " << code << " at position " << i << " outside " << config.mode_name() << " alphabet ["
               << config.min_code() << ", " << config.max_code() << "]";
            throw Error(ErrorCode::AlphabetViolation, os.str(), i);
        }
    }
}

}  // namespace asub
