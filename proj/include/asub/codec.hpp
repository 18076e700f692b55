#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace asub {

/// Numeric alphabet for the digit-reversal codec.
///
/// Character codes are single bytes. A code is written as a zero-padded
/// decimal string of exactly `width` digits before it is reversed, which is
/// what makes reversal an involution ("80" -> "08" -> "80").
class CodecConfig {
public:
    /// Width 2, codes 10..99. Reproduces the published two-digit tables.
    static CodecConfig paper();
    /// Width 3, codes 0..255. Covers every byte value.
    static CodecConfig extended();
    /// Width 2, codes 65..90 ('A'..'Z').
    static CodecConfig uppercase();
    /// Looks up one of the named modes above ("paper", "extended", "upper").
    static CodecConfig from_name(std::string_view name);

    /// Throws InvalidConfig unless width is 2 or 3 and
    /// 0 <= min_code <= max_code <= min(255, 10^width - 1).
    CodecConfig(int width, int min_code, int max_code, std::string mode_name);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int min_code() const noexcept { return min_code_; }
    [[nodiscard]] int max_code() const noexcept { return max_code_; }
    [[nodiscard]] const std::string& mode_name() const noexcept { return mode_name_; }
    /// 10^width; every reversed code is strictly below this.
    [[nodiscard]] std::uint32_t modulus() const noexcept;
    [[nodiscard]] bool contains(int code) const noexcept { return code >= min_code_ && code <= max_code_; }

    friend bool operator==(const CodecConfig&, const CodecConfig&) = default;

private:
    int width_;
    int min_code_;
    int max_code_;
    std::string mode_name_;
};

struct ReversedCode {
    std::uint32_t value = 0;
    int width = 2;

    /// Zero-padded digit string, e.g. "08".
    [[nodiscard]] std::string digits() const;

    friend bool operator==(const ReversedCode&, const ReversedCode&) = default;
};

/// Reverses the zero-padded decimal digits of `code`. Throws CodeOutOfRange.
ReversedCode reverse_code(int code, const CodecConfig& config);

/// Inverse of reverse_code. Throws DecodedCodeOutOfRange when the value is
/// not below 10^width or un-reverses to a code outside the alphabet.
int unreverse_code(ReversedCode rc, const CodecConfig& config);

/// Throws AlphabetViolation naming the first byte outside the alphabet.
void validate_text(std::string_view text, const CodecConfig& config);

/// Non-throwing variant of unreverse_code; returns -1 when invalid.
int try_unreverse(std::uint32_t value, const CodecConfig& config) noexcept;

}  // namespace asub
