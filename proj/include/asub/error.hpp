#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace asub {

enum class ErrorCode {
    InvalidConfig,
    CodeOutOfRange,
    DecodedCodeOutOfRange,
    AlphabetViolation,
    InvalidKey,
    NegativeResidue,
    InconsistentPair,
    LengthMismatch,
    EmptyCiphertext,
    EmptyText,
    InvalidFrequencyTable,
    CandidateLimitExceeded,
    InvalidEnvelope,
    ParseError,
    BadMagic,
    TruncatedInput,
    TrailingBytes,
    FrameTooLarge,
    ConnectionFailed,
    Timeout,
    ProtocolError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library. what() is "<ErrorCode>: <detail>" so
// diagnostics always name the failing condition.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail, std::optional<std::size_t> position = std::nullopt);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    // Character index, byte offset or ciphertext position, depending on the error.
    [[nodiscard]] std::optional<std::size_t> position() const noexcept { return position_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> position_;
};

}  // namespace asub
