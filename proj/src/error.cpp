#include "asub/error.hpp"

namespace asub {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::CodeOutOfRange: return "CodeOutOfRange";
        case ErrorCode::DecodedCodeOutOfRange: return "DecodedCodeOutOfRange";
        case ErrorCode::AlphabetViolation: return "AlphabetViolation";
        case ErrorCode::InvalidKey: return "InvalidKey";
        case ErrorCode::NegativeResidue: return "NegativeResidue";
        case ErrorCode::InconsistentPair: return "InconsistentPair";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptyCiphertext: return "EmptyCiphertext";
        case ErrorCode::EmptyText: return "EmptyText";
        case ErrorCode::InvalidFrequencyTable: return "InvalidFrequencyTable";
        case ErrorCode::CandidateLimitExceeded: return "CandidateLimitExceeded";
        case ErrorCode::InvalidEnvelope: return "InvalidEnvelope";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::TruncatedInput: return "TruncatedInput";
        case ErrorCode::TrailingBytes: return "TrailingBytes";
        case ErrorCode::FrameTooLarge: return "FrameTooLarge";
        case ErrorCode::ConnectionFailed: return "ConnectionFailed";
        case ErrorCode::Timeout: return "Timeout";
        case ErrorCode::ProtocolError: return "ProtocolError";
    }
    return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& detail) {
    std::string msg{to_string(code)};
    if (!detail.empty()) {
        msg += ": ";
        msg += detail;
    }
    return msg;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& detail, std::optional<std::size_t> position)
    : std::runtime_error(format_message(code, detail)), code_(code), position_(position) {}

}  // namespace asub
