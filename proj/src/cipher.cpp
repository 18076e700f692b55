#include "asub/cipher.hpp"

#include "asub/error.hpp"

namespace asub {

KeySchedule::KeySchedule(std::vector<std::uint64_t> keys, Derivation derivation)
    : keys_(std::move(keys)), derivation_(derivation) {
    if (keys_.empty()) throw Error(ErrorCode::InvalidKey, "key schedule needs at least one key");
}

KeySchedule derive_keys(std::string_view plaintext, const CodecConfig& config) {
    validate_text(plaintext, config);
    std::uint64_t reversed_sum = 0;
    std::uint64_t plain_sum = 0;
    for (const char ch : plaintext) {
        const int code = static_cast<unsigned char>(ch);
        reversed_sum += reverse_code(code, config).value;
        plain_sum += static_cast<std::uint64_t>(code);
    }
    return KeySchedule({reversed_sum, plain_sum}, Derivation::auto_from_plaintext);
}

CipherText encrypt(std::string_view plaintext, const KeySchedule& schedule, const CodecConfig& config) {
    validate_text(plaintext, config);
    CipherText out;
    out.config_mode = config.mode_name();
    out.values.reserve(plaintext.size());
    for (std::size_t i = 0; i < plaintext.size(); ++i) {
        const int code = static_cast<unsigned char>(plaintext[i]);
        out.values.push_back(reverse_code(code, config).value + schedule.key_for(i));
    }
    return out;
}

CipherText encrypt(std::string_view plaintext, const CodecConfig& config) {
    return encrypt(plaintext, derive_keys(plaintext, config), config);
}

std::string decrypt(const std::vector<std::uint64_t>& values, const KeySchedule& schedule, const CodecConfig& config) {
    std::string out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::uint64_t key = schedule.key_for(i);
        if (values[i] < key) {
            throw Error(ErrorCode::NegativeResidue,
                        "value " + std::to_string(values[i]) + " at position " + std::to_string(i) + " is below key " +
                            std::to_string(key),
                        i);
        }
        const std::uint64_t residue = values[i] - key;
        const int code = residue < config.modulus() ? try_unreverse(static_cast<std::uint32_t>(residue), config) : -1;
        if (code < 0) {
            throw Error(ErrorCode::DecodedCodeOutOfRange,
                        "residue " + std::to_string(residue) + " at position " + std::to_string(i) +
                            " is not a reversed code of the " + config.mode_name() + " alphabet",
                        i);
        }
        out.push_back(static_cast<char>(static_cast<unsigned char>(code)));
    }
    return out;
}

std::string decrypt(const CipherText& ciphertext, const KeySchedule& schedule, const CodecConfig& config) {
    return decrypt(ciphertext.values, schedule, config);
}

}  // namespace asub
