#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "asub/codec.hpp"

namespace asub {

enum class Derivation { auto_from_plaintext, explicit_keys };

/// Ordered keys K1..Kn, applied cyclically by position (position i uses
/// keys[i % n]). Always non-empty.
class KeySchedule {
public:
    /// Throws InvalidKey when `keys` is empty.
    explicit KeySchedule(std::vector<std::uint64_t> keys, Derivation derivation = Derivation::explicit_keys);

    [[nodiscard]] const std::vector<std::uint64_t>& keys() const noexcept { return keys_; }
    [[nodiscard]] std::size_t size() const noexcept { return keys_.size(); }
    [[nodiscard]] Derivation derivation() const noexcept { return derivation_; }
    [[nodiscard]] std::uint64_t key_for(std::size_t position) const noexcept { return keys_[position % keys_.size()]; }

    /// Equality compares keys only.
    friend bool operator==(const KeySchedule& a, const KeySchedule& b) noexcept { return a.keys_ == b.keys_; }

private:
    std::vector<std::uint64_t> keys_;
    Derivation derivation_;
};

struct CipherText {
    std::vector<std::uint64_t> values;
    std::string config_mode;

    friend bool operator==(const CipherText&, const CipherText&) = default;
};

/// K1 = sum of reversed codes, K2 = sum of plain codes.
KeySchedule derive_keys(std::string_view plaintext, const CodecConfig& config);

/// values[i] = reverse(code(plaintext[i])) + schedule.key_for(i).
CipherText encrypt(std::string_view plaintext, const KeySchedule& schedule, const CodecConfig& config);

/// Derives the two-key schedule from the plaintext, then encrypts.
CipherText encrypt(std::string_view plaintext, const CodecConfig& config);

/// Subtracts keys cyclically and un-reverses each residue.
/// Throws NegativeResidue or DecodedCodeOutOfRange (position set on both).
std::string decrypt(const CipherText& ciphertext, const KeySchedule& schedule, const CodecConfig& config);
std::string decrypt(const std::vector<std::uint64_t>& values, const KeySchedule& schedule, const CodecConfig& config);

}  // namespace asub
