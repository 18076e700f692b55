#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asub/cipher.hpp"

namespace asub {

enum class KeyTransport { in_band, external };

/// Serialized ciphertext container.
///
/// Text form (two lines, each terminated by '\n'):
///
///     ASUB;v=1;mode=paper;keys=in-band:1056,1155
///     (1084,1251,1094)
///
/// `keys=external` when the keys travel out of band. Numbers are plain
/// decimal with no sign, no leading zeros and no spaces.
///
/// Binary form, big-endian:
///
///     "ASUB" | version u8 | mode u8 | key count u8 | keys u32... | value count u32 | values u32...
///
/// mode is 1 for "paper" and 2 for "extended"; key count 0 means external
/// transport. Both encodings are canonical and decoders reject anything the
/// encoder would not produce.
struct Envelope {
    static constexpr int kVersion = 1;
    static constexpr std::size_t kMaxKeys = 255;

    int version = kVersion;
    std::string mode_name = "paper";
    KeyTransport key_transport = KeyTransport::external;
    std::optional<KeySchedule> keys;
    std::vector<std::uint64_t> values;

    /// Throws InvalidEnvelope on any invariant violation: unknown version or
    /// mode, keys present iff in-band, at most 255 keys, every key and value below 2^32.
    void validate() const;

    static Envelope in_band(const CipherText& ct, const KeySchedule& schedule);
    static Envelope external(const CipherText& ct);

    friend bool operator==(const Envelope&, const Envelope&) = default;
};

std::string encode_text(const Envelope& env);
/// Throws ParseError carrying the byte offset of the first deviation.
Envelope decode_text(std::string_view text);

/// Parses a bare "(v1,v2,...)" value list, as found on the envelope body line.
/// Throws ParseError.
std::vector<std::uint64_t> parse_value_list(std::string_view text);
std::string format_value_list(const std::vector<std::uint64_t>& values);

std::vector<std::uint8_t> encode_binary(const Envelope& env);
/// Throws BadMagic, TruncatedInput, TrailingBytes or InvalidEnvelope.
Envelope decode_binary(std::span<const std::uint8_t> bytes);

}  // namespace asub
