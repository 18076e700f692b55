#include "asub/baselines.hpp"

#include "asub/error.hpp"

namespace asub::baselines {

namespace {

void require_range(std::string_view text, char first, char last) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] < first || text[i] > last) {
            throw Error(ErrorCode::AlphabetViolation,
                        "character at position " + std::to_string(i) + " is not in " + first + "-" + last, i);
        }
    }
}

char shift_letter(char ch, char from_base, char to_base, int shift) {
    const int offset = ((ch - from_base) + shift) % 26;
    return static_cast<char>(to_base + (offset + 26) % 26);
}

}  // namespace

ShiftKey::ShiftKey(int shift) : shift_(shift) {
    if (shift < 0 || shift > 25) throw Error(ErrorCode::InvalidKey, "shift must be in [0, 25], got " + std::to_string(shift));
}

KeywordKey::KeywordKey(std::string letters) : letters_(std::move(letters)) {
    if (letters_.empty()) throw Error(ErrorCode::InvalidKey, "keyword must not be empty");
    for (const char ch : letters_) {
        if (ch < 'a' || ch > 'z') throw Error(ErrorCode::InvalidKey, "keyword must contain only a-z");
    }
}

int KeywordKey::shift_at(std::size_t position) const noexcept {
    return letters_[position % letters_.size()] - 'a' + 1;
}

std::string mono_encrypt(std::string_view plaintext, const ShiftKey& key) {
    require_range(plaintext, 'a', 'z');
    std::string out;
    out.reserve(plaintext.size());
    for (const char ch : plaintext) out.push_back(shift_letter(ch, 'a', 'A', key.shift()));
    return out;
}

std::string mono_decrypt(std::string_view ciphertext, const ShiftKey& key) {
    require_range(ciphertext, 'A', 'Z');
    std::string out;
    out.reserve(ciphertext.size());
    for (const char ch : ciphertext) out.push_back(shift_letter(ch, 'A', 'a', -key.shift()));
    return out;
}

std::string keyword_encrypt(std::string_view plaintext, const KeywordKey& key) {
    require_range(plaintext, 'a', 'z');
    std::string out;
    out.reserve(plaintext.size());
    for (std::size_t i = 0; i < plaintext.size(); ++i) out.push_back(shift_letter(plaintext[i], 'a', 'a', key.shift_at(i)));
    return out;
}

std::string keyword_decrypt(std::string_view ciphertext, const KeywordKey& key) {
    require_range(ciphertext, 'a', 'z');
    std::string out;
    out.reserve(ciphertext.size());
    for (std::size_t i = 0; i < ciphertext.size(); ++i) {
        out.push_back(shift_letter(ciphertext[i], 'a', 'a', -key.shift_at(i)));
    }
    return out;
}

}  // namespace asub::baselines
