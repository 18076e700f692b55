#pragma once

#include <string>
#include <string_view>

// Reference substitution ciphers over the 26-letter alphabet.
namespace asub::baselines {

class ShiftKey {
public:
    /// Throws InvalidKey unless 0 <= shift <= 25.
    explicit ShiftKey(int shift);
    [[nodiscard]] int shift() const noexcept { return shift_; }

private:
    int shift_;
};

class KeywordKey {
public:
    /// Throws InvalidKey unless `letters` is a non-empty run of a-z.
    explicit KeywordKey(std::string letters);
    [[nodiscard]] const std::string& letters() const noexcept { return letters_; }
    /// Shift applied at `position`: a = 1, b = 2, ..., z = 26.
    [[nodiscard]] int shift_at(std::size_t position) const noexcept;

private:
    std::string letters_;
};

// Monoalphabetic shift: lowercase in, uppercase out.
std::string mono_encrypt(std::string_view plaintext, const ShiftKey& key);
std::string mono_decrypt(std::string_view ciphertext, const ShiftKey& key);

// Repeating-keyword shift, lowercase in and out.
std::string keyword_encrypt(std::string_view plaintext, const KeywordKey& key);
std::string keyword_decrypt(std::string_view ciphertext, const KeywordKey& key);

}  // namespace asub::baselines
