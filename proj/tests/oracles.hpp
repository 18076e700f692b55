#pragma once

// Test-only reference implementations. They deliberately go through decimal
// strings rather than the library's arithmetic so the two paths stay independent.

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

inline std::string pad(unsigned value, int width) {
    std::string s = std::to_string(value);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

inline unsigned reverse_string(unsigned value, int width) {
    std::string s = pad(value, width);
    std::reverse(s.begin(), s.end());
    return static_cast<unsigned>(std::stoul(s));
}

// Position-by-position encryption; position i uses keys[i % keys.size()].
inline std::vector<std::uint64_t> encrypt(std::string_view text, const std::vector<std::uint64_t>& keys, int width) {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        out.push_back(reverse_string(static_cast<unsigned char>(text[i]), width) + keys[i % keys.size()]);
    }
    return out;
}

// Every key for class `cls` (of n) that maps all its positions into [lo, hi],
// found by trying every key from 0 up to the smallest class value.
inline std::vector<std::uint64_t> feasible_keys(const std::vector<std::uint64_t>& values, std::size_t cls,
                                                std::size_t n, int width, int lo, int hi) {
    std::uint64_t smallest = UINT64_MAX;
    for (std::size_t i = cls; i < values.size(); i += n) smallest = std::min(smallest, values[i]);
    std::vector<std::uint64_t> keys;
    unsigned limit = 1;
    for (int w = 0; w < width; ++w) limit *= 10;
    for (std::uint64_t k = 0; k <= smallest; ++k) {
        bool ok = true;
        for (std::size_t i = cls; i < values.size() && ok; i += n) {
            const std::uint64_t r = values[i] - k;
            if (r >= limit) {
                ok = false;
                break;
            }
            const unsigned code = reverse_string(static_cast<unsigned>(r), width);
            ok = static_cast<int>(code) >= lo && static_cast<int>(code) <= hi;
        }
        if (ok) keys.push_back(k);
    }
    return keys;
}

}  // namespace oracle
