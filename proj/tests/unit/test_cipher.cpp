#include "asub/cipher.hpp"

#include <random>
#include <set>

#include "asub/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace asub;

namespace {

const std::vector<std::uint64_t> kPaperCipher = {1084, 1251, 1094, 1163, 1152, 1231, 1104, 1251,
                                                 1124, 1251, 1084, 1253, 1153, 1242, 1152};

std::string random_text(std::mt19937_64& rng, const CodecConfig& config, std::size_t len) {
    std::uniform_int_distribution<int> code(config.min_code(), config.max_code());
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(static_cast<char>(static_cast<unsigned char>(code(rng))));
    return s;
}

}  // namespace

TEST_CASE("derive_keys") {
    const auto paper = CodecConfig::paper();
    const auto ks = derive_keys("RESPECTEVERYONE", paper);
    CHECK(ks.keys() == std::vector<std::uint64_t>{1056, 1155});
    CHECK(ks.derivation() == Derivation::auto_from_plaintext);
    CHECK(derive_keys("", paper).keys() == std::vector<std::uint64_t>{0, 0});
    CHECK(derive_keys("M", paper).keys() == std::vector<std::uint64_t>{77, 77});
    CHECK_THROWS_AS(derive_keys("lowercase x", paper), Error);
}

TEST_CASE("encrypt reproduces the published ciphertext") {
    const auto ct = encrypt("RESPECTEVERYONE", CodecConfig::paper());
    CHECK(ct.values == kPaperCipher);
    CHECK(ct.config_mode == "paper");
    CHECK(encrypt("", CodecConfig::paper()).values.empty());
    const auto mm = encrypt("MM", CodecConfig::paper());
    CHECK(mm.values == std::vector<std::uint64_t>{231, 231});
}

TEST_CASE("decrypt") {
    const auto paper = CodecConfig::paper();
    CHECK(decrypt(CipherText{kPaperCipher, "paper"}, KeySchedule({1056, 1155}), paper) == "RESPECTEVERYONE");
    CHECK(decrypt(CipherText{{}, "paper"}, KeySchedule({7}), paper).empty());
    CHECK(decrypt(CipherText{{231, 231}, "paper"}, KeySchedule({154, 154}), paper) == "MM");
}

TEST_CASE("decrypt errors") {
    const auto paper = CodecConfig::paper();
    try {
        decrypt(std::vector<std::uint64_t>{1084, 100}, KeySchedule({1056, 1155}), paper);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeResidue);
        CHECK(e.position() == 1);
    }
    try {
        // 1084 - 1000 = 84 -> "48", fine; 1251 - 1000 = 251 has three digits.
        decrypt(std::vector<std::uint64_t>{1084, 1251}, KeySchedule({1000}), paper);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DecodedCodeOutOfRange);
        CHECK(e.position() == 1);
    }
    // Residue 0 -> "00" -> 0, not in 10..99.
    CHECK_THROWS_AS(decrypt(std::vector<std::uint64_t>{5}, KeySchedule({5}), paper), Error);
}

TEST_CASE("KeySchedule must not be empty") { CHECK_THROWS_AS(KeySchedule({}), Error); }

TEST_CASE("encrypt matches a per-position brute-force reimplementation") {
    std::mt19937_64 rng(7);
    for (const auto& config : {CodecConfig::paper(), CodecConfig::extended()}) {
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t n = 1 + rng() % 5;
            std::vector<std::uint64_t> keys(n);
            for (auto& k : keys) k = rng() % 5000;
            const std::string text = random_text(rng, config, rng() % 20);
            REQUIRE(encrypt(text, KeySchedule(keys), config).values == oracle::encrypt(text, keys, config.width()));
        }
    }
}

TEST_CASE("round trip and value bounds on random inputs") {
    std::mt19937_64 rng(11);
    for (const auto& config : {CodecConfig::paper(), CodecConfig::extended()}) {
        for (int trial = 0; trial < 500; ++trial) {
            const std::string text = random_text(rng, config, rng() % 64);
            const KeySchedule ks =
                trial % 2 ? derive_keys(text, config) : KeySchedule({rng() % 100000, rng() % 100000, rng() % 7});
            const auto ct = encrypt(text, ks, config);
            REQUIRE(decrypt(ct, ks, config) == text);
            for (std::size_t i = 0; i < ct.values.size(); ++i) {
                REQUIRE(ct.values[i] >= ks.key_for(i));
                REQUIRE(ct.values[i] <= ks.key_for(i) + config.modulus() - 1);
            }
        }
    }
}

TEST_CASE("each plaintext symbol maps to at most n ciphertext values") {
    const auto ct = encrypt("RESPECTEVERYONE", CodecConfig::paper());
    std::set<std::uint64_t> e_values;
    const std::string text = "RESPECTEVERYONE";
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == 'E') e_values.insert(ct.values[i]);
    }
    CHECK(e_values == std::set<std::uint64_t>{1251, 1152});
}

TEST_CASE("encrypt is deterministic") {
    const auto a = encrypt("HELLO", KeySchedule({3, 9, 27}), CodecConfig::paper());
    const auto b = encrypt("HELLO", KeySchedule({3, 9, 27}), CodecConfig::paper());
    CHECK(a == b);
}
