#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asub/cipher.hpp"
#include "asub/codec.hpp"

namespace asub::analysis {

/// Relative frequencies of A..Z, normalized to sum to 1.
class FrequencyTable {
public:
    /// Built-in English table; identical to data/english_letter_frequencies_v1.txt.
    static const FrequencyTable& english();

    /// Parses exactly 26 lines of "LETTER<space>fraction", one per letter A..Z
    /// in any order. The fractions must sum to 1 within 0.01 and are then
    /// renormalized. Throws InvalidFrequencyTable.
    static FrequencyTable parse(std::string_view text);
    static FrequencyTable load(const std::filesystem::path& path);

    explicit FrequencyTable(const std::array<double, 26>& weights);

    [[nodiscard]] double operator[](std::size_t letter) const noexcept { return freq_[letter]; }
    [[nodiscard]] const std::array<double, 26>& values() const noexcept { return freq_; }

private:
    std::array<double, 26> freq_{};
};

/// Pearson chi-squared of the letter counts of `text` (A..Z only, non-empty)
/// against `freq`. Lower is more language-like. Throws EmptyText or
/// AlphabetViolation.
double chi_squared_score(std::string_view text, const FrequencyTable& freq);

/// Score used to rank candidate decodings, which may hold any byte of the
/// alphabet: chi-squared over case-folded letters plus kNonLetterPenalty per
/// non-letter byte. Equal to chi_squared_score for pure A..Z text.
double candidate_score(std::string_view text, const FrequencyTable& freq);
inline constexpr double kNonLetterPenalty = 1000.0;

/// Keys recovered per class; std::nullopt for classes with no positions.
struct PartialSchedule {
    std::vector<std::optional<std::uint64_t>> keys;

    [[nodiscard]] bool complete() const noexcept;
    /// Throws InvalidKey if any class is undetermined.
    [[nodiscard]] KeySchedule to_schedule() const;
};

/// Recovers key[c] = values[i] - reverse(plaintext[i]) for every class c = i mod key_count.
/// Throws LengthMismatch, InconsistentPair, NegativeResidue, AlphabetViolation.
PartialSchedule known_plaintext_attack(std::string_view plaintext, const std::vector<std::uint64_t>& values,
                                       const CodecConfig& config, std::size_t key_count = 2);

struct Candidate {
    KeySchedule schedule;
    std::string plaintext;
    double score = 0.0;
};

struct AttackReport {
    /// Sorted by score, ties by key tuple.
    std::vector<Candidate> candidates;
    /// Number of key combinations that decode to valid text.
    std::uint64_t search_space_size = 0;
    /// Feasible key count per class.
    std::vector<std::uint64_t> keys_per_class;
    /// Classes with no ciphertext positions; their key is reported as 0.
    std::vector<std::size_t> undetermined_classes;
    std::vector<std::string> notes;

    /// 1-based rank of `schedule` among the kept candidates.
    [[nodiscard]] std::optional<std::size_t> rank_of(const KeySchedule& schedule) const;
    /// 1-based rank of the first candidate decoding to `plaintext`.
    [[nodiscard]] std::optional<std::size_t> rank_of(std::string_view plaintext) const;
};

struct AttackOptions {
    std::size_t key_count = 2;
    /// Error out when the cross product of per-class keys exceeds this.
    std::uint64_t candidate_limit = 1'000'000;
    /// Keep only the best N candidates (0 keeps all). Every combination is still scored.
    std::size_t keep = 0;
};

/// Enumerates every key per class whose residues are all valid reversed
/// codes, crosses the classes, scores each decoding and ranks them.
/// The true schedule is always among the candidates when keep = 0.
/// Throws EmptyCiphertext or CandidateLimitExceeded.
AttackReport ciphertext_only_attack(const std::vector<std::uint64_t>& values, const CodecConfig& config,
                                    const FrequencyTable& freq, const AttackOptions& options = {});

struct DiffusionReport {
    /// Plaintext byte -> (ciphertext value -> occurrences).
    std::map<unsigned char, std::map<std::uint64_t, std::size_t>> per_symbol;
    std::size_t max_distinct = 0;
};

/// Throws LengthMismatch.
DiffusionReport diffusion_report(std::string_view plaintext, const std::vector<std::uint64_t>& values);

}  // namespace asub::analysis
