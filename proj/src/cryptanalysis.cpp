#include "asub/cryptanalysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "asub/error.hpp"

namespace asub::analysis {

namespace {

// Published English letter frequencies (percent / 100), A..Z.
constexpr std::array<double, 26> kEnglish = {
    0.08167, 0.01492, 0.02782, 0.04253, 0.12702, 0.02228, 0.02015, 0.06094, 0.06966,
    0.00153, 0.00772, 0.04025, 0.02406, 0.06749, 0.07507, 0.01929, 0.00095, 0.05987,
    0.06327, 0.09056, 0.02758, 0.00978, 0.02360, 0.00150, 0.01974, 0.00074,
};

using LetterCounts = std::array<std::uint64_t, 26>;

double chi_squared(const LetterCounts& counts, std::uint64_t total, const FrequencyTable& freq) {
    if (total == 0) return 0.0;
    double score = 0.0;
    for (std::size_t l = 0; l < 26; ++l) {
        const double expected = freq[l] * static_cast<double>(total);
        const auto observed = static_cast<double>(counts[l]);
        if (expected == 0.0) {
            if (observed > 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        const double d = observed - expected;
        score += d * d / expected;
    }
    return score;
}

// 0..25 for a letter of either case, -1 otherwise.
int letter_index(unsigned char ch) noexcept {
    if (ch >= 'A' && ch <= 'Z') return ch - 'A';
    if (ch >= 'a' && ch <= 'z') return ch - 'a';
    return -1;
}

// Letter histogram plus non-letter count for one class decoded under one key.
struct ClassTally {
    std::uint64_t key = 0;
    LetterCounts letters{};
    std::uint64_t others = 0;
};

}  // namespace

const FrequencyTable& FrequencyTable::english() {
    static const FrequencyTable table{kEnglish};
    return table;
}

FrequencyTable::FrequencyTable(const std::array<double, 26>& weights) {
    double sum = 0.0;
    for (const double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidFrequencyTable, "frequencies must be finite and >= 0");
        sum += w;
    }
    if (sum <= 0.0) throw Error(ErrorCode::InvalidFrequencyTable, "frequencies sum to zero");
    for (std::size_t i = 0; i < 26; ++i) freq_[i] = weights[i] / sum;
}

FrequencyTable FrequencyTable::parse(std::string_view text) {
    std::array<double, 26> weights{};
    std::array<bool, 26> seen{};
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream fields(line);
        std::string letter;
        double value = 0.0;
        std::string extra;
        if (!(fields >> letter >> value) || (fields >> extra) || letter.size() != 1 || letter[0] < 'A' ||
            letter[0] > 'Z') {
            throw Error(ErrorCode::InvalidFrequencyTable, "line " + std::to_string(line_no) + ": expected 'LETTER fraction'",
                        line_no);
        }
        const auto idx = static_cast<std::size_t>(letter[0] - 'A');
        if (seen[idx]) throw Error(ErrorCode::InvalidFrequencyTable, "duplicate letter " + letter, line_no);
        seen[idx] = true;
        weights[idx] = value;
    }
    if (line_no != 26 || !std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
        throw Error(ErrorCode::InvalidFrequencyTable, "expected 26 lines covering A-Z, got " + std::to_string(line_no));
    }
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(sum - 1.0) > 0.01) {
        throw Error(ErrorCode::InvalidFrequencyTable, "fractions sum to " + std::to_string(sum) + ", expected 1");
    }
    return FrequencyTable{weights};
}

FrequencyTable FrequencyTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidFrequencyTable, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

double chi_squared_score(std::string_view text, const FrequencyTable& freq) {
    if (text.empty()) throw Error(ErrorCode::EmptyText, "cannot score empty text");
    LetterCounts counts{};
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] < 'A' || text[i] > 'Z') {
            throw Error(ErrorCode::AlphabetViolation, "position " + std::to_string(i) + " is not A-Z", i);
        }
        ++counts[static_cast<std::size_t>(text[i] - 'A')];
    }
    return chi_squared(counts, text.size(), freq);
}

double candidate_score(std::string_view text, const FrequencyTable& freq) {
    LetterCounts counts{};
    std::uint64_t letters = 0;
    std::uint64_t others = 0;
    for (const char ch : text) {
        const int l = letter_index(static_cast<unsigned char>(ch));
        if (l < 0) {
            ++others;
        } else {
            ++counts[static_cast<std::size_t>(l)];
            ++letters;
        }
    }
    return chi_squared(counts, letters, freq) + kNonLetterPenalty * static_cast<double>(others);
}

bool PartialSchedule::complete() const noexcept {
    return std::all_of(keys.begin(), keys.end(), [](const auto& k) { return k.has_value(); });
}

KeySchedule PartialSchedule::to_schedule() const {
    std::vector<std::uint64_t> out;
    for (std::size_t c = 0; c < keys.size(); ++c) {
        if (!keys[c]) throw Error(ErrorCode::InvalidKey, "key for class " + std::to_string(c) + " is undetermined");
        out.push_back(*keys[c]);
    }
    return KeySchedule(std::move(out));
}

PartialSchedule known_plaintext_attack(std::string_view plaintext, const std::vector<std::uint64_t>& values,
                                       const CodecConfig& config, std::size_t key_count) {
    if (key_count == 0) throw Error(ErrorCode::InvalidKey, "key count must be at least 1");
    if (plaintext.size() != values.size()) {
        throw Error(ErrorCode::LengthMismatch, "plaintext has " + std::to_string(plaintext.size()) +
                                                   " symbols, ciphertext has " + std::to_string(values.size()));
    }
    validate_text(plaintext, config);
    PartialSchedule out;
    out.keys.resize(key_count);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::uint32_t rev = reverse_code(static_cast<unsigned char>(plaintext[i]), config).value;
        if (values[i] < rev) {
            throw Error(ErrorCode::NegativeResidue,
                        "value " + std::to_string(values[i]) + " at position " + std::to_string(i) +
                            " is below the reversed code " + std::to_string(rev),
                        i);
        }
        const std::uint64_t key = values[i] - rev;
        auto& slot = out.keys[i % key_count];
        if (slot && *slot != key) {
            throw Error(ErrorCode::InconsistentPair,
                        "position " + std::to_string(i) + " implies key " + std::to_string(key) + " for class " +
                            std::to_string(i % key_count) + ", earlier positions implied " + std::to_string(*slot),
                        i);
        }
        slot = key;
    }
    return out;
}

std::optional<std::size_t> AttackReport::rank_of(const KeySchedule& schedule) const {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].schedule == schedule) return i + 1;
    }
    return std::nullopt;
}

std::optional<std::size_t> AttackReport::rank_of(std::string_view plaintext) const {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].plaintext == plaintext) return i + 1;
    }
    return std::nullopt;
}

AttackReport ciphertext_only_attack(const std::vector<std::uint64_t>& values, const CodecConfig& config,
                                    const FrequencyTable& freq, const AttackOptions& options) {
    if (values.empty()) throw Error(ErrorCode::EmptyCiphertext, "nothing to attack");
    const std::size_t n = options.key_count;
    if (n == 0) throw Error(ErrorCode::InvalidKey, "key count must be at least 1");

    // decoded[r] = plaintext code for reversed value r, or -1.
    std::vector<int> decoded(config.modulus(), -1);
    std::uint32_t min_rev = std::numeric_limits<std::uint32_t>::max();
    std::uint32_t max_rev = 0;
    for (int code = config.min_code(); code <= config.max_code(); ++code) {
        const std::uint32_t r = reverse_code(code, config).value;
        decoded[r] = code;
        min_rev = std::min(min_rev, r);
        max_rev = std::max(max_rev, r);
    }

    AttackReport report;
    std::vector<std::vector<ClassTally>> tallies(n);
    for (std::size_t c = 0; c < n; ++c) {
        if (c >= values.size()) {
            report.undetermined_classes.push_back(c);
            report.notes.push_back("class " + std::to_string(c) + " has no positions; key undetermined, reported as 0");
            tallies[c].push_back(ClassTally{});
            report.keys_per_class.push_back(0);
            continue;
        }
        std::uint64_t lo_value = std::numeric_limits<std::uint64_t>::max();
        std::uint64_t hi_value = 0;
        for (std::size_t i = c; i < values.size(); i += n) {
            lo_value = std::min(lo_value, values[i]);
            hi_value = std::max(hi_value, values[i]);
        }
        // Feasible window: max(values) - max_rev <= K <= min(values) - min_rev.
        if (lo_value >= min_rev) {
            const std::uint64_t hi = lo_value - min_rev;
            const std::uint64_t lo = hi_value > max_rev ? hi_value - max_rev : 0;
            for (std::uint64_t key = lo; key <= hi; ++key) {
                ClassTally tally;
                tally.key = key;
                bool ok = true;
                for (std::size_t i = c; i < values.size(); i += n) {
                    const std::uint64_t residue = values[i] - key;
                    const int code = residue < decoded.size() ? decoded[residue] : -1;
                    if (code < 0) {
                        ok = false;
                        break;
                    }
                    const int l = letter_index(static_cast<unsigned char>(code));
                    if (l < 0) {
                        ++tally.others;
                    } else {
                        ++tally.letters[static_cast<std::size_t>(l)];
                    }
                }
                if (ok) tallies[c].push_back(tally);
            }
        }
        report.keys_per_class.push_back(tallies[c].size());
        if (tallies[c].empty()) {
            report.notes.push_back("class " + std::to_string(c) + " has no feasible key");
        }
    }

    std::uint64_t total = 1;
    for (const auto& t : tallies) {
        if (t.empty()) {
            total = 0;
            break;
        }
        if (total > options.candidate_limit / t.size()) {
            throw Error(ErrorCode::CandidateLimitExceeded,
                        "candidate cross product exceeds limit " + std::to_string(options.candidate_limit));
        }
        total *= t.size();
    }
    if (total > options.candidate_limit) {
        throw Error(ErrorCode::CandidateLimitExceeded,
                    "candidate cross product " + std::to_string(total) + " exceeds limit " +
                        std::to_string(options.candidate_limit));
    }
    report.search_space_size = total;
    if (total == 0) return report;

    // Score every combination from the per-class tallies; letter counts add across classes.
    // Combination index is mixed-radix with the last class fastest, and tallies are key-ascending,
    // so index order is lexicographic key-tuple order.
    struct Scored {
        std::uint64_t index;
        double score;
    };
    std::vector<Scored> scored;
    scored.reserve(total);
    std::vector<std::size_t> choice(n, 0);
    for (std::uint64_t k = 0; k < total; ++k) {
        LetterCounts counts{};
        std::uint64_t others = 0;
        for (std::size_t c = 0; c < n; ++c) {
            const ClassTally& t = tallies[c][choice[c]];
            for (std::size_t l = 0; l < 26; ++l) counts[l] += t.letters[l];
            others += t.others;
        }
        const std::uint64_t letters = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
        scored.push_back({k, chi_squared(counts, letters, freq) + kNonLetterPenalty * static_cast<double>(others)});
        for (std::size_t c = n; c-- > 0;) {
            if (++choice[c] < tallies[c].size()) break;
            choice[c] = 0;
        }
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score < b.score;
        return a.index < b.index;
    });
    if (options.keep != 0 && scored.size() > options.keep) scored.resize(options.keep);

    report.candidates.reserve(scored.size());
    for (const Scored& s : scored) {
        std::vector<std::uint64_t> keys(n);
        std::uint64_t rest = s.index;
        for (std::size_t c = n; c-- > 0;) {
            keys[c] = tallies[c][rest % tallies[c].size()].key;
            rest /= tallies[c].size();
        }
        KeySchedule schedule(std::move(keys));
        std::string text;
        text.reserve(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            text.push_back(static_cast<char>(decoded[values[i] - schedule.key_for(i)]));
        }
        report.candidates.push_back(Candidate{std::move(schedule), std::move(text), s.score});
    }
    return report;
}

DiffusionReport diffusion_report(std::string_view plaintext, const std::vector<std::uint64_t>& values) {
    if (plaintext.size() != values.size()) {
        throw Error(ErrorCode::LengthMismatch, "plaintext has " + std::to_string(plaintext.size()) +
                                                   " symbols, ciphertext has " + std::to_string(values.size()));
    }
    DiffusionReport report;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ++report.per_symbol[static_cast<unsigned char>(plaintext[i])][values[i]];
    }
    for (const auto& [symbol, hist] : report.per_symbol) report.max_distinct = std::max(report.max_distinct, hist.size());
    return report;
}

}  // namespace asub::analysis
