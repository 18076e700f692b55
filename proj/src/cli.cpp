#include "asub/cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "asub/baselines.hpp"
#include "asub/cipher.hpp"
#include "asub/cryptanalysis.hpp"
#include "asub/envelope.hpp"
#include "asub/error.hpp"
#include "asub/netdemo.hpp"

namespace asub::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

std::string read_stream(std::istream& in) {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open " + path);
    return read_stream(f);
}

// Positional argument, --file, or standard input, in that order.
std::string read_input(const std::optional<std::string>& arg, const std::optional<std::string>& file, std::istream& in) {
    if (arg) return *arg;
    if (file) return read_file(*file);
    return read_stream(in);
}

KeySchedule parse_keys(const std::string& text) {
    std::vector<std::uint64_t> keys;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item.empty() || item.size() > 10 || item.find_first_not_of("0123456789") != std::string::npos) {
            throw UsageError("keys must be a comma-separated list of non-negative integers, got '" + text + "'");
        }
        keys.push_back(std::stoull(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return KeySchedule(std::move(keys));
}

std::string format_keys(const std::vector<std::optional<std::uint64_t>>& keys) {
    std::string out;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (i != 0) out.push_back(' ');
        out += "K" + std::to_string(i + 1) + "=" + (keys[i] ? std::to_string(*keys[i]) : std::string("?"));
    }
    return out;
}

std::string format_keys(const KeySchedule& schedule) {
    std::vector<std::optional<std::uint64_t>> keys(schedule.keys().begin(), schedule.keys().end());
    return format_keys(keys);
}

std::string join_keys(const KeySchedule& schedule) {
    std::string out;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (i != 0) out.push_back(',');
        out += std::to_string(schedule.keys()[i]);
    }
    return out;
}

bool is_binary_envelope(std::string_view data) {
    return data.size() >= 5 && data.substr(0, 4) == "ASUB" && data[4] != ';';
}

Envelope parse_envelope(std::string data) {
    if (is_binary_envelope(data)) {
        const auto* p = reinterpret_cast<const std::uint8_t*>(data.data());
        return decode_binary(std::span<const std::uint8_t>(p, data.size()));
    }
    if (!data.empty() && data.back() != '\n') data.push_back('\n');
    return decode_text(data);
}

struct CiphertextInput {
    std::vector<std::uint64_t> values;
    std::optional<std::string> mode;
};

// Accepts an envelope (text or binary) or a bare "(v1,v2,...)" list.
CiphertextInput parse_ciphertext(const std::string& data) {
    if (data.rfind("ASUB", 0) == 0) {
        Envelope env = parse_envelope(data);
        return {std::move(env.values), env.mode_name};
    }
    const auto first = data.find_first_not_of(" \t\r\n");
    const auto last = data.find_last_not_of(" \t\r\n");
    if (first == std::string::npos) return {parse_value_list(""), std::nullopt};
    return {parse_value_list(std::string_view(data).substr(first, last - first + 1)), std::nullopt};
}

void add_input_options(CLI::App* cmd, std::optional<std::string>& arg, std::optional<std::string>& file,
                       const std::string& what) {
    auto* a = cmd->add_option("input", arg, what + " (default: standard input)");
    auto* f = cmd->add_option("-f,--file", file, "Read " + what + " from a file");
    a->excludes(f);
}

int run_serve(const net::ServerOptions& base, std::ostream& out, std::ostream& err) {
    net::ServerOptions options = base;
    std::mutex io;
    options.on_message = [&](const std::string& text) {
        std::lock_guard lock(io);
        out << "received: " << text << std::endl;
    };
    options.on_error = [&](const std::string& text) {
        std::lock_guard lock(io);
        err << "error: " << text << std::endl;
    };
    net::Server server(options);
    server.start();
    {
        std::lock_guard lock(io);
        err << "listening on " << options.bind_address << ":" << server.port() << " (mode " << options.config.mode_name()
            << ")" << std::endl;
    }
    g_interrupted = false;
    auto old_int = std::signal(SIGINT, on_signal);
    auto old_term = std::signal(SIGTERM, on_signal);
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    std::signal(SIGINT, old_int);
    std::signal(SIGTERM, old_term);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Digit-reversal substitution cipher toolkit", args.empty() ? "asub" : args.front()};
    app.require_subcommand(1);

    const std::vector<std::string> codec_modes{"paper", "extended"};
    std::string mode = "paper";
    std::optional<std::string> input_arg;
    std::optional<std::string> input_file;
    std::optional<std::string> keys_text;
    std::optional<std::string> output_file;
    bool external = false;
    std::string format = "text";

    auto* encrypt_cmd = app.add_subcommand("encrypt", "Encrypt text into an envelope");
    add_input_options(encrypt_cmd, input_arg, input_file, "plaintext");
    encrypt_cmd->add_option("-m,--mode", mode, "Codec mode")->check(CLI::IsMember(codec_modes));
    encrypt_cmd->add_option("-k,--keys", keys_text, "Explicit keys K1,K2,... (default: derived from the text)");
    encrypt_cmd->add_flag("--external", external, "Leave the keys out of the envelope");
    encrypt_cmd->add_option("--format", format, "Envelope encoding")->check(CLI::IsMember({"text", "binary"}));
    encrypt_cmd->add_option("-o,--output", output_file, "Write the envelope to a file");

    auto* decrypt_cmd = app.add_subcommand("decrypt", "Decrypt an envelope");
    add_input_options(decrypt_cmd, input_arg, input_file, "envelope");
    decrypt_cmd->add_option("-k,--keys", keys_text, "Keys K1,K2,... (required for external transport)");

    auto* keys_cmd = app.add_subcommand("keys", "Print the keys derived from a text");
    add_input_options(keys_cmd, input_arg, input_file, "plaintext");
    keys_cmd->add_option("-m,--mode", mode, "Codec mode")->check(CLI::IsMember(codec_modes));

    auto* attack_cmd = app.add_subcommand("attack", "Recover keys from ciphertext");
    attack_cmd->require_subcommand(1);
    std::string known_plaintext;
    std::size_t key_count = 2;
    auto* kpa_cmd = attack_cmd->add_subcommand("known-plaintext", "Recover keys from a plaintext/ciphertext pair");
    add_input_options(kpa_cmd, input_arg, input_file, "ciphertext envelope or (v1,...) list");
    kpa_cmd->add_option("-p,--plaintext", known_plaintext, "Known plaintext")->required();
    kpa_cmd->add_option("-m,--mode", mode, "Codec mode when the input is a bare list")->check(CLI::IsMember(codec_modes));
    kpa_cmd->add_option("-n,--key-count", key_count, "Number of keys")->check(CLI::Range(1, 255));

    std::optional<std::string> alphabet;
    std::optional<std::string> freq_file;
    std::size_t top = 10;
    bool all = false;
    std::uint64_t limit = 1'000'000;
    auto* coa_cmd = attack_cmd->add_subcommand("ciphertext-only", "Rank key candidates by letter frequency");
    add_input_options(coa_cmd, input_arg, input_file, "ciphertext envelope or (v1,...) list");
    coa_cmd->add_option("-a,--alphabet", alphabet, "Assumed plaintext alphabet (default: envelope mode, else paper)")
        ->check(CLI::IsMember({"paper", "extended", "upper"}));
    coa_cmd->add_option("--freq", freq_file, "Letter frequency table (26 lines of 'LETTER fraction')");
    coa_cmd->add_option("-n,--key-count", key_count, "Number of keys")->check(CLI::Range(1, 8));
    coa_cmd->add_option("--top", top, "Rows to print")->check(CLI::PositiveNumber);
    coa_cmd->add_flag("--all", all, "Print every candidate");
    coa_cmd->add_option("--limit", limit, "Maximum number of key combinations to enumerate");

    auto* analyze_cmd = app.add_subcommand("analyze", "Ciphertext statistics");
    analyze_cmd->require_subcommand(1);
    auto* diffusion_cmd = analyze_cmd->add_subcommand("diffusion", "Distinct ciphertext values per plaintext symbol");
    add_input_options(diffusion_cmd, input_arg, input_file, "ciphertext envelope or (v1,...) list");
    diffusion_cmd->add_option("-p,--plaintext", known_plaintext, "Matching plaintext")->required();

    auto* baseline_cmd = app.add_subcommand("baseline", "Reference substitution ciphers");
    baseline_cmd->require_subcommand(1);
    bool reverse = false;
    int shift = 0;
    std::string keyword;
    auto* mono_cmd = baseline_cmd->add_subcommand("mono", "Monoalphabetic shift (a-z in, A-Z out)");
    add_input_options(mono_cmd, input_arg, input_file, "text");
    mono_cmd->add_option("-s,--shift", shift, "Shift 0-25")->required();
    mono_cmd->add_flag("-d,--decrypt", reverse, "Decrypt instead");
    auto* keyword_cmd = baseline_cmd->add_subcommand("keyword", "Repeating keyword shift, a=1 ... z=26");
    add_input_options(keyword_cmd, input_arg, input_file, "text");
    keyword_cmd->add_option("-k,--key", keyword, "Keyword of a-z")->required();
    keyword_cmd->add_flag("-d,--decrypt", reverse, "Decrypt instead");

    net::ServerOptions serve_options;
    std::uint16_t port = 0;
    std::size_t max_frame = net::kDefaultMaxFrame;
    std::optional<std::string> external_keys;
    auto* serve_cmd = app.add_subcommand("serve", "Run the TCP demo receiver");
    serve_cmd->add_option("--port", port, "TCP port")->required();
    serve_cmd->add_option("--bind", serve_options.bind_address, "Bind address");
    serve_cmd->add_option("-m,--mode", mode, "Codec mode")->check(CLI::IsMember(codec_modes));
    serve_cmd->add_option("--external-keys", external_keys, "Shared keys K1,K2 for out-of-band transport");
    serve_cmd->add_option("--max-frame", max_frame, "Largest accepted frame in bytes");

    std::string address;
    std::string message;
    int timeout_ms = 5000;
    auto* send_cmd = app.add_subcommand("send", "Send one message to a demo receiver");
    send_cmd->add_option("--addr", address, "HOST:PORT")->required();
    send_cmd->add_option("--message", message, "Message text")->required();
    send_cmd->add_option("-m,--mode", mode, "Codec mode")->check(CLI::IsMember(codec_modes));
    send_cmd->add_option("--external-keys", external_keys, "Shared keys K1,K2 for out-of-band transport");
    send_cmd->add_option("--timeout-ms", timeout_ms, "Connect/reply timeout")->check(CLI::PositiveNumber);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("asub");
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (encrypt_cmd->parsed()) {
            const CodecConfig config = CodecConfig::from_name(mode);
            const std::string text = read_input(input_arg, input_file, in);
            const KeySchedule schedule = keys_text ? parse_keys(*keys_text) : derive_keys(text, config);
            const CipherText ct = encrypt(text, schedule, config);
            const Envelope env = external ? Envelope::external(ct) : Envelope::in_band(ct, schedule);
            if (external && !keys_text) err << format_keys(schedule) << "\n";
            std::string encoded;
            if (format == "binary") {
                const auto bytes = encode_binary(env);
                encoded.assign(bytes.begin(), bytes.end());
            } else {
                encoded = encode_text(env);
            }
            if (output_file) {
                std::ofstream f(*output_file, std::ios::binary);
                if (!f) throw UsageError("cannot write " + *output_file);
                f << encoded;
            } else {
                out << encoded;
            }
        } else if (decrypt_cmd->parsed()) {
            const Envelope env = parse_envelope(read_input(input_arg, input_file, in));
            const CodecConfig config = CodecConfig::from_name(env.mode_name);
            std::optional<KeySchedule> schedule = env.keys;
            if (keys_text) schedule = parse_keys(*keys_text);
            if (!schedule) throw UsageError("envelope uses external key transport; pass --keys");
            out << decrypt(env.values, *schedule, config) << "\n";
        } else if (keys_cmd->parsed()) {
            const CodecConfig config = CodecConfig::from_name(mode);
            out << format_keys(derive_keys(read_input(input_arg, input_file, in), config)) << "\n";
        } else if (kpa_cmd->parsed()) {
            const auto ct = parse_ciphertext(read_input(input_arg, input_file, in));
            const CodecConfig config = CodecConfig::from_name(ct.mode.value_or(mode));
            out << format_keys(analysis::known_plaintext_attack(known_plaintext, ct.values, config, key_count).keys)
                << "\n";
        } else if (coa_cmd->parsed()) {
            const auto ct = parse_ciphertext(read_input(input_arg, input_file, in));
            const CodecConfig config = CodecConfig::from_name(alphabet.value_or(ct.mode.value_or("paper")));
            const analysis::FrequencyTable freq =
                freq_file ? analysis::FrequencyTable::load(*freq_file) : analysis::FrequencyTable::english();
            analysis::AttackOptions options;
            options.key_count = key_count;
            options.candidate_limit = limit;
            options.keep = all ? 0 : top;
            const auto report = analysis::ciphertext_only_attack(ct.values, config, freq, options);
            err << "alphabet=" << config.mode_name() << " search_space=" << report.search_space_size << "\n";
            for (const auto& note : report.notes) err << "note: " << note << "\n";
            out << "rank\tkeys\tscore\tplaintext\n";
            for (std::size_t i = 0; i < report.candidates.size(); ++i) {
                const auto& c = report.candidates[i];
                std::ostringstream score;
                score << std::fixed << std::setprecision(4) << c.score;
                out << (i + 1) << "\t" << join_keys(c.schedule) << "\t" << score.str() << "\t" << c.plaintext << "\n";
            }
        } else if (diffusion_cmd->parsed()) {
            const auto ct = parse_ciphertext(read_input(input_arg, input_file, in));
            const auto report = analysis::diffusion_report(known_plaintext, ct.values);
            out << "symbol\tvalue\tcount\n";
            for (const auto& [symbol, hist] : report.per_symbol) {
                for (const auto& [value, count] : hist) {
                    out << static_cast<char>(symbol) << "\t" << value << "\t" << count << "\n";
                }
            }
            out << "max_distinct=" << report.max_distinct << "\n";
        } else if (mono_cmd->parsed()) {
            const std::string text = read_input(input_arg, input_file, in);
            const baselines::ShiftKey key(shift);
            out << (reverse ? baselines::mono_decrypt(text, key) : baselines::mono_encrypt(text, key)) << "\n";
        } else if (keyword_cmd->parsed()) {
            const std::string text = read_input(input_arg, input_file, in);
            const baselines::KeywordKey key(keyword);
            out << (reverse ? baselines::keyword_decrypt(text, key) : baselines::keyword_encrypt(text, key)) << "\n";
        } else if (serve_cmd->parsed()) {
            serve_options.port = port;
            serve_options.config = CodecConfig::from_name(mode);
            serve_options.max_frame = max_frame;
            if (external_keys) serve_options.external_keys = parse_keys(*external_keys);
            return run_serve(serve_options, out, err);
        } else if (send_cmd->parsed()) {
            net::SendOptions options;
            options.config = CodecConfig::from_name(mode);
            options.timeout = std::chrono::milliseconds(timeout_ms);
            if (external_keys) options.external_keys = parse_keys(*external_keys);
            out << net::send(address, message, options) << "\n";
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitOk;
}

}  // namespace asub::cli
