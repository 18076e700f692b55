#include "asub/cli.hpp"

#include <sstream>

#include "doctest.h"

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
    args.insert(args.begin(), "asub");
    std::istringstream in(input);
    std::ostringstream out;
    std::ostringstream err;
    const int status = asub::cli::run(args, in, out, err);
    return {status, out.str(), err.str()};
}

const std::string kPaperEnvelope =
    "ASUB;v=1;mode=paper;keys=in-band:1056,1155\n"
    "(1084,1251,1094,1163,1152,1231,1104,1251,1124,1251,1084,1253,1153,1242,1152)\n";

}  // namespace

TEST_CASE("keys") {
    const auto r = run({"keys", "RESPECTEVERYONE"});
    CHECK(r.status == 0);
    CHECK(r.out == "K1=1056 K2=1155\n");
}

TEST_CASE("encrypt and decrypt") {
    auto r = run({"encrypt", "RESPECTEVERYONE"});
    CHECK(r.status == 0);
    CHECK(r.out == kPaperEnvelope);
    r = run({"decrypt"}, kPaperEnvelope);
    CHECK(r.status == 0);
    CHECK(r.out == "RESPECTEVERYONE\n");

    r = run({"encrypt", ""});
    CHECK(r.out == "ASUB;v=1;mode=paper;keys=in-band:0,0\n()\n");

    // Trailing newline may be missing when the envelope comes from an argument.
    r = run({"decrypt", kPaperEnvelope.substr(0, kPaperEnvelope.size() - 1)});
    CHECK(r.out == "RESPECTEVERYONE\n");
}

TEST_CASE("external keys") {
    auto r = run({"encrypt", "--external", "--keys", "7,8,9", "--mode", "extended", "abc"});
    CHECK(r.status == 0);
    CHECK(r.out == "ASUB;v=1;mode=extended;keys=external\n(797,898,999)\n");
    const std::string env = r.out;
    r = run({"decrypt"}, env);
    CHECK(r.status == 2);
    r = run({"decrypt", "--keys", "7,8,9"}, env);
    CHECK(r.out == "abc\n");
    r = run({"encrypt", "--external", "MM"});
    CHECK(r.err == "K1=154 K2=154\n");
}

TEST_CASE("attacks and analysis") {
    auto r = run({"attack", "known-plaintext", "--plaintext", "RESPECTEVERYONE"}, kPaperEnvelope);
    CHECK(r.status == 0);
    CHECK(r.out == "K1=1056 K2=1155\n");
    r = run({"attack", "known-plaintext", "-p", "M", "(231)"});
    CHECK(r.out == "K1=154 K2=?\n");

    r = run({"attack", "ciphertext-only", "--alphabet", "upper", "--all"}, kPaperEnvelope);
    CHECK(r.status == 0);
    CHECK(r.out.rfind("rank\tkeys\tscore\tplaintext\n", 0) == 0);
    CHECK(r.out.find("\t1056,1155\t") != std::string::npos);
    CHECK(r.out.find("\tRESPECTEVERYONE\n") != std::string::npos);

    r = run({"attack", "ciphertext-only", "--top", "3"}, kPaperEnvelope);
    CHECK(r.status == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);

    r = run({"analyze", "diffusion", "-p", "RESPECTEVERYONE"}, kPaperEnvelope);
    CHECK(r.out.find("E\t1152\t2\nE\t1251\t3\n") != std::string::npos);
    CHECK(r.out.find("max_distinct=2\n") != std::string::npos);
}

TEST_CASE("baselines") {
    CHECK(run({"baseline", "mono", "--shift", "4", "abcdea"}).out == "EFGHIE\n");
    CHECK(run({"baseline", "mono", "--shift", "4", "--decrypt", "EFGHIE"}).out == "abcdea\n");
    CHECK(run({"baseline", "keyword", "--key", "abcd", "welcome"}).out == "xgogpoh\n");
    CHECK(run({"baseline", "keyword", "--key", "abcd", "-d", "xgogpoh"}).out == "welcome\n");
}

TEST_CASE("exit codes") {
    CHECK(run({}).status == 2);
    CHECK(run({"frobnicate"}).status == 2);
    CHECK(run({"encrypt", "--mode", "latin1", "x"}).status == 2);
    CHECK(run({"encrypt", "--keys", "1,x", "A"}).status == 2);
    CHECK(run({"--help"}).status == 0);

    auto r = run({"encrypt", "lowercase z"});
    CHECK(r.status == 1);
    CHECK(r.err.find("AlphabetViolation") != std::string::npos);
    r = run({"decrypt"}, "ASUB;v=1;mode=paper;keys=external\n(1 2)\n");
    CHECK(r.status == 1);
    CHECK(r.err.find("ParseError") != std::string::npos);
    r = run({"decrypt", "--keys", "1"}, "ASUB;v=1;mode=paper;keys=external\n(0)\n");
    CHECK(r.status == 1);
    CHECK(r.err.find("NegativeResidue") != std::string::npos);
}
