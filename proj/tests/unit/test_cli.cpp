#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "sturmian/cli.hpp"

using namespace sturm::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::string kGolden = "quad:(-1+sqrt(5))/2";

}  // namespace

TEST_CASE("command table covers every subcommand with a distinct operation") {
    const std::set<std::string> expected = {"word", "variants", "decompose", "number", "approx",
                                            "schedule", "witness", "subspace", "delta", "phi",
                                            "gaps", "member", "orbit", "rotnum", "verify"};
    std::set<std::string> names, ops;
    for (const auto& c : command_table()) {
        CHECK(names.insert(c.name).second);
        CHECK(ops.insert(c.operation).second);
        CHECK_FALSE(c.summary.empty());
    }
    CHECK(names == expected);
    auto reg = registered_subcommands();
    CHECK(std::set<std::string>(reg.begin(), reg.end()) == expected);
    CHECK(reg.size() == expected.size());
}

TEST_CASE("help exits 0 for the tool and every subcommand") {
    CHECK(call({"--help"}).code == exit_code::ok);
    for (const auto& c : command_table()) {
        Outcome o = call({c.name, "--help"});
        CHECK_MESSAGE(o.code == exit_code::ok, c.name);
        CHECK(o.out.find(c.summary) != std::string::npos);
    }
}

TEST_CASE("documented examples") {
    Outcome w = call({"word", "--theta", "cf:[1]", "--n", "8", "--alphabet", "0,1"});
    CHECK(w.code == exit_code::ok);
    CHECK(w.out == "10110101\n");

    Outcome v = call({"verify", "--suite", "word-identities", "--theta", kGolden, "--kmax", "12"});
    CHECK(v.code == exit_code::ok);

    Outcome g = call({"gaps", "--lambda", "1/2", "--theta", "cf:[1]", "--L", "5", "--format", "csv"});
    CHECK(g.code == exit_code::ok);
    std::istringstream rows(g.out);
    std::string line;
    std::getline(rows, line);
    CHECK(line == "l,left_decimal,right_decimal,width_exact_num,width_exact_den");
    int l = 0;
    while (std::getline(rows, line)) {
        ++l;
        CHECK(line.substr(0, line.find(',')) == std::to_string(l));
        std::size_t num_at = line.rfind(',', line.rfind(',') - 1) + 1;
        CHECK(line.substr(num_at) == "1," + std::to_string(1 << l));
    }
    CHECK(l == 5);
}

TEST_CASE("examples match the golden files byte for byte") {
    const std::string dir = STURMIAN_GOLDEN_DIR;
    const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
        {"word.txt", {"word", "--theta", "cf:[1]", "--n", "8", "--alphabet", "0,1"}},
        {"verify_word_identities.txt", {"verify", "--suite", "word-identities", "--theta", kGolden, "--kmax", "12"}},
        {"gaps.csv", {"gaps", "--lambda", "1/2", "--theta", "cf:[1]", "--L", "5", "--format", "csv"}},
    };
    for (const auto& [file, args] : cases) {
        Outcome a = call(args), b = call(args);
        CHECK_MESSAGE(a.out == b.out, file);
        CHECK_MESSAGE(a.out == slurp(dir + "/" + file), file);
    }
}

TEST_CASE("exit codes") {
    SUBCASE("usage errors") {
        CHECK(call({}).code == exit_code::usage);
        CHECK(call({"bogus"}).code == exit_code::usage);
        CHECK(call({"word", "--n", "3"}).code == exit_code::usage);
        CHECK(call({"word", "--theta", "quad:1/2", "--n", "3"}).code == exit_code::usage);
        CHECK(call({"verify", "--suite", "nonexistent"}).code == exit_code::usage);
        CHECK(call({"delta", "--lambda", "3/2", "--theta", kGolden}).code == exit_code::usage);
        Outcome o = call({"bogus"});
        CHECK(o.err.find("Subcommands:") != std::string::npos);
    }
    SUBCASE("resolution exhausted names the operation and the bits reached") {
        Outcome o = call({"--max-bits", "1024", "rotnum", "--lambda", "1/2", "--theta", kGolden, "--n", "100000"});
        CHECK(o.code == exit_code::resolution);
        std::string all = o.out + o.err;
        CHECK(all.find("rotation_number_estimate") != std::string::npos);
        CHECK(all.find("1024") != std::string::npos);
    }
    SUBCASE("a suite with no checks fails") {
        CHECK(call({"verify", "--suite", "approximants", "--kmax", "2"}).code == exit_code::check_failed);
    }
}

TEST_CASE("every suite passes at the defaults") {
    for (const auto& name : suite_names()) {
        if (name == "all") continue;
        for (const auto& r : run_suite(name, SuiteOptions{})) {
            CHECK_MESSAGE(r.passed(), r.suite);
            CHECK(r.checks > 0);
        }
    }
    CHECK_THROWS_AS(run_suite("nope", SuiteOptions{}), sturm::DomainError);
}

TEST_CASE("phi accepts arguments outside [0,1)") {
    Outcome o = call({"--digits", "10", "phi", "--lambda", "1/2", "--theta", kGolden, "--y", "rat:1"});
    CHECK(o.code == exit_code::ok);
    CHECK(o.out.find("\"lo\":\"1.0000000000\"") != std::string::npos);
}

TEST_CASE("config file supplies global flags") {
    const std::string path = "cli_test_config.ini";
    {
        std::ofstream cfg(path);
        cfg << "digits = 12\n";
    }
    Outcome a = call({"--config", path, "delta", "--lambda", "1/2", "--theta", kGolden});
    Outcome b = call({"--digits", "12", "delta", "--lambda", "1/2", "--theta", kGolden});
    CHECK(a.code == exit_code::ok);
    CHECK(a.out == b.out);
    std::remove(path.c_str());
}
