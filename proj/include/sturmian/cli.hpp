#pragma once

// The sturmctl front end: a command table, the dispatcher, and the named
// verification suites that `verify` runs.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "sturmian/exactnum.hpp"

namespace sturm::cli {

namespace exit_code {
constexpr int ok = 0;
constexpr int check_failed = 1;
constexpr int usage = 2;
constexpr int resolution = 3;
}  // namespace exit_code

struct CommandInfo {
    std::string name;
    std::string operation;  // the library operation or suite runner behind it
    std::string summary;
};

const std::vector<CommandInfo>& command_table();
/// Subcommand names as registered with the argument parser.
std::vector<std::string> registered_subcommands();

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SuiteOptions {
    std::string theta = "quad:(-1+sqrt(5))/2";
    std::size_t kmax = 12;
    int digits = 50;
    PrecisionBudget budget;
};

struct SuiteResult {
    std::string suite;
    std::string property;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::vector<std::string> failed;  // first few failing cases

    bool passed() const { return failures == 0 && checks > 0; }
};

const std::vector<std::string>& suite_names();
/// "all" runs every suite in order. Throws DomainError for an unknown name.
std::vector<SuiteResult> run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace sturm::cli
