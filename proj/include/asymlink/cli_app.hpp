#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace asymlink {

struct SelftestResult {
    std::string id;  // module.invariant identifier
    bool pass = false;
    std::string detail;
};

/// The quick identity suites behind `selftest` (also reused by tests).
std::vector<SelftestResult> run_selftests(std::uint64_t seed);

/// Entry point of the command-line tool. Exit codes: 0 = all comparisons pass,
/// 2 = statistical disagreement, 1 = operational error.
int cli_main(int argc, char** argv);

}  // namespace asymlink
