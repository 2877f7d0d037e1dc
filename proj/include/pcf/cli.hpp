#pragma once

#include <string>
#include <vector>

namespace pcf::cli {

struct RunResult {
    int code = 0;
    std::string out;
};

/// Runs one command (argv without the program name). Exit codes: 0 ok,
/// 1 domain/usage error, 2 precision or budget exhaustion.
RunResult run(const std::vector<std::string>& args);

int main_entry(int argc, char** argv);

}  // namespace pcf::cli
