#pragma once

#include "bohr/sampling.hpp"

#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

namespace bohr {

/// Exit codes of the bohr tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitViolation = 1,  // certificate invalid or checked inequality violated
    kExitUsage = 2,      // bad flags or arguments
    kExitFailure = 3,    // numerical or evaluation failure
};

/// Everything that determines a run's numeric payload.
struct RunConfig {
    std::string subcommand;
    std::uint64_t seed = 7;
    SamplingPlan plan;
    std::string out;  // empty: standard output
    std::string format = "json";
    unsigned threads = 0;  // 0: hardware concurrency
    nlohmann::json params = nlohmann::json::object();
};

void to_json(nlohmann::json& j, const RunConfig& c);

/// Runs one bohr command line (without the program name).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bohr
