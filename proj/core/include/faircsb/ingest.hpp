#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "faircsb/delay.hpp"

namespace faircsb {

// Per-arm empirical joint law over (reward, delay) pairs, as ingested from a
// log file. Sampling a pair jointly makes the delays reward-dependent by
// construction.
struct EmpiricalLog {
    std::vector<std::string> arm_ids;  // distinct ids in order of first appearance
    std::vector<std::vector<std::pair<double, ExtendedDelay>>> samples;  // one list per arm

    int num_arms() const { return static_cast<int>(arm_ids.size()); }
    std::vector<double> mean_rewards() const;
};

// Reads a CSV log with header `arm,reward,delay`; rewards must be 0/1 and
// delays nonnegative integers or the literal `inf`. Malformed rows are
// reported with their line number; a file without data rows is rejected.
EmpiricalLog ingest_log(const std::filesystem::path& path);

// JSON config fragment ({"K": ..., "environment": {...}}) that plugs the log
// into an experiment config.
std::string empirical_config_fragment(const EmpiricalLog& log);

}  // namespace faircsb
