#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "faircsb/delay.hpp"
#include "faircsb/ingest.hpp"
#include "faircsb/merit.hpp"
#include "faircsb/optimize.hpp"
#include "faircsb/policies.hpp"

namespace faircsb {

// User-input problem (config schema, malformed log, bad CLI argument). The
// CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    int num_arms = 0;
    int subset_size = 0;
    std::int64_t horizon = 0;
    int runs = 100;
    std::uint64_t seed = 1;

    // Bernoulli environment: per-arm means and delay models. Ignored when an
    // empirical environment is present.
    std::vector<double> means;
    std::vector<DelayModel> delays;
    std::optional<EmpiricalLog> empirical;

    MeritFunction merit = MeritFunction::power_plus(1.0, 2.0, 4.0);
    std::vector<PolicyKind> policies;

    RadiusVariant radius_variant = RadiusVariant::theorem;
    double delta = 0.05;
    SolverOptions solver;
    double fgreedy_epsilon = 0.1;

    std::string out_dir = "results";
    std::int64_t trace_stride = 1;  // thin trace.csv rows; the final round is always written
    int threads = 0;                // 0 = hardware concurrency

    // Throws ValidationError with a field path on any schema violation.
    void validate() const;
};

ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& json_text, const std::string& origin);

// Merit spec parsing is shared with the `policy` CLI subcommand, e.g.
// {"type":"power_plus","beta":1.0,"w":2.0,"c":4}.
MeritFunction parse_merit_spec(const std::string& json_text);

}  // namespace faircsb
