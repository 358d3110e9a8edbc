// Command-line front end: `simulate` runs a configured experiment and writes
// CSVs, `ingest` converts a reward/delay log into a config fragment, and
// `policy` prints the closed-form fair policy for given means.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "faircsb/config.hpp"
#include "faircsb/engine.hpp"
#include "faircsb/ingest.hpp"
#include "faircsb/merit.hpp"

namespace {

constexpr int kExitValidation = 2;

std::vector<std::string> split_csv(const std::string& list) {
    std::vector<std::string> items;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(item);
    return items;
}

int run_simulate(const std::string& config_path, int runs_override, long long seed_override,
                 const std::string& out_override, const std::string& policies_override) {
    faircsb::ExperimentConfig config = faircsb::parse_config(config_path);
    if (runs_override > 0) config.runs = runs_override;
    if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
    if (!out_override.empty()) config.out_dir = out_override;
    if (!policies_override.empty()) {
        config.policies.clear();
        for (const std::string& name : split_csv(policies_override))
            config.policies.push_back(faircsb::policy_kind_from_string(name));
    }
    config.validate();

    const faircsb::ExperimentSummary summary = faircsb::run_experiment(config);
    std::cout << "wrote " << config.out_dir << "/{trace,aggregate,summary}.csv\n";
    for (const auto& agg : summary.policies) {
        std::printf("%-12s cum_rr=%.6g cum_fr=%.6g\n", std::string(to_string(agg.kind)).c_str(),
                    agg.cum_rr_mean.back(), agg.cum_fr_mean.back());
    }
    return 0;
}

int run_ingest(const std::string& log_path, const std::string& out_path) {
    const faircsb::EmpiricalLog log = faircsb::ingest_log(log_path);
    const std::string fragment = faircsb::empirical_config_fragment(log);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw faircsb::ValidationError("cannot create output file: " + out_path);
    out << fragment;
    if (!out.flush()) throw faircsb::ValidationError("failed writing: " + out_path);
    std::cout << "ingested " << log.num_arms() << " arms from " << log_path << " into " << out_path
              << "\n";
    return 0;
}

int run_policy(const std::string& means_csv, const std::string& merit_spec, int subset_size) {
    std::vector<double> means;
    for (const std::string& token : split_csv(means_csv)) {
        try {
            means.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw faircsb::ValidationError("--means: not a number: \"" + token + "\"");
        }
    }
    const faircsb::MeritFunction merit = faircsb::parse_merit_spec(merit_spec);
    const std::vector<double> p_star = faircsb::optimal_policy(merit, means, subset_size);
    for (std::size_t a = 0; a < p_star.size(); ++a) {
        if (a) std::cout << ',';
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.12g", p_star[a]);
        std::cout << buf;
    }
    std::cout << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Merit-fair combinatorial semi-bandit simulator with delayed feedback"};
    app.require_subcommand(1);

    std::string config_path, out_override, policies_override;
    int runs_override = 0;
    long long seed_override = -1;
    CLI::App* simulate = app.add_subcommand("simulate", "Run a configured experiment");
    simulate->add_option("--config", config_path, "JSON experiment config")->required();
    simulate->add_option("--runs", runs_override, "Override the number of replications");
    simulate->add_option("--seed", seed_override, "Override the base seed");
    simulate->add_option("--out", out_override, "Override the output directory");
    simulate->add_option("--policies", policies_override, "Comma-separated policy list override");

    std::string log_path, fragment_path;
    CLI::App* ingest = app.add_subcommand("ingest", "Convert a reward/delay log to a config fragment");
    ingest->add_option("--log", log_path, "CSV log with header arm,reward,delay")->required();
    ingest->add_option("--out", fragment_path, "Output config fragment path")->required();

    std::string means_csv, merit_spec;
    int subset_size = 1;
    CLI::App* policy = app.add_subcommand("policy", "Print the closed-form fair policy");
    policy->add_option("--means", means_csv, "Comma-separated expected rewards")->required();
    policy->add_option("--merit", merit_spec, "Merit spec JSON, e.g. {\"type\":\"identity\"}")
        ->required();
    policy->add_option("-L", subset_size, "Arms selected per round")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (simulate->parsed())
            return run_simulate(config_path, runs_override, seed_override, out_override,
                                policies_override);
        if (ingest->parsed()) return run_ingest(log_path, fragment_path);
        return run_policy(means_csv, merit_spec, subset_size);
    } catch (const faircsb::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
