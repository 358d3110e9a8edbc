#include "faircsb/ingest.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "faircsb/config.hpp"

namespace faircsb {

namespace {

std::string trim(std::string s) {
    const auto from = s.find_first_not_of(" \t\r");
    const auto to = s.find_last_not_of(" \t\r");
    if (from == std::string::npos) return "";
    return s.substr(from, to - from + 1);
}

std::int64_t parse_int_field(const std::string& token, const std::string& where) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ValidationError(where + ": expected an integer, got \"" + token + "\"");
    return value;
}

}  // namespace

std::vector<double> EmpiricalLog::mean_rewards() const {
    std::vector<double> means(samples.size(), 0.0);
    for (std::size_t a = 0; a < samples.size(); ++a) {
        double sum = 0.0;
        for (const auto& [reward, delay] : samples[a]) {
            (void)delay;
            sum += reward;
        }
        means[a] = samples[a].empty() ? 0.0 : sum / static_cast<double>(samples[a].size());
    }
    return means;
}

EmpiricalLog ingest_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open log file: " + path.string());

    const std::string name = path.filename().string();
    std::string line;
    if (!std::getline(in, line) || trim(line) != "arm,reward,delay")
        throw ValidationError(name + ":1: expected header \"arm,reward,delay\"");

    EmpiricalLog log;
    std::unordered_map<std::string, std::size_t> arm_index;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = trim(line);
        if (row.empty()) continue;
        const std::string where = name + ":" + std::to_string(line_no);

        std::stringstream ss(row);
        std::string arm_token, reward_token, delay_token, extra;
        if (!std::getline(ss, arm_token, ',') || !std::getline(ss, reward_token, ',') ||
            !std::getline(ss, delay_token, ','))
            throw ValidationError(where + ": expected 3 comma-separated fields");
        if (std::getline(ss, extra, ','))
            throw ValidationError(where + ": expected 3 comma-separated fields");

        arm_token = trim(arm_token);
        if (arm_token.empty()) throw ValidationError(where + ": empty arm id");

        const std::int64_t reward = parse_int_field(trim(reward_token), where + ": reward");
        if (reward != 0 && reward != 1)
            throw ValidationError(where + ": reward must be 0 or 1, got " + std::to_string(reward));

        ExtendedDelay delay = ExtendedDelay::infinite();
        const std::string delay_str = trim(delay_token);
        if (delay_str != "inf") {
            const std::int64_t d = parse_int_field(delay_str, where + ": delay");
            if (d < 0) throw ValidationError(where + ": delay must be >= 0 or \"inf\"");
            delay = ExtendedDelay::finite(d);
        }

        auto [it, inserted] = arm_index.try_emplace(arm_token, log.arm_ids.size());
        if (inserted) {
            log.arm_ids.push_back(arm_token);
            log.samples.emplace_back();
        }
        log.samples[it->second].emplace_back(static_cast<double>(reward), delay);
    }
    if (log.arm_ids.empty()) throw ValidationError(name + ": no data rows");
    return log;
}

std::string empirical_config_fragment(const EmpiricalLog& log) {
    nlohmann::json arms = nlohmann::json::array();
    for (const auto& arm_samples : log.samples) {
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& [reward, delay] : arm_samples) {
            nlohmann::json pair = nlohmann::json::array();
            pair.push_back(static_cast<int>(reward));
            if (delay.is_infinite())
                pair.push_back("inf");
            else
                pair.push_back(delay.rounds());
            pairs.push_back(std::move(pair));
        }
        arms.push_back(std::move(pairs));
    }
    nlohmann::json fragment = {
        {"K", log.num_arms()},
        {"environment", {{"type", "empirical"}, {"arms", std::move(arms)}}},
    };
    return fragment.dump(2) + "\n";
}

}  // namespace faircsb
