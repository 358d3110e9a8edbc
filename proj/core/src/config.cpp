#include "faircsb/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace faircsb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError("config: field '" + path + "' " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) fail(path.empty() ? key : path + "." + key, "is required");
    return obj.at(key);
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "must be a number");
    return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "must be an integer");
    return v.get<std::int64_t>();
}

ExtendedDelay as_extended_delay(const json& v, const std::string& path) {
    if (v.is_string()) {
        if (v.get<std::string>() != "inf") fail(path, "must be a nonnegative integer or \"inf\"");
        return ExtendedDelay::infinite();
    }
    const std::int64_t d = as_integer(v, path);
    if (d < 0) fail(path, "must be >= 0");
    return ExtendedDelay::finite(d);
}

EmpiricalDelay::Atoms parse_atoms(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) fail(path, "must be a nonempty array of [delay, weight] pairs");
    EmpiricalDelay::Atoms atoms;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const json& pair = v[i];
        if (!pair.is_array() || pair.size() != 2) fail(p, "must be a [delay, weight] pair");
        atoms.emplace_back(as_extended_delay(pair[0], p + "[0]"), as_number(pair[1], p + "[1]"));
    }
    return atoms;
}

DelayModel parse_delay_spec(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "must be an object with a \"type\" tag");
    const std::string type = require(v, "type", path).get<std::string>();
    DelayModel model;
    if (type == "fixed") {
        model = FixedDelay{as_integer(require(v, "d", path), join(path, "d"))};
    } else if (type == "geometric") {
        model = GeometricDelay{as_number(require(v, "p", path), join(path, "p"))};
    } else if (type == "pareto") {
        model = ParetoDelay{as_number(require(v, "alpha", path), join(path, "alpha"))};
    } else if (type == "packet_loss") {
        model = PacketLossDelay{as_number(require(v, "p", path), join(path, "p"))};
    } else if (type == "biased_fixed") {
        model = BiasedFixedDelay{
            as_extended_delay(require(v, "delay_reward1", path), join(path, "delay_reward1")),
            as_extended_delay(require(v, "delay_reward0", path), join(path, "delay_reward0"))};
    } else if (type == "empirical") {
        EmpiricalDelay e;
        if (v.contains("by_reward")) {
            const json& br = v.at("by_reward");
            if (!br.is_array() || br.size() != 2)
                fail(join(path, "by_reward"), "must be [atoms_for_reward0, atoms_for_reward1]");
            e.by_reward.push_back(parse_atoms(br[0], join(path, "by_reward[0]")));
            e.by_reward.push_back(parse_atoms(br[1], join(path, "by_reward[1]")));
        } else {
            e.atoms = parse_atoms(require(v, "atoms", path), join(path, "atoms"));
        }
        model = std::move(e);
    } else {
        fail(join(path, "type"),
             "must be one of fixed, geometric, pareto, packet_loss, biased_fixed, empirical");
    }
    try {
        validate_delay_model(model);
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    return model;
}

MeritFunction parse_merit(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "must be an object with a \"type\" tag");
    const std::string type = require(v, "type", path).get<std::string>();
    try {
        if (type == "power_plus") {
            return MeritFunction::power_plus(as_number(require(v, "beta", path), join(path, "beta")),
                                             as_number(require(v, "w", path), join(path, "w")),
                                             as_number(require(v, "c", path), join(path, "c")));
        }
        if (type == "identity") return MeritFunction::identity();
        if (type == "tabulated") {
            const json& values = require(v, "values", path);
            if (!values.is_array()) fail(join(path, "values"), "must be an array");
            std::vector<double> table;
            for (std::size_t i = 0; i < values.size(); ++i)
                table.push_back(as_number(values[i], join(path, "values") + "[" + std::to_string(i) + "]"));
            return MeritFunction::tabulated(std::move(table));
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    fail(join(path, "type"), "must be one of power_plus, identity, tabulated");
}

EmpiricalLog parse_empirical_environment(const json& v, const std::string& path) {
    const json& arms = require(v, "arms", path);
    if (!arms.is_array() || arms.empty()) fail(join(path, "arms"), "must be a nonempty array");
    EmpiricalLog log;
    for (std::size_t a = 0; a < arms.size(); ++a) {
        const std::string ap = join(path, "arms") + "[" + std::to_string(a) + "]";
        const json& pairs = arms[a];
        if (!pairs.is_array() || pairs.empty()) fail(ap, "must be a nonempty array of [reward, delay] pairs");
        log.arm_ids.push_back(std::to_string(a + 1));
        std::vector<std::pair<double, ExtendedDelay>> samples;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const std::string pp = ap + "[" + std::to_string(i) + "]";
            const json& pair = pairs[i];
            if (!pair.is_array() || pair.size() != 2) fail(pp, "must be a [reward, delay] pair");
            const std::int64_t reward = as_integer(pair[0], pp + "[0]");
            if (reward != 0 && reward != 1) fail(pp + "[0]", "reward must be 0 or 1");
            samples.emplace_back(static_cast<double>(reward), as_extended_delay(pair[1], pp + "[1]"));
        }
        log.samples.push_back(std::move(samples));
    }
    return log;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (num_arms < 1) throw ValidationError("config: field 'K' must be >= 1");
    if (subset_size < 1) throw ValidationError("config: field 'L' must be >= 1");
    if (subset_size > num_arms) throw ValidationError("config: L must not exceed K");
    const std::int64_t init_rounds = (num_arms + subset_size - 1) / subset_size;
    if (horizon < init_rounds)
        throw ValidationError("config: field 'T' must be >= ceil(K/L) = " + std::to_string(init_rounds));
    if (runs < 1) throw ValidationError("config: field 'runs' must be >= 1");
    if (policies.empty()) throw ValidationError("config: field 'policies' must be nonempty");
    if (trace_stride < 1) throw ValidationError("config: field 'trace_stride' must be >= 1");
    if (!(delta > 0.0) || delta >= 1.0) throw ValidationError("config: field 'delta' must be in (0, 1)");
    if (fgreedy_epsilon < 0.0 || fgreedy_epsilon > 1.0)
        throw ValidationError("config: field 'fgreedy_epsilon' must be in [0, 1]");

    if (empirical.has_value()) {
        if (empirical->num_arms() != num_arms)
            throw ValidationError("config: empirical environment has " +
                                  std::to_string(empirical->num_arms()) + " arms, expected K = " +
                                  std::to_string(num_arms));
    } else {
        if (static_cast<int>(means.size()) != num_arms)
            throw ValidationError("config: field 'means' must list exactly K values");
        for (double m : means)
            if (!(m >= 0.0) || m > 1.0)
                throw ValidationError("config: field 'means' entries must lie in [0, 1]");
        if (static_cast<int>(delays.size()) != num_arms)
            throw ValidationError("config: field 'delay' must give one model or K models");
        for (const DelayModel& d : delays) validate_delay_model(d);
    }

    try {
        merit.validate();
    } catch (const std::exception& e) {
        throw ValidationError(std::string("config: field 'merit' ") + e.what());
    }
    if (!check_ratio_assumption(merit, num_arms, subset_size))
        throw ValidationError(
            "config: merit ratio assumption violated: max f / min f exceeds (K-1)/(L-1)");
}

ExperimentConfig parse_config_text(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(origin + ": not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ValidationError(origin + ": top-level JSON must be an object");

    ExperimentConfig cfg;
    cfg.num_arms = static_cast<int>(as_integer(require(doc, "K", ""), "K"));
    cfg.subset_size = static_cast<int>(as_integer(require(doc, "L", ""), "L"));
    cfg.horizon = as_integer(require(doc, "T", ""), "T");

    if (doc.contains("environment")) {
        const json& env = doc.at("environment");
        const std::string type = require(env, "type", "environment").get<std::string>();
        if (type != "empirical") fail("environment.type", "must be \"empirical\"");
        cfg.empirical = parse_empirical_environment(env, "environment");
    } else {
        const json& means = require(doc, "means", "");
        if (!means.is_array()) fail("means", "must be an array");
        for (std::size_t i = 0; i < means.size(); ++i)
            cfg.means.push_back(as_number(means[i], "means[" + std::to_string(i) + "]"));

        const json& delay = require(doc, "delay", "");
        if (delay.is_array()) {
            for (std::size_t i = 0; i < delay.size(); ++i)
                cfg.delays.push_back(parse_delay_spec(delay[i], "delay[" + std::to_string(i) + "]"));
        } else {
            const DelayModel shared = parse_delay_spec(delay, "delay");
            cfg.delays.assign(static_cast<std::size_t>(cfg.num_arms), shared);
        }
    }

    cfg.merit = parse_merit(require(doc, "merit", ""), "merit");

    const json& policies = require(doc, "policies", "");
    if (!policies.is_array()) fail("policies", "must be an array of policy names");
    for (std::size_t i = 0; i < policies.size(); ++i) {
        const json& name = policies[i];
        if (!name.is_string()) fail("policies[" + std::to_string(i) + "]", "must be a string");
        try {
            cfg.policies.push_back(policy_kind_from_string(name.get<std::string>()));
        } catch (const std::exception& e) {
            fail("policies[" + std::to_string(i) + "]", e.what());
        }
    }

    if (doc.contains("runs")) cfg.runs = static_cast<int>(as_integer(doc.at("runs"), "runs"));
    if (doc.contains("seed")) cfg.seed = static_cast<std::uint64_t>(as_integer(doc.at("seed"), "seed"));
    if (doc.contains("radius_variant")) {
        const std::string variant = doc.at("radius_variant").get<std::string>();
        if (variant == "theorem") cfg.radius_variant = RadiusVariant::theorem;
        else if (variant == "body") cfg.radius_variant = RadiusVariant::body;
        else fail("radius_variant", "must be \"theorem\" or \"body\"");
    }
    if (doc.contains("delta")) cfg.delta = as_number(doc.at("delta"), "delta");
    if (doc.contains("fgreedy_epsilon"))
        cfg.fgreedy_epsilon = as_number(doc.at("fgreedy_epsilon"), "fgreedy_epsilon");
    if (doc.contains("out")) cfg.out_dir = doc.at("out").get<std::string>();
    if (doc.contains("trace_stride")) cfg.trace_stride = as_integer(doc.at("trace_stride"), "trace_stride");
    if (doc.contains("threads")) cfg.threads = static_cast<int>(as_integer(doc.at("threads"), "threads"));

    if (doc.contains("solver")) {
        const json& solver = doc.at("solver");
        if (!solver.is_object()) fail("solver", "must be an object");
        if (solver.contains("random_starts"))
            cfg.solver.random_starts = static_cast<int>(as_integer(solver.at("random_starts"), "solver.random_starts"));
        if (solver.contains("bracket_points"))
            cfg.solver.bracket_points = static_cast<int>(as_integer(solver.at("bracket_points"), "solver.bracket_points"));
        if (solver.contains("line_tol")) cfg.solver.line_tol = as_number(solver.at("line_tol"), "solver.line_tol");
        if (solver.contains("sweep_tol")) cfg.solver.sweep_tol = as_number(solver.at("sweep_tol"), "solver.sweep_tol");
        if (solver.contains("max_sweeps"))
            cfg.solver.max_sweeps = static_cast<int>(as_integer(solver.at("max_sweeps"), "solver.max_sweeps"));
        if (solver.contains("seed"))
            cfg.solver.seed = static_cast<std::uint64_t>(as_integer(solver.at("seed"), "solver.seed"));
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path.filename().string());
}

MeritFunction parse_merit_spec(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("merit spec: not valid JSON: ") + e.what());
    }
    return parse_merit(doc, "merit");
}

}  // namespace faircsb
