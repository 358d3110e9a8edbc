#include "faircsb/delay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace faircsb {

ExtendedDelay ExtendedDelay::finite(std::int64_t rounds) {
    if (rounds < 0) throw std::invalid_argument("ExtendedDelay: finite delay must be >= 0");
    return ExtendedDelay(false, rounds);
}

std::int64_t ExtendedDelay::rounds() const {
    if (infinite_) throw std::logic_error("ExtendedDelay: rounds() on INFINITE");
    return rounds_;
}

namespace {

void validate_atoms(const EmpiricalDelay::Atoms& atoms) {
    if (atoms.empty()) throw std::invalid_argument("EmpiricalDelay: empty histogram");
    double total = 0.0;
    for (const auto& [delay, weight] : atoms) {
        (void)delay;
        if (weight < 0.0) throw std::invalid_argument("EmpiricalDelay: negative weight");
        total += weight;
    }
    if (total <= 0.0) throw std::invalid_argument("EmpiricalDelay: zero total weight");
}

ExtendedDelay sample_atoms(const EmpiricalDelay::Atoms& atoms, Rng& rng) {
    double total = 0.0;
    for (const auto& [delay, weight] : atoms) {
        (void)delay;
        total += weight;
    }
    double u = rng.uniform01() * total;
    for (const auto& [delay, weight] : atoms) {
        u -= weight;
        if (u < 0.0) return delay;
    }
    return atoms.back().first;
}

double atoms_cdf(const EmpiricalDelay::Atoms& atoms, std::int64_t z) {
    double total = 0.0;
    double mass = 0.0;
    for (const auto& [delay, weight] : atoms) {
        total += weight;
        if (!delay.is_infinite() && delay.rounds() <= z) mass += weight;
    }
    return mass / total;
}

ExtendedDelay atoms_quantile(const EmpiricalDelay::Atoms& atoms, double q) {
    double total = 0.0;
    for (const auto& [delay, weight] : atoms) {
        (void)delay;
        total += weight;
    }
    EmpiricalDelay::Atoms sorted = atoms;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double mass = 0.0;
    for (const auto& [delay, weight] : sorted) {
        if (delay.is_infinite()) break;
        mass += weight;
        if (mass / total >= q) return delay;
    }
    return ExtendedDelay::infinite();
}

// Closed-form geometric CDF: 1 - (1-p)^(z+1).
double geometric_cdf(double p, std::int64_t z) {
    if (z < 0) return 0.0;
    if (p >= 1.0) return 1.0;
    return -std::expm1(static_cast<double>(z + 1) * std::log1p(-p));
}

// Discretized Pareto CDF: P[floor(X) <= z] = 1 - (z+1)^(-alpha) for z >= 1.
double pareto_cdf(double alpha, std::int64_t z) {
    if (z < 1) return 0.0;
    return 1.0 - std::pow(static_cast<double>(z + 1), -alpha);
}

// Nudges a closed-form candidate until it is the minimal z with CDF(z) >= q;
// absorbs any floating-point slack in the algebraic inversion.
std::int64_t fixup_quantile(std::int64_t z, double q, auto cdf) {
    while (z > 0 && cdf(z - 1) >= q) --z;
    while (cdf(z) < q) ++z;
    return z;
}

}  // namespace

void validate_delay_model(const DelayModel& model) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, FixedDelay>) {
                if (m.rounds < 0) throw std::invalid_argument("FixedDelay: rounds must be >= 0");
            } else if constexpr (std::is_same_v<T, GeometricDelay>) {
                if (!(m.success_prob > 0.0) || m.success_prob > 1.0)
                    throw std::invalid_argument("GeometricDelay: success_prob must be in (0, 1]");
            } else if constexpr (std::is_same_v<T, ParetoDelay>) {
                if (!(m.tail_index > 0.0))
                    throw std::invalid_argument("ParetoDelay: tail_index must be > 0");
            } else if constexpr (std::is_same_v<T, PacketLossDelay>) {
                if (!(m.arrival_prob > 0.0) || m.arrival_prob > 1.0)
                    throw std::invalid_argument("PacketLossDelay: arrival_prob must be in (0, 1]");
            } else if constexpr (std::is_same_v<T, BiasedFixedDelay>) {
                // ExtendedDelay construction already enforces >= 0.
            } else if constexpr (std::is_same_v<T, EmpiricalDelay>) {
                if (!m.by_reward.empty()) {
                    if (m.by_reward.size() != 2)
                        throw std::invalid_argument("EmpiricalDelay: by_reward must hold exactly 2 histograms");
                    for (const auto& atoms : m.by_reward) validate_atoms(atoms);
                } else {
                    validate_atoms(m.atoms);
                }
            }
        },
        model);
}

ExtendedDelay sample_delay(const DelayModel& model, double reward, Rng& rng) {
    return std::visit(
        [&](const auto& m) -> ExtendedDelay {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, FixedDelay>) {
                return ExtendedDelay::finite(m.rounds);
            } else if constexpr (std::is_same_v<T, GeometricDelay>) {
                if (m.success_prob >= 1.0) return ExtendedDelay::finite(0);
                const double u = rng.uniform01();
                const double z = std::floor(std::log1p(-u) / std::log1p(-m.success_prob));
                return ExtendedDelay::finite(static_cast<std::int64_t>(z));
            } else if constexpr (std::is_same_v<T, ParetoDelay>) {
                const double u = rng.uniform01();
                const double x = std::pow(1.0 - u, -1.0 / m.tail_index);
                return ExtendedDelay::finite(static_cast<std::int64_t>(std::floor(x)));
            } else if constexpr (std::is_same_v<T, PacketLossDelay>) {
                return rng.uniform01() < m.arrival_prob ? ExtendedDelay::finite(0)
                                                        : ExtendedDelay::infinite();
            } else if constexpr (std::is_same_v<T, BiasedFixedDelay>) {
                return reward == 1.0 ? m.delay_reward1 : m.delay_reward0;
            } else {
                static_assert(std::is_same_v<T, EmpiricalDelay>);
                if (!m.by_reward.empty()) {
                    const std::size_t idx = reward == 1.0 ? 1 : 0;
                    return sample_atoms(m.by_reward[idx], rng);
                }
                return sample_atoms(m.atoms, rng);
            }
        },
        model);
}

double delay_cdf(const DelayModel& model, std::int64_t z) {
    if (z < 0) return 0.0;
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, FixedDelay>) {
                return z >= m.rounds ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, GeometricDelay>) {
                return geometric_cdf(m.success_prob, z);
            } else if constexpr (std::is_same_v<T, ParetoDelay>) {
                return pareto_cdf(m.tail_index, z);
            } else if constexpr (std::is_same_v<T, PacketLossDelay>) {
                return m.arrival_prob;
            } else if constexpr (std::is_same_v<T, BiasedFixedDelay>) {
                const double c1 =
                    (!m.delay_reward1.is_infinite() && z >= m.delay_reward1.rounds()) ? 1.0 : 0.0;
                const double c0 =
                    (!m.delay_reward0.is_infinite() && z >= m.delay_reward0.rounds()) ? 1.0 : 0.0;
                return std::min(c1, c0);
            } else {
                static_assert(std::is_same_v<T, EmpiricalDelay>);
                if (!m.by_reward.empty())
                    return std::min(atoms_cdf(m.by_reward[0], z), atoms_cdf(m.by_reward[1], z));
                return atoms_cdf(m.atoms, z);
            }
        },
        model);
}

ExtendedDelay quantile(const DelayModel& model, double q) {
    if (!(q > 0.0) || q > 1.0) throw std::domain_error("quantile: q must be in (0, 1]");
    return std::visit(
        [&](const auto& m) -> ExtendedDelay {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, FixedDelay>) {
                return ExtendedDelay::finite(m.rounds);
            } else if constexpr (std::is_same_v<T, GeometricDelay>) {
                const double p = m.success_prob;
                if (p >= 1.0) return ExtendedDelay::finite(0);
                if (q >= 1.0) return ExtendedDelay::infinite();
                double guess = std::ceil(std::log1p(-q) / std::log1p(-p) - 1.0);
                std::int64_t z = std::max<std::int64_t>(0, static_cast<std::int64_t>(guess));
                z = fixup_quantile(z, q, [&](std::int64_t zz) { return geometric_cdf(p, zz); });
                return ExtendedDelay::finite(z);
            } else if constexpr (std::is_same_v<T, ParetoDelay>) {
                if (q >= 1.0) return ExtendedDelay::infinite();
                double guess = std::ceil(std::pow(1.0 - q, -1.0 / m.tail_index) - 1.0);
                std::int64_t z = std::max<std::int64_t>(1, static_cast<std::int64_t>(guess));
                z = fixup_quantile(z, q, [&](std::int64_t zz) { return pareto_cdf(m.tail_index, zz); });
                return ExtendedDelay::finite(z);
            } else if constexpr (std::is_same_v<T, PacketLossDelay>) {
                return q <= m.arrival_prob ? ExtendedDelay::finite(0) : ExtendedDelay::infinite();
            } else if constexpr (std::is_same_v<T, BiasedFixedDelay>) {
                return std::max(m.delay_reward1, m.delay_reward0,
                                [](const ExtendedDelay& a, const ExtendedDelay& b) { return a < b; });
            } else {
                static_assert(std::is_same_v<T, EmpiricalDelay>);
                if (!m.by_reward.empty()) {
                    const ExtendedDelay d0 = atoms_quantile(m.by_reward[0], q);
                    const ExtendedDelay d1 = atoms_quantile(m.by_reward[1], q);
                    return d0 < d1 ? d1 : d0;
                }
                return atoms_quantile(m.atoms, q);
            }
        },
        model);
}

ExtendedDelay max_quantile(std::span<const DelayModel> models, double q) {
    if (models.empty()) throw std::invalid_argument("max_quantile: empty model list");
    ExtendedDelay best = quantile(models[0], q);
    for (std::size_t i = 1; i < models.size(); ++i) {
        const ExtendedDelay d = quantile(models[i], q);
        if (best < d) best = d;
    }
    return best;
}

}  // namespace faircsb
