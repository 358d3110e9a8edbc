#include "faircsb/merit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace faircsb {

namespace {

constexpr int kGridIntervals = 10000;

double int_pow(double x, long long n) {
    double acc = 1.0;
    while (n > 0) {
        if (n & 1) acc *= x;
        x *= x;
        n >>= 1;
    }
    return acc;
}

double pow_fast(double x, double e) {
    const double r = std::round(e);
    if (r == e && r >= 0.0 && r <= 64.0) return int_pow(x, static_cast<long long>(r));
    return std::pow(x, e);
}

}  // namespace

MeritFunction MeritFunction::power_plus(double offset, double weight, double exponent) {
    if (!(offset > 0.0)) throw std::invalid_argument("MeritFunction: offset must be > 0");
    if (weight < 0.0) throw std::invalid_argument("MeritFunction: weight must be >= 0");
    if (exponent < 1.0) throw std::invalid_argument("MeritFunction: exponent must be >= 1");
    return MeritFunction(PowerPlusForm{offset, weight, exponent});
}

MeritFunction MeritFunction::identity() { return MeritFunction(IdentityForm{}); }

MeritFunction MeritFunction::tabulated(std::vector<double> values) {
    if (values.size() < 2) throw std::invalid_argument("MeritFunction: need >= 2 table values");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("MeritFunction: non-finite table value");
    return MeritFunction(TabulatedForm{std::move(values)});
}

double MeritFunction::operator()(double mu) const {
    if (!(mu >= 0.0) || mu > 1.0) throw std::domain_error("MeritFunction: mu must be in [0, 1]");
    return std::visit(
        [mu](const auto& form) -> double {
            using T = std::decay_t<decltype(form)>;
            if constexpr (std::is_same_v<T, PowerPlusForm>) {
                return form.offset + form.weight * pow_fast(mu, form.exponent);
            } else if constexpr (std::is_same_v<T, IdentityForm>) {
                return mu;
            } else {
                const auto& v = form.values;
                const double pos = mu * static_cast<double>(v.size() - 1);
                const std::size_t i = std::min(static_cast<std::size_t>(pos), v.size() - 2);
                const double frac = pos - static_cast<double>(i);
                return v[i] + frac * (v[i + 1] - v[i]);
            }
        },
        form_);
}

double MeritFunction::min_merit() const {
    return std::visit(
        [](const auto& form) -> double {
            using T = std::decay_t<decltype(form)>;
            if constexpr (std::is_same_v<T, PowerPlusForm>) {
                return form.offset;  // weight >= 0, exponent >= 1: minimum at mu = 0
            } else if constexpr (std::is_same_v<T, IdentityForm>) {
                return 0.0;
            } else {
                return *std::min_element(form.values.begin(), form.values.end());
            }
        },
        form_);
}

double MeritFunction::lipschitz() const {
    return std::visit(
        [](const auto& form) -> double {
            using T = std::decay_t<decltype(form)>;
            if constexpr (std::is_same_v<T, PowerPlusForm>) {
                return form.weight * form.exponent;
            } else if constexpr (std::is_same_v<T, IdentityForm>) {
                return 1.0;
            } else {
                const auto& v = form.values;
                const double h = 1.0 / static_cast<double>(v.size() - 1);
                double m = 0.0;
                for (std::size_t i = 0; i + 1 < v.size(); ++i)
                    m = std::max(m, std::abs(v[i + 1] - v[i]) / h);
                return m;
            }
        },
        form_);
}

void MeritFunction::validate() const {
    const double lambda = min_merit();
    if (!(lambda > 0.0))
        throw std::domain_error("MeritFunction: minimum merit on [0,1] must be positive");
    const double lip = lipschitz();
    const double h = 1.0 / kGridIntervals;
    double prev = (*this)(0.0);
    for (int i = 1; i <= kGridIntervals; ++i) {
        const double x = static_cast<double>(i) * h;
        const double fx = (*this)(x);
        if (fx < lambda - 1e-12)
            throw std::domain_error("MeritFunction: grid value below declared minimum merit");
        if (std::abs(fx - prev) > lip * h + 1e-9)
            throw std::domain_error("MeritFunction: declared Lipschitz constant violated");
        prev = fx;
    }
}

bool check_ratio_assumption(const MeritFunction& f, int num_arms, int subset_size) {
    if (subset_size < 1 || num_arms < subset_size)
        throw std::invalid_argument("check_ratio_assumption: need K >= L >= 1");
    if (subset_size == 1) return true;
    double fmin = f(0.0), fmax = f(0.0);
    for (int i = 1; i <= kGridIntervals; ++i) {
        const double fx = f(static_cast<double>(i) / kGridIntervals);
        fmin = std::min(fmin, fx);
        fmax = std::max(fmax, fx);
    }
    if (!(fmin > 0.0))
        throw std::domain_error("check_ratio_assumption: minimum merit must be positive");
    const double bound = static_cast<double>(num_arms - 1) / static_cast<double>(subset_size - 1);
    return fmax / fmin <= bound + 1e-12;
}

std::vector<double> optimal_policy(const MeritFunction& f, std::span<const double> means,
                                   int subset_size) {
    const int num_arms = static_cast<int>(means.size());
    if (num_arms < 1) throw std::invalid_argument("optimal_policy: empty means");
    if (subset_size < 1 || subset_size > num_arms)
        throw std::invalid_argument("optimal_policy: need 1 <= L <= K");

    std::vector<double> merits(means.size());
    double total = 0.0;
    for (std::size_t a = 0; a < means.size(); ++a) {
        merits[a] = f(means[a]);
        if (!(merits[a] > 0.0))
            throw std::domain_error("optimal_policy: merit must be positive at every mean");
        total += merits[a];
    }
    std::vector<double> policy(means.size());
    for (std::size_t a = 0; a < means.size(); ++a) {
        policy[a] = static_cast<double>(subset_size) * merits[a] / total;
        if (policy[a] > 1.0 + 1e-9)
            throw std::domain_error(
                "optimal_policy: selection probability exceeds 1 (merit ratio assumption violated)");
        policy[a] = std::min(policy[a], 1.0);
    }
    return policy;
}

}  // namespace faircsb
