#pragma once

// Test-only oracles, kept independent of the library code paths they check.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "faircsb/delay.hpp"

namespace faircsb::test {

// Dense Gaussian elimination with partial pivoting; oracle for the
// closed-form fair policy via the K equations
//   p_a f(mu_1) - p_1 f(mu_a) = 0  (a = 2..K),   sum_a p_a = L.
inline std::vector<double> solve_linear_system(std::vector<std::vector<double>> a,
                                               std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (std::abs(a[pivot][col]) < 1e-14) throw std::runtime_error("singular system");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            b[row] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
        x[i] = acc / a[i][i];
    }
    return x;
}

// Fair policy through the linear system (no closed form involved).
template <typename Merit>
std::vector<double> fair_policy_linear_oracle(const Merit& f, std::span<const double> means,
                                              int subset_size) {
    const std::size_t n = means.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> b(n, 0.0);
    const double f1 = f(means[0]);
    for (std::size_t row = 0; row + 1 < n; ++row) {
        a[row][row + 1] = f1;
        a[row][0] = -f(means[row + 1]);
    }
    for (std::size_t col = 0; col < n; ++col) a[n - 1][col] = 1.0;
    b[n - 1] = static_cast<double>(subset_size);
    return solve_linear_system(std::move(a), std::move(b));
}

// Brute-force quantile: linear scan of the CDF from zero. Bounded so a
// buggy closed form cannot hang the tests.
inline std::optional<std::int64_t> quantile_scan_oracle(const DelayModel& model, double q,
                                                        std::int64_t bound = 2'000'000) {
    for (std::int64_t z = 0; z <= bound; ++z)
        if (delay_cdf(model, z) >= q) return z;
    return std::nullopt;  // treated as INFINITE by callers
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

inline MeanStd mean_std(std::span<const double> values) {
    MeanStd stats;
    const double n = static_cast<double>(values.size());
    for (double v : values) stats.mean += v;
    stats.mean /= n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - stats.mean) * (v - stats.mean);
        stats.std = std::sqrt(ss / (n - 1.0));
    }
    return stats;
}

}  // namespace faircsb::test
