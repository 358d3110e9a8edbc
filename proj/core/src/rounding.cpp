#include "faircsb/rounding.hpp"

#include <cmath>
#include <stdexcept>

namespace faircsb {

namespace {

bool is_fractional(double x) { return x > 0.0 && x < 1.0; }

// Snap floating-point drift so it cannot stall the cursor scan.
void snap(std::span<double> p, double tol) {
    for (double& x : p) {
        if (std::abs(x) <= tol) x = 0.0;
        else if (std::abs(x - 1.0) <= tol) x = 1.0;
    }
}

}  // namespace

bool is_selection_vector(std::span<const double> p, int subset_size, double tol) {
    double sum = 0.0;
    for (double x : p) {
        if (x < -tol || x > 1.0 + tol) return false;
        sum += x;
    }
    return std::abs(sum - static_cast<double>(subset_size)) <= tol;
}

void pairwise_round_step(std::span<double> p, std::size_t i, std::size_t j, Rng& rng) {
    if (i >= p.size() || j >= p.size() || i == j)
        throw std::invalid_argument("pairwise_round_step: bad indices");
    const double pi = p[i], pj = p[j];
    if (!is_fractional(pi) || !is_fractional(pj))
        throw std::invalid_argument("pairwise_round_step: coordinates must be strictly fractional");

    const double alpha = std::min(1.0 - pi, pj);
    const double beta = std::min(pi, 1.0 - pj);
    if (rng.uniform01() < beta / (alpha + beta)) {
        p[i] = pi + alpha;
        p[j] = pj - alpha;
    } else {
        p[i] = pi - beta;
        p[j] = pj + beta;
    }
}

std::vector<int> rrs(std::span<const double> p, int subset_size, Rng& rng) {
    if (!is_selection_vector(p, subset_size))
        throw std::invalid_argument("rrs: input is not a valid selection vector for L");

    std::vector<double> work(p.begin(), p.end());
    snap(work, kSelectionSumTol);

    // Two cursors over fractional coordinates; each step integralizes at
    // least one of them, so the scan ends after at most K-1 steps.
    std::size_t i = 0;
    while (i < work.size() && !is_fractional(work[i])) ++i;
    std::size_t j = i == work.size() ? i : i + 1;
    while (j < work.size() && !is_fractional(work[j])) ++j;
    while (j < work.size()) {
        pairwise_round_step(work, i, j, rng);
        snap(std::span<double>(&work[i], 1), kSelectionSumTol);
        snap(std::span<double>(&work[j], 1), kSelectionSumTol);
        if (is_fractional(work[i])) {
            // j became integral; keep i, advance j.
        } else if (is_fractional(work[j])) {
            i = j;
        } else {
            i = j + 1;
            while (i < work.size() && !is_fractional(work[i])) ++i;
            j = i;
        }
        if (j <= i) j = i + 1;
        while (j < work.size() && !is_fractional(work[j])) ++j;
    }

    std::vector<int> arms;
    arms.reserve(static_cast<std::size_t>(subset_size));
    for (std::size_t a = 0; a < work.size(); ++a)
        if (work[a] == 1.0) arms.push_back(static_cast<int>(a));
    if (static_cast<int>(arms.size()) != subset_size)
        throw std::logic_error("rrs: rounded set has wrong cardinality");
    return arms;
}

}  // namespace faircsb
