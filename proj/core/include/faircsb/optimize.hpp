#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "faircsb/merit.hpp"

namespace faircsb {

// Per-arm interval [lower_a, upper_a] of plausible means, everything in [0,1].
struct ConfidenceRegion {
    std::vector<double> lower;
    std::vector<double> upper;

    int num_arms() const { return static_cast<int>(lower.size()); }
    void validate() const;
};

// Expected reward of the fair policy built from mu:
//   g(mu) = L * sum_a f(mu_a) mu_a / sum_a f(mu_a),  in [0, L].
// A non-positive merit total (possible only for unvalidated merit functions
// like identity at the origin) evaluates to 0.
double fair_reward_objective(const MeritFunction& f, std::span<const double> mu, int subset_size);

struct SolverOptions {
    int random_starts = 3;       // on top of the {lower, upper, midpoint} starts
    int bracket_points = 33;     // coarse scan per coordinate before refinement
    double line_tol = 1e-8;      // golden-section interval width
    double sweep_tol = 1e-9;     // stop when a full sweep improves less
    int max_sweeps = 100;
    std::uint64_t seed = 0;      // start-point stream; fixed seed => deterministic
};

// Approximate argmax of fair_reward_objective over the region via multi-start
// cyclic coordinate ascent; each 1-D subproblem is bracketed on a coarse scan
// and refined by golden-section search. Deterministic given opts.seed. The
// result always lies inside the region; ties across starts resolve to the
// lexicographically smallest vector.
std::vector<double> maximize_over_region(const MeritFunction& f, const ConfidenceRegion& region,
                                         int subset_size, const SolverOptions& opts = {});

// Exhaustive product-grid search with spacing `step` (>= 1e-3), restricted to
// K <= 4 arms. Ties resolve to the lexicographically smallest grid point.
// Test oracle for maximize_over_region.
std::vector<double> grid_oracle(const MeritFunction& f, const ConfidenceRegion& region,
                                int subset_size, double step);

}  // namespace faircsb
