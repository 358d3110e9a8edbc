#pragma once

#include <span>
#include <vector>

#include "faircsb/rng.hpp"

namespace faircsb {

// Tolerance used when checking that a selection vector sums to L, and for
// snapping near-integral coordinates before rounding.
inline constexpr double kSelectionSumTol = 1e-9;

// True iff every coordinate is in [0,1] (within tol) and the sum equals
// subset_size within tol.
bool is_selection_vector(std::span<const double> p, int subset_size,
                         double tol = kSelectionSumTol);

// One dependent-rounding step on coordinates i and j of p, both strictly
// fractional. With alpha = min(1-p_i, p_j) and beta = min(p_i, 1-p_j), moves
// (p_i, p_j) to (p_i+alpha, p_j-alpha) with probability beta/(alpha+beta) and
// to (p_i-beta, p_j+beta) otherwise. Preserves p_i+p_j and the marginals;
// at least one of the two coordinates becomes integral.
void pairwise_round_step(std::span<double> p, std::size_t i, std::size_t j, Rng& rng);

// Samples a set of exactly subset_size arms with P[a in set] = p_a.
// Fractional coordinates are resolved by a left-to-right cursor scan of
// pairwise steps, so the randomness is confined to the branch coins.
// Returns sorted 0-based arm indices.
std::vector<int> rrs(std::span<const double> p, int subset_size, Rng& rng);

}  // namespace faircsb
