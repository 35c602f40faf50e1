#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ftmm/ensemble.hpp"
#include "ftmm/grid.hpp"

namespace ftmm {

struct SolveOptions {
    // Maximum number of grid nodes a single solve may visit.
    std::uint64_t budget = 10'000'000;
    // Worker threads for grid evaluation. The result does not depend on it.
    unsigned threads = 1;
};

struct Certificate {
    std::vector<double> grid_step;
    double half_cell_diameter = 0.0;
    // L_max * half_cell_diameter when every function in play has a declared
    // Lipschitz constant; nullopt otherwise ("uncertified").
    std::optional<double> error_bound;

    bool operator==(const Certificate&) const = default;
};

struct SolveResult {
    Point x_hat;
    double v_hat = 0.0;
    Certificate certificate;
    std::uint64_t evaluations = 0;
    std::vector<std::size_t> grid_index;
    // x_hat lies on the domain boundary; the true minimizer over a larger
    // region may lie outside the box.
    bool boundary_touch = false;

    bool operator==(const SolveResult&) const = default;
};

// Global minimization of h_f = rank_{f+1} over all n functions, by exhaustive
// search over a regular grid. Ties go to the lexicographically smallest grid
// multi-index. With a certificate, the true minimum over the domain lies in
// [v_hat - error_bound, v_hat].
//
// Throws BudgetExceeded when the grid has more nodes than options.budget.
SolveResult minimize_hf(const Ensemble& ensemble, std::span<const std::size_t> resolution,
                        const SolveOptions& options = {});

// Same search for rank_r restricted to `subset` (0-based positions). With
// subset = all positions and r = f + 1 it coincides with minimize_hf exactly.
// The certificate uses the largest Lipschitz constant within the subset.
SolveResult minimize_rank_r(const Ensemble& ensemble, std::span<const std::size_t> subset,
                            std::size_t r, std::span<const std::size_t> resolution,
                            const SolveOptions& options = {});

}  // namespace ftmm
