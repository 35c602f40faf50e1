#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ftmm/ensemble.hpp"

namespace ftmm {

// One box S_j of a partition, with its center C_j, diameter d_j and the
// cached value h_f(C_j).
struct Cell {
    std::size_t id = 0;
    Point lower;
    Point upper;
    Point center;
    double diameter = 0.0;
    double h_value = 0.0;

    bool operator==(const Cell&) const = default;
};

// Builds a cell with derived center and diameter; h_value is left at 0.
Cell make_cell(Point lower, Point upper, std::size_t id = 0);

struct ApproxConfig {
    double epsilon = 0.1;
    // Lipschitz constant applied to h_f values at cell centers. It has to be
    // valid for the honest functions; h_f itself need not be L-Lipschitz
    // because the guarantee only uses h_f <= g_0 and the Lipschitzness of g_0.
    double lipschitz = 1.0;
    std::size_t max_cells = 1'000'000;
    // A cell also passes when lipschitz * d_j <= tau_abs. Unset means
    // 1e-6 * max(h_f(center of X), lipschitz * diam(X)) inside refine, and 0
    // (the bare criterion) in criterion_satisfied.
    std::optional<double> tau_abs;
    unsigned threads = 1;

    void validate() const;
};

enum class Termination { criterion, budget, floor };
std::string_view to_string(Termination t);

struct CriterionResult {
    bool satisfied = false;
    // Cell ids (positions) failing both the criterion and the floor, ascending.
    std::vector<std::size_t> violators;
    // Cells failing the bare criterion but passing through the floor.
    std::vector<std::size_t> floor_assisted;
    double min_value = 0.0;
    // max_j [(1 - eps) * min - (h_j - L d_j)]; positive means some cell fails
    // the bare criterion.
    double max_violation = 0.0;
};

// Tests h_j - L d_j >= (1 - eps) * min_i h_i for every cell.
CriterionResult criterion_satisfied(std::span<const Cell> cells, const ApproxConfig& config);

// Bisects the longest edge (lowest axis on ties). Children keep the parent id.
std::pair<Cell, Cell> split_cell(const Cell& cell);

struct RoundTrace {
    std::size_t round = 0;
    std::size_t cell_count = 0;
    double min_center_value = 0.0;
    double max_violation = 0.0;
    std::size_t violators = 0;

    bool operator==(const RoundTrace&) const = default;
};

struct ApproxResult {
    Point x_bar;
    double value = 0.0;
    std::size_t k = 0;
    std::size_t cell_count = 0;
    Termination terminated_by = Termination::criterion;
    // Splitting passes performed. The trace has rounds + 1 entries because
    // round 0 is the single starting cell.
    std::size_t rounds = 0;
    double tau_abs = 0.0;
    std::vector<Cell> partition;
    std::vector<RoundTrace> trace;

    bool operator==(const ApproxResult&) const = default;
};

// Called once per round, after the cells of that round have been evaluated.
using RoundObserver = std::function<void(std::size_t round, std::span<const Cell> cells)>;

// Breadth-first refinement: evaluate every cell center, split every violator,
// repeat until the criterion holds for all cells or the cell budget would be
// exceeded. Outputs the center with the smallest h_f (lexicographically
// smallest center on ties).
//
// Requires ensemble.nonnegative(); throws ContractViolation otherwise.
ApproxResult refine(const Ensemble& ensemble, const ApproxConfig& config,
                    const RoundObserver& observer = {});

// Sum of cell volumes and an O(n^2) check that no two cells share interior.
double partition_volume(std::span<const Cell> cells);
bool interiors_overlap(const Cell& a, const Cell& b);

}  // namespace ftmm
