#include "ftmm/exact_solver.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "ftmm/errors.hpp"

namespace ftmm {

namespace {

struct Best {
    double value = std::numeric_limits<double>::infinity();
    std::uint64_t flat = std::numeric_limits<std::uint64_t>::max();
};

// Sequential left-to-right scan over [begin, end); strict < keeps the first
// minimizer, which is the lexicographically smallest one.
Best scan(const Ensemble& ensemble, const Grid& grid, std::span<const std::size_t> subset,
          std::size_t r, std::uint64_t begin, std::uint64_t end) {
    Best best;
    Point x(grid.dimension());
    std::vector<double> scratch(subset.size());
    for (std::uint64_t k = begin; k < end; ++k) {
        grid.node_into(k, x);
        const double v = detail::rank_over_unchecked(ensemble, subset, r, x, scratch);
        if (v < best.value) {
            best.value = v;
            best.flat = k;
        }
    }
    return best;
}

Best parallel_scan(const Ensemble& ensemble, const Grid& grid, std::span<const std::size_t> subset,
                   std::size_t r, unsigned threads) {
    const std::uint64_t total = grid.node_count();
    threads = std::max(1u, threads);
    if (threads == 1 || total < 2 * static_cast<std::uint64_t>(threads)) {
        return scan(ensemble, grid, subset, r, 0, total);
    }
    std::vector<Best> partial(threads);
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            const std::uint64_t begin = total * w / threads;
            const std::uint64_t end = total * (w + 1) / threads;
            workers.emplace_back([&, w, begin, end] {
                try {
                    partial[w] = scan(ensemble, grid, subset, r, begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    // Chunks are in ascending flat order, so the first error and the first
    // strict minimum match what a sequential scan would report.
    Best best;
    for (unsigned w = 0; w < threads; ++w) {
        if (errors[w]) std::rethrow_exception(errors[w]);
        if (partial[w].value < best.value) best = partial[w];
    }
    return best;
}

}  // namespace

SolveResult minimize_rank_r(const Ensemble& ensemble, std::span<const std::size_t> subset,
                            std::size_t r, std::span<const std::size_t> resolution,
                            const SolveOptions& options) {
    detail::check_subset(ensemble, subset, r);
    Grid grid(ensemble.domain(), std::vector<std::size_t>(resolution.begin(), resolution.end()));
    if (grid.node_count() > options.budget) {
        throw BudgetExceeded(grid.node_count(), options.budget,
                             "grid needs " + std::to_string(grid.node_count()) +
                                 " evaluations, budget is " + std::to_string(options.budget));
    }

    const Best best = parallel_scan(ensemble, grid, subset, r, options.threads);

    SolveResult out;
    out.x_hat = grid.node(best.flat);
    out.v_hat = best.value;
    out.evaluations = grid.node_count();
    out.grid_index = grid.multi_index(best.flat);
    out.boundary_touch = ensemble.domain().on_boundary(out.x_hat);
    out.certificate.grid_step = grid.steps();
    out.certificate.half_cell_diameter = grid.half_cell_diameter();
    if (const auto lip = ensemble.lipschitz_bound(subset)) {
        out.certificate.error_bound = *lip * out.certificate.half_cell_diameter;
    }
    return out;
}

SolveResult minimize_hf(const Ensemble& ensemble, std::span<const std::size_t> resolution,
                        const SolveOptions& options) {
    const auto all = ensemble.all_indices();
    return minimize_rank_r(ensemble, all, ensemble.f() + 1, resolution, options);
}

}  // namespace ftmm
