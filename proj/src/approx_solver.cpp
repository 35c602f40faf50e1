#include "ftmm/approx_solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "ftmm/errors.hpp"

namespace ftmm {

Cell make_cell(Point lower, Point upper, std::size_t id) {
    if (lower.size() != upper.size() || lower.empty()) {
        throw ContractViolation("cell bounds have mismatched or zero dimension");
    }
    Cell c;
    c.id = id;
    c.center.resize(lower.size());
    for (std::size_t t = 0; t < lower.size(); ++t) {
        if (!(lower[t] < upper[t])) throw ContractViolation("cell must have positive volume");
        c.center[t] = 0.5 * (lower[t] + upper[t]);
    }
    c.diameter = euclidean_distance(lower, upper);
    c.lower = std::move(lower);
    c.upper = std::move(upper);
    return c;
}

void ApproxConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ContractViolation("epsilon must lie in (0, 1)");
    if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
        throw ContractViolation("Lipschitz constant must be finite and > 0");
    }
    if (max_cells < 1) throw ContractViolation("max_cells must be >= 1");
    if (tau_abs && !(*tau_abs >= 0.0 && std::isfinite(*tau_abs))) {
        throw ContractViolation("tau_abs must be finite and >= 0");
    }
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::criterion: return "criterion";
        case Termination::budget: return "budget";
        case Termination::floor: return "floor";
    }
    return "unknown";
}

CriterionResult criterion_satisfied(std::span<const Cell> cells, const ApproxConfig& config) {
    CriterionResult out;
    if (cells.empty()) throw ContractViolation("criterion_satisfied: no cells");
    const double tau = config.tau_abs.value_or(0.0);
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : cells) m = std::min(m, c.h_value);
    out.min_value = m;
    out.max_violation = -std::numeric_limits<double>::infinity();
    const double target = (1.0 - config.epsilon) * m;
    for (std::size_t j = 0; j < cells.size(); ++j) {
        const double slack = config.lipschitz * cells[j].diameter;
        const double lhs = cells[j].h_value - slack;
        out.max_violation = std::max(out.max_violation, target - lhs);
        if (lhs >= target) continue;
        if (slack <= tau) {
            out.floor_assisted.push_back(j);
        } else {
            out.violators.push_back(j);
        }
    }
    out.satisfied = out.violators.empty();
    return out;
}

std::pair<Cell, Cell> split_cell(const Cell& cell) {
    std::size_t axis = 0;
    double longest = -1.0;
    for (std::size_t t = 0; t < cell.lower.size(); ++t) {
        const double w = cell.upper[t] - cell.lower[t];
        if (w > longest) {
            longest = w;
            axis = t;
        }
    }
    const double mid = 0.5 * (cell.lower[axis] + cell.upper[axis]);
    if (!(cell.lower[axis] < mid && mid < cell.upper[axis])) {
        throw ContractViolation("cell too small to split in floating point");
    }
    Point low_upper = cell.upper;
    low_upper[axis] = mid;
    Point high_lower = cell.lower;
    high_lower[axis] = mid;
    return {make_cell(cell.lower, std::move(low_upper), cell.id),
            make_cell(std::move(high_lower), cell.upper, cell.id)};
}

namespace {

void evaluate_cells(const Ensemble& ensemble, std::vector<Cell>& cells,
                    std::span<const std::size_t> pending, unsigned threads) {
    const auto all = ensemble.all_indices();
    const std::size_t r = ensemble.f() + 1;
    auto work = [&](std::size_t begin, std::size_t end) {
        std::vector<double> scratch(all.size());
        for (std::size_t p = begin; p < end; ++p) {
            Cell& c = cells[pending[p]];
            c.h_value = detail::rank_over_unchecked(ensemble, all, r, c.center, scratch);
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1 || pending.size() < 64) {
        work(0, pending.size());
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t begin = pending.size() * w / threads;
            const std::size_t end = pending.size() * (w + 1) / threads;
            workers.emplace_back([&, w, begin, end] {
                try {
                    work(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

ApproxResult refine(const Ensemble& ensemble, const ApproxConfig& config,
                    const RoundObserver& observer) {
    config.validate();
    if (!ensemble.nonnegative()) {
        throw ContractViolation("approximate solver requires an ensemble flagged non-negative");
    }
    const Hypercube& X = ensemble.domain();

    std::vector<Cell> cells{make_cell(X.lower(), X.upper(), 0)};
    const std::vector<std::size_t> first{0};
    evaluate_cells(ensemble, cells, first, config.threads);

    ApproxConfig eff = config;
    if (!eff.tau_abs) {
        eff.tau_abs = 1e-6 * std::max(cells.front().h_value, eff.lipschitz * X.diameter());
    }

    ApproxResult out;
    out.tau_abs = *eff.tau_abs;
    std::size_t round = 0;
    while (true) {
        const CriterionResult crit = criterion_satisfied(cells, eff);
        out.trace.push_back({round, cells.size(), crit.min_value, crit.max_violation,
                             crit.violators.size()});
        if (observer) observer(round, cells);

        if (crit.satisfied) {
            out.terminated_by = crit.floor_assisted.empty() ? Termination::criterion : Termination::floor;
            break;
        }
        if (cells.size() + crit.violators.size() > eff.max_cells) {
            out.terminated_by = Termination::budget;
            break;
        }

        std::vector<char> split(cells.size(), 0);
        for (std::size_t j : crit.violators) split[j] = 1;
        std::vector<Cell> next;
        next.reserve(cells.size() + crit.violators.size());
        std::vector<std::size_t> pending;
        pending.reserve(2 * crit.violators.size());
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (!split[j]) {
                next.push_back(std::move(cells[j]));
                continue;
            }
            auto [a, b] = split_cell(cells[j]);
            pending.push_back(next.size());
            next.push_back(std::move(a));
            pending.push_back(next.size());
            next.push_back(std::move(b));
        }
        for (std::size_t j = 0; j < next.size(); ++j) next[j].id = j;
        cells = std::move(next);
        evaluate_cells(ensemble, cells, pending, eff.threads);
        ++round;
    }

    std::size_t k = 0;
    for (std::size_t j = 1; j < cells.size(); ++j) {
        const Cell& c = cells[j];
        const Cell& best = cells[k];
        if (c.h_value < best.h_value ||
            (c.h_value == best.h_value && std::lexicographical_compare(c.center.begin(), c.center.end(),
                                                                       best.center.begin(), best.center.end()))) {
            k = j;
        }
    }
    out.k = k;
    out.x_bar = cells[k].center;
    out.value = cells[k].h_value;
    out.cell_count = cells.size();
    out.rounds = round;
    out.partition = std::move(cells);
    return out;
}

double partition_volume(std::span<const Cell> cells) {
    double v = 0.0;
    for (const auto& c : cells) {
        double cv = 1.0;
        for (std::size_t t = 0; t < c.lower.size(); ++t) cv *= c.upper[t] - c.lower[t];
        v += cv;
    }
    return v;
}

bool interiors_overlap(const Cell& a, const Cell& b) {
    for (std::size_t t = 0; t < a.lower.size(); ++t) {
        if (std::min(a.upper[t], b.upper[t]) <= std::max(a.lower[t], b.lower[t])) return false;
    }
    return true;
}

}  // namespace ftmm
