#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ftmm/functions.hpp"
#include "ftmm/hypercube.hpp"

namespace ftmm {

// The n cost functions and the fault budget f, as seen by a solver. Carries
// no fault identities. Positions are 0-based in the API; scenario files and
// reports use 1-based indices.
class Ensemble {
public:
    Ensemble(std::vector<CostFunction> specs, std::size_t f, Hypercube domain,
             bool nonnegative = false);

    std::size_t n() const noexcept { return specs_.size(); }
    std::size_t f() const noexcept { return f_; }
    const Hypercube& domain() const noexcept { return domain_; }
    const std::vector<CostFunction>& specs() const noexcept { return specs_; }
    const CostFunction& spec(std::size_t i) const { return specs_.at(i); }
    // Declared by the scenario author; required by the approximate solver.
    bool nonnegative() const noexcept { return nonnegative_; }

    // Max Lipschitz bound over the listed positions, or over all of them.
    // nullopt if any listed function is uncertified.
    std::optional<double> lipschitz_bound(std::span<const std::size_t> subset) const;
    std::optional<double> lipschitz_bound() const;

    std::vector<std::size_t> all_indices() const;

private:
    std::vector<CostFunction> specs_;
    std::size_t f_;
    Hypercube domain_;
    bool nonnegative_;
};

// Hidden honest/faulty split. Only oracles and the verifier receive this.
class GroundTruth {
public:
    GroundTruth(std::size_t n, std::size_t f, std::vector<std::size_t> faulty);
    static GroundTruth none(std::size_t n);

    std::size_t n() const noexcept { return n_; }
    const std::vector<std::size_t>& faulty() const noexcept { return faulty_; }
    const std::vector<std::size_t>& honest() const noexcept { return honest_; }
    bool is_faulty(std::size_t i) const;

    bool operator==(const GroundTruth&) const = default;

private:
    std::size_t n_;
    std::vector<std::size_t> faulty_;
    std::vector<std::size_t> honest_;
};

struct ValueProfile {
    Point point;
    std::vector<double> values;
};

// Evaluates every Q_i at x. Throws EvaluationError naming the first index that
// produced a non-finite value.
ValueProfile profile(const Ensemble& ensemble, std::span<const double> x);

// rank_{f+1} over all n values.
double eval_hf(const Ensemble& ensemble, std::span<const double> x);
// rank_1 over the honest values.
double eval_g0(const Ensemble& ensemble, const GroundTruth& truth, std::span<const double> x);
// rank_{f+1} over the honest values.
double eval_gf(const Ensemble& ensemble, const GroundTruth& truth, std::span<const double> x);
// rank_r over an arbitrary subset of positions.
double eval_rank_over(const Ensemble& ensemble, std::span<const std::size_t> subset,
                      std::size_t r, std::span<const double> x);

namespace detail {

// Validates subset (non-empty, in range, no duplicates) and 1 <= r <= |subset|.
void check_subset(const Ensemble& ensemble, std::span<const std::size_t> subset, std::size_t r);

// Hot-path evaluation of rank_r over subset at x; `scratch` must hold
// subset.size() doubles. Throws EvaluationError on non-finite values.
double rank_over_unchecked(const Ensemble& ensemble, std::span<const std::size_t> subset,
                           std::size_t r, std::span<const double> x, std::span<double> scratch);

}  // namespace detail

}  // namespace ftmm
