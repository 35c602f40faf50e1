#include "ftmm/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "ftmm/errors.hpp"
#include "ftmm/rank.hpp"

namespace ftmm {

Ensemble::Ensemble(std::vector<CostFunction> specs, std::size_t f, Hypercube domain,
                   bool nonnegative)
    : specs_(std::move(specs)), f_(f), domain_(std::move(domain)), nonnegative_(nonnegative) {
    if (specs_.empty()) throw ContractViolation("ensemble needs at least one function");
    if (specs_.size() < 2 * f_ + 1) {
        throw ContractViolation("ensemble requires n >= 2f + 1 (n = " + std::to_string(specs_.size()) +
                                ", f = " + std::to_string(f_) + ")");
    }
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        if (specs_[i].dimension() != domain_.dimension()) {
            throw ContractViolation("function " + std::to_string(i + 1) + " has dimension " +
                                    std::to_string(specs_[i].dimension()) + ", domain has " +
                                    std::to_string(domain_.dimension()));
        }
    }
}

std::optional<double> Ensemble::lipschitz_bound(std::span<const std::size_t> subset) const {
    double l = 0.0;
    for (std::size_t i : subset) {
        const auto li = ftmm::lipschitz_bound(spec(i), domain_);
        if (!li) return std::nullopt;
        l = std::max(l, *li);
    }
    return l;
}

std::optional<double> Ensemble::lipschitz_bound() const {
    return lipschitz_bound(all_indices());
}

std::vector<std::size_t> Ensemble::all_indices() const {
    std::vector<std::size_t> idx(n());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

GroundTruth::GroundTruth(std::size_t n, std::size_t f, std::vector<std::size_t> faulty)
    : n_(n), faulty_(std::move(faulty)) {
    std::sort(faulty_.begin(), faulty_.end());
    if (std::adjacent_find(faulty_.begin(), faulty_.end()) != faulty_.end()) {
        throw ContractViolation("ground truth: duplicate faulty index");
    }
    if (!faulty_.empty() && faulty_.back() >= n_) {
        throw ContractViolation("ground truth: faulty index out of range");
    }
    if (faulty_.size() > f) {
        throw ContractViolation("ground truth: " + std::to_string(faulty_.size()) +
                                " faulty functions exceed budget f = " + std::to_string(f));
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (!std::binary_search(faulty_.begin(), faulty_.end(), i)) honest_.push_back(i);
    }
    if (honest_.size() < f + 1) {
        throw ContractViolation("ground truth: honest set smaller than f + 1");
    }
}

GroundTruth GroundTruth::none(std::size_t n) {
    return GroundTruth(n, 0, {});
}

bool GroundTruth::is_faulty(std::size_t i) const {
    return std::binary_search(faulty_.begin(), faulty_.end(), i);
}

namespace {

[[noreturn]] void throw_non_finite(std::size_t i, std::span<const double> x, double v) {
    std::ostringstream os;
    os.precision(17);
    os << "function " << (i + 1) << " returned non-finite value " << v << " at (";
    for (std::size_t t = 0; t < x.size(); ++t) os << (t ? ", " : "") << x[t];
    os << ")";
    throw EvaluationError(i, os.str());
}

void require_in_domain(const Ensemble& e, std::span<const double> x) {
    if (!e.domain().contains(x)) throw ContractViolation("evaluation point outside the domain");
}

}  // namespace

ValueProfile profile(const Ensemble& ensemble, std::span<const double> x) {
    require_in_domain(ensemble, x);
    ValueProfile p{Point(x.begin(), x.end()), std::vector<double>(ensemble.n())};
    for (std::size_t i = 0; i < ensemble.n(); ++i) {
        const double v = ensemble.spec(i)(x);
        if (!std::isfinite(v)) throw_non_finite(i, x, v);
        p.values[i] = v;
    }
    return p;
}

double eval_hf(const Ensemble& ensemble, std::span<const double> x) {
    auto p = profile(ensemble, x);
    return detail::rank_k_inplace(p.values, ensemble.f() + 1);
}

double eval_rank_over(const Ensemble& ensemble, std::span<const std::size_t> subset,
                      std::size_t r, std::span<const double> x) {
    detail::check_subset(ensemble, subset, r);
    require_in_domain(ensemble, x);
    std::vector<double> scratch(subset.size());
    return detail::rank_over_unchecked(ensemble, subset, r, x, scratch);
}

double eval_g0(const Ensemble& ensemble, const GroundTruth& truth, std::span<const double> x) {
    return eval_rank_over(ensemble, truth.honest(), 1, x);
}

double eval_gf(const Ensemble& ensemble, const GroundTruth& truth, std::span<const double> x) {
    if (truth.honest().size() < ensemble.f() + 1) {
        throw ContractViolation("g_f needs at least f + 1 honest functions");
    }
    return eval_rank_over(ensemble, truth.honest(), ensemble.f() + 1, x);
}

namespace detail {

void check_subset(const Ensemble& ensemble, std::span<const std::size_t> subset, std::size_t r) {
    if (subset.empty()) throw ContractViolation("index subset is empty");
    std::vector<std::size_t> sorted(subset.begin(), subset.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.back() >= ensemble.n()) throw ContractViolation("index subset out of range");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ContractViolation("index subset has duplicates");
    }
    if (r < 1 || r > subset.size()) {
        throw ContractViolation("rank " + std::to_string(r) + " out of range for subset of size " +
                                std::to_string(subset.size()));
    }
}

double rank_over_unchecked(const Ensemble& ensemble, std::span<const std::size_t> subset,
                           std::size_t r, std::span<const double> x, std::span<double> scratch) {
    for (std::size_t j = 0; j < subset.size(); ++j) {
        const std::size_t i = subset[j];
        const double v = ensemble.spec(i)(x);
        if (!std::isfinite(v)) throw_non_finite(i, x, v);
        scratch[j] = v;
    }
    return rank_k_inplace(scratch.first(subset.size()), r);
}

}  // namespace detail

}  // namespace ftmm
