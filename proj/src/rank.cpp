#include "ftmm/rank.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "ftmm/errors.hpp"

namespace ftmm {

namespace {

void check_rank_args(std::span<const double> values, std::size_t k) {
    if (k < 1 || k > values.size()) {
        throw ContractViolation("rank " + std::to_string(k) + " out of range for " +
                                std::to_string(values.size()) + " values");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw ContractViolation("rank input " + std::to_string(i) + " is not finite");
        }
    }
}

}  // namespace

double rank_k(std::span<const double> values, std::size_t k) {
    check_rank_args(values, k);
    std::vector<double> scratch(values.begin(), values.end());
    return detail::rank_k_inplace(scratch, k);
}

std::size_t rank_k_index(std::span<const double> values, std::size_t k) {
    check_rank_args(values, k);
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return order[k - 1];
}

namespace detail {

double rank_k_inplace(std::span<double> scratch, std::size_t k) {
    auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(scratch.begin(), nth, scratch.end(), std::greater<>{});
    return *nth;
}

}  // namespace detail

}  // namespace ftmm
