#pragma once

#include <cstddef>
#include <span>

namespace ftmm {

// Rank statistics use the "k-th largest" convention: rank 1 is the maximum.
// Equal values occupy consecutive ranks, so rank_k and rank_{k+1} may agree.
// k is 1-based. Throws ContractViolation when k is outside [1, size] or an
// input is not finite.
double rank_k(std::span<const double> values, std::size_t k);

// 0-based position of the entry holding rank k. At equal value the smaller
// position takes the smaller rank.
std::size_t rank_k_index(std::span<const double> values, std::size_t k);

namespace detail {

// Unchecked rank_k that reorders `scratch`. Used on hot grid loops where the
// values were already validated.
double rank_k_inplace(std::span<double> scratch, std::size_t k);

}  // namespace detail

}  // namespace ftmm
