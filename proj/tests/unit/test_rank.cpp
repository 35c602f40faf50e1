#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "ftmm/errors.hpp"
#include "ftmm/rank.hpp"

using ftmm::rank_k;
using ftmm::rank_k_index;

TEST_SUITE("rank") {

TEST_CASE("k-th largest on small lists") {
    const std::vector<double> a{3, 1, 2};
    CHECK(rank_k(a, 1) == 3.0);
    CHECK(rank_k(a, 2) == 2.0);
    CHECK(rank_k(a, 3) == 1.0);

    const std::vector<double> b{4, 9, 1, 7};
    CHECK(rank_k(b, 3) == 4.0);
}

TEST_CASE("ties occupy consecutive ranks") {
    const std::vector<double> v{5, 5, 1};
    CHECK(rank_k(v, 1) == 5.0);
    CHECK(rank_k(v, 2) == 5.0);
    CHECK(rank_k(v, 3) == 1.0);
}

TEST_CASE("index variant prefers the smaller index on ties") {
    const std::vector<double> v{5, 1, 5, 5};
    CHECK(rank_k_index(v, 1) == 0);
    CHECK(rank_k_index(v, 2) == 2);
    CHECK(rank_k_index(v, 3) == 3);
    CHECK(rank_k_index(v, 4) == 1);
}

TEST_CASE("out-of-range k and non-finite input are rejected") {
    const std::vector<double> v{1, 2};
    CHECK_THROWS_AS(rank_k(v, 0), ftmm::ContractViolation);
    CHECK_THROWS_AS(rank_k(v, 3), ftmm::ContractViolation);
    CHECK_THROWS_AS(rank_k(std::vector<double>{}, 1), ftmm::ContractViolation);
    const std::vector<double> bad{1, std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS(rank_k(bad, 1));
    const std::vector<double> inf{1, std::numeric_limits<double>::infinity()};
    CHECK_THROWS(rank_k_index(inf, 1));
}

TEST_CASE("agrees with a descending sort, is monotone in k and permutation invariant") {
    std::mt19937_64 gen(12345);
    std::uniform_int_distribution<int> len(1, 20);
    std::uniform_int_distribution<int> small(-3, 3);  // many ties
    std::normal_distribution<double> real(0.0, 10.0);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> v(static_cast<std::size_t>(len(gen)));
        const bool tied = trial % 2 == 0;
        for (auto& x : v) x = tied ? small(gen) : real(gen);
        auto sorted = v;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        auto shuffled = v;
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        for (std::size_t k = 1; k <= v.size(); ++k) {
            REQUIRE(rank_k(v, k) == sorted[k - 1]);
            REQUIRE(rank_k(shuffled, k) == sorted[k - 1]);
            REQUIRE(v[rank_k_index(v, k)] == sorted[k - 1]);
            if (k > 1) REQUIRE(rank_k(v, k) <= rank_k(v, k - 1));
        }
    }
}

TEST_CASE("in-place selection matches") {
    std::vector<double> v{0.5, 2.5, -1.0, 2.5, 7.0};
    std::vector<double> scratch = v;
    CHECK(ftmm::detail::rank_k_inplace(scratch, 2) == 2.5);
    scratch = v;
    CHECK(ftmm::detail::rank_k_inplace(scratch, 4) == 0.5);
}

}
