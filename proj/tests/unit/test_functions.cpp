#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "ftmm/errors.hpp"
#include "ftmm/functions.hpp"
#include "ftmm/random.hpp"

using ftmm::CostFunction;
using ftmm::Point;

namespace {

double eval1(const CostFunction& q, double x) {
    const Point p{x};
    return q(p);
}

// Largest |Q(a) - Q(b)| / |a - b| over random pairs in the box.
double sampled_ratio(const CostFunction& q, const ftmm::Hypercube& box, int pairs, std::uint64_t seed) {
    ftmm::SeededRng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const Point a = rng.point_in(box);
        const Point b = rng.point_in(box);
        const double dist = ftmm::euclidean_distance(a, b);
        if (dist < 1e-12) continue;
        worst = std::max(worst, std::abs(q(a) - q(b)) / dist);
    }
    return worst;
}

}  // namespace

TEST_SUITE("functions") {

TEST_CASE("families evaluate as defined") {
    CHECK(eval1(CostFunction::cone({0.0}, 1.0), 0.5) == doctest::Approx(0.5));
    CHECK(eval1(CostFunction::cone({0.0}, 3.0, 1.0), -2.0) == doctest::Approx(7.0));
    CHECK(eval1(CostFunction::quadratic({1.0}, 2.0, 0.5), 3.0) == doctest::Approx(8.5));

    const auto pwl = CostFunction::piecewise_linear({{-1.0, 2.0}, {0.0, 0.0}, {2.0, 1.0}});
    CHECK(eval1(pwl, -0.5) == doctest::Approx(1.0));
    CHECK(eval1(pwl, 1.0) == doctest::Approx(0.5));
    CHECK(eval1(pwl, 2.0) == doctest::Approx(1.0));

    const auto cone2 = CostFunction::cone({0.0, 0.0}, 1.0);
    CHECK(cone2(Point{3.0, 4.0}) == doctest::Approx(5.0));
}

TEST_CASE("envelopes") {
    const auto plus = CostFunction::envelope_plus(fixtures::two_cones(), 0.1);
    CHECK(eval1(plus, 0.5) == doctest::Approx(0.6));
    const auto minus = CostFunction::envelope_minus(fixtures::two_cones(), 0.25);
    CHECK(eval1(minus, 0.0) == doctest::Approx(-0.25));
    const auto floored = CostFunction::envelope_minus(fixtures::two_cones(), 0.25, true);
    CHECK(eval1(floored, 0.0) == 0.0);
}

TEST_CASE("construction rejects bad parameters") {
    CHECK_THROWS_AS(CostFunction::cone({0.0}, 0.0), ftmm::ContractViolation);
    CHECK_THROWS_AS(CostFunction::cone({0.0}, 1.0, -1.0), ftmm::ContractViolation);
    CHECK_THROWS_AS(CostFunction::quadratic({0.0}, -1.0), ftmm::ContractViolation);
    CHECK_THROWS_AS(CostFunction::piecewise_linear({{0.0, 1.0}, {0.0, 2.0}}), ftmm::ContractViolation);
    CHECK_THROWS_AS(CostFunction::envelope_plus({}, 0.1), ftmm::ContractViolation);
    CHECK_THROWS_AS(CostFunction::envelope_plus({fixtures::cone1(0.0), CostFunction::cone({0.0, 0.0}, 1.0)}, 0.1),
                    ftmm::ContractViolation);
}

TEST_CASE("declared Lipschitz bounds") {
    const auto box = fixtures::interval();
    CHECK(*ftmm::lipschitz_bound(CostFunction::cone({0.0}, 3.0), box) == 3.0);
    CHECK(*ftmm::lipschitz_bound(CostFunction::quadratic({0.0}, 1.0), box) == doctest::Approx(4.0));
    const auto pwl = CostFunction::piecewise_linear({{-1.0, 2.0}, {0.0, 0.0}, {2.0, 1.0}});
    CHECK(*ftmm::lipschitz_bound(pwl, box) == doctest::Approx(2.0));
    const auto env = CostFunction::envelope_plus({fixtures::cone1(0.0, 1.0), fixtures::cone1(0.0, 5.0)}, 0.1);
    CHECK(*ftmm::lipschitz_bound(env, box) == 5.0);
    const auto opaque = CostFunction::custom([](std::span<const double> x) { return x[0] * x[0]; }, 1);
    CHECK_FALSE(ftmm::lipschitz_bound(opaque, box).has_value());
    CHECK_FALSE(opaque.serializable());
}

TEST_CASE("sampled Lipschitz check holds for every family") {
    const ftmm::Hypercube box({-2.0, -1.0}, {1.0, 3.0});
    const std::vector<CostFunction> specs{
        CostFunction::cone({0.3, -0.2}, 1.7, 0.4),
        CostFunction::quadratic({-1.0, 2.0}, 0.8, 0.0),
        CostFunction::envelope_plus({CostFunction::cone({0.0, 0.0}, 1.0), CostFunction::quadratic({1.0, 1.0}, 0.5)},
                                    0.3),
        CostFunction::envelope_minus({CostFunction::cone({0.0, 0.0}, 2.0), CostFunction::cone({1.0, 1.0}, 0.5)},
                                     0.3, true),
    };
    std::uint64_t seed = 3;
    for (const auto& q : specs) {
        const double l = *ftmm::lipschitz_bound(q, box);
        CHECK(sampled_ratio(q, box, 10000, seed++) <= l * (1.0 + 1e-12));
    }
}

TEST_CASE("lower bounds on the domain") {
    const auto box = fixtures::interval();
    CHECK(ftmm::min_lower_bound(fixtures::cone1(3.0, 1.0, 0.5), box) == doctest::Approx(1.5));
    CHECK(ftmm::min_lower_bound(CostFunction::quadratic({0.0}, 1.0, 0.25), box) == doctest::Approx(0.25));
    CHECK(ftmm::structurally_nonnegative(fixtures::cone1(0.0)));
    CHECK_FALSE(ftmm::structurally_nonnegative(CostFunction::envelope_minus(fixtures::two_cones(), 0.5)));
}

TEST_CASE("adversary constructions") {
    const auto honest = fixtures::two_cones();
    const auto above = ftmm::make_above_all_adversary(honest, 1.0);
    CHECK(eval1(above, 0.0) == doctest::Approx(2.0));

    const auto lifted = fixtures::two_cones(2.0);
    const auto below = ftmm::make_below_all_adversary(lifted, 1.0, fixtures::interval());
    CHECK(eval1(below, 0.0) == doctest::Approx(1.0));

    const std::vector<CostFunction> tail{fixtures::cone1(0.0, 1.0, 1.0), fixtures::cone1(1.0, 1.0, 1.0)};
    const auto gap = ftmm::make_gap_adversary(tail, 10.0, 0.5);
    CHECK(eval1(gap, 0.5) == doctest::Approx(12.0));

    CHECK_THROWS_AS(ftmm::make_above_all_adversary(honest, 0.0), ftmm::ContractViolation);
    CHECK_THROWS_AS(ftmm::make_below_all_adversary(lifted, 0.0), ftmm::ContractViolation);
    CHECK_THROWS_AS(ftmm::make_gap_adversary(tail, 0.0, 0.5), ftmm::ContractViolation);
    // Floored below-all needs the honest minimum to clear the margin.
    CHECK_THROWS_AS(ftmm::make_below_all_adversary(honest, 0.5, fixtures::interval()), ftmm::ContractViolation);
}

TEST_CASE("dominance holds at 1000 grid points") {
    const auto honest = fixtures::two_cones(2.0);
    const auto above = ftmm::make_above_all_adversary(honest, 0.1);
    const auto below = ftmm::make_below_all_adversary(honest, 0.1, fixtures::interval());
    const auto gap = ftmm::make_gap_adversary(honest, 10.0, 0.1);
    for (int i = 0; i < 1000; ++i) {
        const double x = -2.0 + 4.0 * i / 999.0;
        const double hi = std::max(eval1(honest[0], x), eval1(honest[1], x));
        const double lo = std::min(eval1(honest[0], x), eval1(honest[1], x));
        REQUIRE(eval1(above, x) > hi);
        REQUIRE(eval1(below, x) < lo);
        REQUIRE(eval1(gap, x) - hi > 10.0);
    }
}

TEST_CASE("structural equality") {
    CHECK(fixtures::cone1(0.0) == fixtures::cone1(0.0));
    CHECK_FALSE(fixtures::cone1(0.0) == fixtures::cone1(0.1));
    const auto c = CostFunction::custom([](std::span<const double>) { return 1.0; }, 1);
    const auto copy = c;
    CHECK(c == copy);
    CHECK_FALSE(c == CostFunction::custom([](std::span<const double>) { return 1.0; }, 1));
}

}
