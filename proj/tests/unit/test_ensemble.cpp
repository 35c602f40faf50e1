#include <doctest.h>

#include <limits>
#include <random>

#include "fixtures.hpp"
#include "ftmm/ensemble.hpp"
#include "ftmm/errors.hpp"
#include "ftmm/random.hpp"

using ftmm::Point;

TEST_SUITE("ensemble") {

TEST_CASE("h_f on the three-cone ensemble") {
    const auto ens = fixtures::cone_ensemble();
    CHECK(ftmm::eval_hf(ens, Point{0.0}) == 1.0);
    CHECK(ftmm::eval_hf(ens, Point{0.5}) == 0.5);
    const auto p = ftmm::profile(ens, Point{0.5});
    CHECK(p.values == std::vector<double>{0.5, 0.5, 1.5});
}

TEST_CASE("g_0 and g_f restricted to the honest set") {
    const auto ens = fixtures::cone_ensemble();
    const auto truth = fixtures::cone_truth();
    CHECK(ftmm::eval_g0(ens, truth, Point{0.5}) == 0.5);
    CHECK(ftmm::eval_gf(ens, truth, Point{0.5}) == 0.5);
    CHECK(ftmm::eval_g0(ens, truth, Point{-0.5}) == 1.5);
    CHECK(ftmm::eval_gf(ens, truth, Point{-0.5}) == 0.5);
}

TEST_CASE("f = 0 and an empty faulty set") {
    const ftmm::Ensemble ens({fixtures::cone1(0.0), fixtures::cone1(1.0)}, 0, fixtures::interval());
    const auto none = ftmm::GroundTruth::none(2);
    for (double x : {-1.5, 0.2, 1.9}) {
        const Point p{x};
        CHECK(ftmm::eval_hf(ens, p) == std::max(std::abs(x), std::abs(x - 1.0)));
        CHECK(ftmm::eval_g0(ens, none, p) == ftmm::eval_hf(ens, p));
        CHECK(ftmm::eval_gf(ens, none, p) == ftmm::eval_hf(ens, p));
    }
}

TEST_CASE("sandwich g_f <= h_f <= g_0 at random points") {
    ftmm::SeededRng rng(99);
    const ftmm::Hypercube box = ftmm::Hypercube::cube(2, -2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t f = static_cast<std::size_t>(rng.integer(1, 3));
        const std::size_t n = 2 * f + 1 + static_cast<std::size_t>(rng.integer(0, 3));
        std::vector<ftmm::CostFunction> specs;
        for (std::size_t i = 0; i < n; ++i) {
            specs.push_back(ftmm::CostFunction::cone(rng.point_in(box), rng.uniform(0.5, 2.0), rng.uniform(0.0, 1.0)));
        }
        std::vector<std::size_t> faulty;
        for (std::size_t i = 0; i < f; ++i) faulty.push_back(n - 1 - 2 * i);
        std::sort(faulty.begin(), faulty.end());
        const ftmm::Ensemble ens(std::move(specs), f, box);
        const ftmm::GroundTruth truth(n, f, faulty);
        for (int k = 0; k < 20; ++k) {
            const Point x = rng.point_in(box);
            const double h = ftmm::eval_hf(ens, x);
            REQUIRE(ftmm::eval_gf(ens, truth, x) <= h);
            REQUIRE(h <= ftmm::eval_g0(ens, truth, x));
        }
    }
}

TEST_CASE("invariants are enforced") {
    auto specs = fixtures::two_cones();
    CHECK_THROWS_AS(ftmm::Ensemble(specs, 1, fixtures::interval()), ftmm::ContractViolation);  // n < 2f+1
    specs.push_back(ftmm::CostFunction::cone({0.0, 0.0}, 1.0));
    CHECK_THROWS_AS(ftmm::Ensemble(specs, 1, fixtures::interval()), ftmm::ContractViolation);  // dimension
    CHECK_THROWS_AS(ftmm::GroundTruth(3, 1, {0, 1}), ftmm::ContractViolation);                 // |F| > f
    CHECK_THROWS_AS(ftmm::GroundTruth(3, 1, {3}), ftmm::ContractViolation);                    // out of range
    CHECK_THROWS_AS(ftmm::Hypercube({1.0}, {1.0}), ftmm::ContractViolation);
}

TEST_CASE("non-finite values name the offending function") {
    const auto bad = ftmm::CostFunction::custom(
        [](std::span<const double>) { return std::numeric_limits<double>::infinity(); }, 1);
    const ftmm::Ensemble ens({fixtures::cone1(0.0), fixtures::cone1(1.0), bad}, 1, fixtures::interval());
    try {
        (void)ftmm::eval_hf(ens, Point{0.0});
        FAIL("expected an evaluation error");
    } catch (const ftmm::EvaluationError& e) {
        CHECK(e.index() == 2);
        CHECK(std::string(e.what()).find('3') != std::string::npos);
    }
}

TEST_CASE("points outside the domain are rejected") {
    const auto ens = fixtures::cone_ensemble();
    CHECK_THROWS(ftmm::eval_hf(ens, Point{2.5}));
}

TEST_CASE("hypercube geometry") {
    const ftmm::Hypercube box({0.0, -1.0}, {4.0, 2.0});
    CHECK(box.center() == Point{2.0, 0.5});
    CHECK(box.diameter() == doctest::Approx(5.0));
    CHECK(box.volume() == doctest::Approx(12.0));
    CHECK(box.on_boundary(Point{0.0, 0.5}));
    CHECK_FALSE(box.on_boundary(Point{1.0, 0.5}));
    CHECK(box.max_distance_from(Point{0.0, -1.0}) == doctest::Approx(5.0));
    CHECK(box.min_distance_from(Point{5.0, 0.0}) == doctest::Approx(1.0));
}

}
