#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ftmm/approx_solver.hpp"
#include "ftmm/errors.hpp"

using ftmm::ApproxConfig;
using ftmm::Cell;
using ftmm::Point;

namespace {

// Cell with the given h value and diameter (L = 1 in these tests).
Cell fake_cell(std::size_t id, double h, double d) {
    Cell c;
    c.id = id;
    c.h_value = h;
    c.diameter = d;
    return c;
}

}  // namespace

TEST_SUITE("approx_solver") {

TEST_CASE("criterion arithmetic") {
    ApproxConfig cfg;
    cfg.epsilon = 0.1;
    cfg.lipschitz = 1.0;

    const std::vector<Cell> ok{fake_cell(0, 1.0, 0.05)};
    CHECK(ftmm::criterion_satisfied(ok, cfg).satisfied);

    const std::vector<Cell> bad{fake_cell(0, 1.0, 0.2)};
    const auto r = ftmm::criterion_satisfied(bad, cfg);
    CHECK_FALSE(r.satisfied);
    CHECK(r.violators == std::vector<std::size_t>{0});
    CHECK(r.max_violation == doctest::Approx(0.1));

    const std::vector<Cell> two{fake_cell(0, 1.0, 0.05), fake_cell(1, 2.0, 1.5)};
    const auto r2 = ftmm::criterion_satisfied(two, cfg);
    CHECK_FALSE(r2.satisfied);
    CHECK(r2.violators == std::vector<std::size_t>{1});
    CHECK(r2.min_value == 1.0);
}

TEST_CASE("floor lets tiny cells pass near a zero minimum") {
    ApproxConfig cfg;
    cfg.epsilon = 0.1;
    cfg.tau_abs = 1e-3;
    const std::vector<Cell> cells{fake_cell(0, 0.0, 5e-4), fake_cell(1, 0.3, 0.2)};
    const auto r = ftmm::criterion_satisfied(cells, cfg);
    CHECK(r.satisfied);
    CHECK(r.floor_assisted == std::vector<std::size_t>{0});
}

TEST_CASE("bisection along the longest edge") {
    const auto [a, b] = ftmm::split_cell(ftmm::make_cell({0.0, 0.0}, {4.0, 2.0}));
    CHECK(a.lower == Point{0.0, 0.0});
    CHECK(a.upper == Point{2.0, 2.0});
    CHECK(b.lower == Point{2.0, 0.0});
    CHECK(b.upper == Point{4.0, 2.0});

    const auto [c, d] = ftmm::split_cell(ftmm::make_cell({0.0, 0.0}, {2.0, 2.0}));
    CHECK(c.upper == Point{1.0, 2.0});
    CHECK(d.lower == Point{1.0, 0.0});

    const auto [e, g] = ftmm::split_cell(ftmm::make_cell({-2.0}, {2.0}));
    CHECK(e.diameter == 2.0);
    CHECK(g.diameter == 2.0);
    CHECK(e.center == Point{-1.0});
}

TEST_CASE("cone plus above-all: value within 1/(1 - eps) of 0.5") {
    ApproxConfig cfg;
    cfg.epsilon = 0.1;
    cfg.lipschitz = 1.0;
    const auto res = ftmm::refine(fixtures::above_all_ensemble(), cfg);
    CHECK(res.terminated_by == ftmm::Termination::criterion);
    CHECK(res.value <= 0.5 / 0.9 + 1e-12);
    CHECK(res.value >= 0.5);
    CHECK(res.cell_count == res.partition.size());
    CHECK(res.partition[res.k].center == res.x_bar);
    CHECK(ftmm::criterion_satisfied(res.partition, cfg).satisfied);
}

TEST_CASE("smaller epsilon: tighter value, more cells") {
    const auto ens = fixtures::above_all_ensemble();
    double prev_value = std::numeric_limits<double>::infinity();
    std::size_t prev_cells = 0;
    for (double eps : {0.5, 0.25, 0.1, 0.01}) {
        ApproxConfig cfg;
        cfg.epsilon = eps;
        const auto res = ftmm::refine(ens, cfg);
        CHECK(res.value <= 0.5 / (1 - eps) + 1e-12);
        CHECK(res.value <= prev_value + 1e-12);
        CHECK(res.cell_count >= prev_cells);
        prev_value = res.value;
        prev_cells = res.cell_count;
    }
    CHECK(prev_value == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("honest minimum bounded away from zero terminates by criterion") {
    std::vector<ftmm::CostFunction> honest(3, ftmm::CostFunction::cone({0.0, 0.0}, 1.0, 1.0));
    auto adv = ftmm::make_above_all_adversary(honest, 0.5);
    auto specs = honest;
    specs.push_back(adv);
    const ftmm::Ensemble ens(std::move(specs), 1, ftmm::Hypercube::cube(2, -1.0, 1.0), true);
    ApproxConfig cfg;
    cfg.epsilon = 0.25;
    cfg.tau_abs = 0.0;
    const auto res = ftmm::refine(ens, cfg);
    CHECK(res.terminated_by == ftmm::Termination::criterion);
    CHECK(res.value <= 1.0 / 0.75);
}

TEST_CASE("zero minimum needs the floor") {
    const ftmm::Ensemble ens({fixtures::cone1(0.3), fixtures::cone1(0.3), fixtures::cone1(0.3)}, 1,
                             fixtures::interval(), true);
    ApproxConfig cfg;
    cfg.epsilon = 0.2;
    const auto res = ftmm::refine(ens, cfg);
    CHECK(res.terminated_by == ftmm::Termination::floor);
    CHECK(res.tau_abs == doctest::Approx(4e-6));
    cfg.max_cells = 64;
    cfg.tau_abs = 0.0;
    CHECK(ftmm::refine(ens, cfg).terminated_by == ftmm::Termination::budget);
}

TEST_CASE("partition tiles the domain after every round") {
    auto specs = std::vector<ftmm::CostFunction>{ftmm::CostFunction::quadratic({0.2, -0.4}, 1.0, 0.5),
                                                 ftmm::CostFunction::cone({-0.5, 0.5}, 1.0, 0.5),
                                                 ftmm::CostFunction::cone({0.9, 0.1}, 2.0, 1.0)};
    const auto box = ftmm::Hypercube::cube(2, -2.0, 2.0);
    const ftmm::Ensemble ens(std::move(specs), 1, box, true);
    ApproxConfig cfg;
    cfg.epsilon = 0.25;
    cfg.lipschitz = 8.0;
    std::size_t rounds = 0;
    const auto res = ftmm::refine(ens, cfg, [&](std::size_t, std::span<const Cell> cells) {
        ++rounds;
        REQUIRE(std::abs(ftmm::partition_volume(cells) - box.volume()) <= 1e-9 * box.volume());
        if (cells.size() <= 400) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                REQUIRE(cells[i].id == i);
                for (std::size_t j = i + 1; j < cells.size(); ++j) REQUIRE_FALSE(ftmm::interiors_overlap(cells[i], cells[j]));
            }
        }
    });
    CHECK(rounds == res.rounds + 1);
    CHECK(res.trace.size() == res.rounds + 1);
}

TEST_CASE("deterministic across runs and thread counts") {
    const auto ens = fixtures::above_all_ensemble();
    ApproxConfig cfg;
    cfg.epsilon = 0.05;
    const auto a = ftmm::refine(ens, cfg);
    const auto b = ftmm::refine(ens, cfg);
    cfg.threads = 3;
    const auto c = ftmm::refine(ens, cfg);
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("configuration is validated") {
    ApproxConfig cfg;
    cfg.epsilon = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ftmm::ContractViolation);
    cfg.epsilon = 0.1;
    cfg.lipschitz = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ftmm::ContractViolation);
    cfg.lipschitz = 1.0;
    const ftmm::Ensemble signed_ens({fixtures::cone1(0.0), fixtures::cone1(1.0), fixtures::cone1(0.5)}, 1,
                                    fixtures::interval(), false);
    CHECK_THROWS_AS(ftmm::refine(signed_ens, cfg), ftmm::ContractViolation);
}

}
