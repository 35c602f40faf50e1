#include <doctest.h>

#include <json.hpp>

#include "ftmm/errors.hpp"
#include "ftmm/pipeline.hpp"
#include "ftmm/scenario.hpp"

namespace {

const char* kConeAboveAll = R"(name: cone-above-all
domain: {lower: [-2], upper: [2]}
f: 1
nonnegative: true
honest:
  - {kind: cone, center: [0], slope: 1}
  - {kind: cone, center: [1], slope: 1}
adversaries:
  - {kind: above_all, margin: 0.5}
solver: {resolution: 4001, epsilon: 0.1}
output: {curve_points: 5}
stages: [exact, approx, verify]
)";

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("full run on the cone scenario") {
    ftmm::RunOptions opts;
    opts.timestamp = false;
    const auto out = ftmm::run_scenario(ftmm::parse_scenario(kConeAboveAll), opts);
    CHECK(out.exit_code == ftmm::exit_code::pass);
    REQUIRE(out.exact);
    CHECK(out.exact->v_hat == doctest::Approx(0.5));
    REQUIRE(out.approx.size() == 1);
    CHECK(out.approx[0].value <= 0.5 / 0.9);

    const auto j = nlohmann::json::parse(out.report);
    CHECK_FALSE(j.contains("generated_at"));
    CHECK(j["scenario"]["faulty"] == nlohmann::json::array({3}));
    CHECK(j["summary"]["fail"] == 0);
    CHECK(j["approx"][0]["bound_factor"].get<double>() == doctest::Approx(1.0 / 0.9));

    CHECK(out.curve_csv.rfind("x,Q1,Q2,Q3,h_f,g_0,g_f\n", 0) == 0);
    CHECK(out.curve_csv.find("\n0,0,1,1.5,1,1,0\n") != std::string::npos);
}

TEST_CASE("reports are byte-identical without the timestamp") {
    const auto s = ftmm::parse_scenario(kConeAboveAll);
    ftmm::RunOptions opts;
    opts.timestamp = false;
    const auto a = ftmm::run_scenario(s, opts);
    opts.threads = 4;
    const auto b = ftmm::run_scenario(s, opts);
    CHECK(a.report.find("\"threads\": 1") != std::string::npos);
    // Only the recorded thread count may differ.
    std::string bt = b.report;
    bt.replace(bt.find("\"threads\": 4"), 12, "\"threads\": 1");
    CHECK(a.report == bt);
    CHECK(a.curve_csv == b.curve_csv);

    opts.timestamp = true;
    CHECK(ftmm::run_scenario(s, opts).report.find("generated_at") != std::string::npos);
}

TEST_CASE("epsilon sweep: one approx record per value") {
    const auto sw = ftmm::parse_sweep("epsilon=0.05:0.5:0.05");
    const auto values = sw.values();
    REQUIRE(values.size() == 10);
    CHECK(values[2] == 0.15);
    CHECK(values.back() == 0.5);

    ftmm::RunOptions opts;
    opts.timestamp = false;
    opts.sweep = sw;
    const auto out = ftmm::run_scenario(ftmm::parse_scenario(kConeAboveAll), opts);
    const auto j = nlohmann::json::parse(out.report);
    REQUIRE(j["approx"].size() == 10);
    for (std::size_t i = 0; i < values.size(); ++i) {
        CHECK(j["approx"][i]["bound_factor"].get<double>() == doctest::Approx(1.0 / (1.0 - values[i])));
    }
    CHECK(out.exit_code == ftmm::exit_code::pass);

    CHECK_THROWS_AS(ftmm::parse_sweep("lipschitz=1:2:0.5"), ftmm::ValidationError);
    CHECK_THROWS_AS(ftmm::parse_sweep("epsilon=0.5:1.5:0.5"), ftmm::ValidationError);
    CHECK_THROWS_AS(ftmm::parse_sweep("epsilon=0.1:0.2"), ftmm::ValidationError);
}

TEST_CASE("budget exhaustion maps to its own exit code") {
    auto s = ftmm::parse_scenario(kConeAboveAll);
    s.solver.budget = 100;
    s.stages = {ftmm::Stage::exact};
    ftmm::RunOptions opts;
    opts.timestamp = false;
    const auto out = ftmm::run_scenario(s, opts);
    CHECK(out.exit_code == ftmm::exit_code::budget);
    CHECK(nlohmann::json::parse(out.report)["exact"]["required"] == 4001);
}

TEST_CASE("stage overrides") {
    ftmm::RunOptions opts;
    opts.timestamp = false;
    opts.stages = std::vector<ftmm::Stage>{ftmm::Stage::exact};
    const auto out = ftmm::run_scenario(ftmm::parse_scenario(kConeAboveAll), opts);
    const auto j = nlohmann::json::parse(out.report);
    CHECK(j.contains("exact"));
    CHECK_FALSE(j.contains("approx"));
    CHECK_FALSE(j.contains("checks"));
}

TEST_CASE("file names are sanitized") {
    CHECK(ftmm::sanitize_name("cone 1d/../x") == "cone_1d_.._x");
    CHECK(ftmm::sanitize_name("") == "scenario");
}

}
