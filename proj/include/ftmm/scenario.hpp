#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftmm/ensemble.hpp"
#include "ftmm/functions.hpp"

namespace ftmm {

enum class Stage { exact, approx, verify };
std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view name);

// A faulty function, expanded from the honest list when the scenario loads.
struct AdversaryDirective {
    enum class Kind { above_all, below_all, gap, explicit_function };

    Kind kind = Kind::above_all;
    double margin = 0.5;
    double gap = 10.0;                      // V, gap kind only
    std::optional<CostFunction> function;   // explicit_function only
    std::optional<std::size_t> index;       // 1-based position in the ensemble

    bool operator==(const AdversaryDirective&) const = default;
};
std::string_view to_string(AdversaryDirective::Kind k);

struct SolverSettings {
    std::vector<std::size_t> resolution;  // empty selects default_resolution
    double epsilon = 0.1;
    std::optional<double> lipschitz;      // default: largest honest bound
    std::size_t max_cells = 1'000'000;
    std::optional<double> tau_abs;
    std::uint64_t budget = 10'000'000;
    unsigned threads = 1;
    std::size_t lipschitz_pairs = 10'000;
    std::size_t obs3_rank = 1;

    bool operator==(const SolverSettings&) const = default;
};

struct OutputSettings {
    std::size_t curve_points = 0;  // 1-D curve samples; 0 disables
    bool trace = false;            // per-round partition trace in the report

    bool operator==(const OutputSettings&) const = default;
};

struct Scenario {
    std::string name;
    Hypercube domain;
    std::size_t f = 0;
    bool nonnegative = false;
    std::vector<CostFunction> honest;
    std::vector<AdversaryDirective> adversaries;
    SolverSettings solver;
    OutputSettings output;
    std::vector<Stage> stages{Stage::exact, Stage::verify};
    std::uint64_t seed = 0;

    std::size_t n() const { return honest.size() + adversaries.size(); }
    bool has_stage(Stage s) const;

    bool operator==(const Scenario&) const = default;
};

// The solver-facing ensemble and the hidden labeling that goes with it.
struct ExpandedScenario {
    Ensemble ensemble;
    GroundTruth truth;
};

// Adversaries with an explicit index take that position; the rest occupy the
// last free positions in order; honest functions fill the remaining ones.
ExpandedScenario expand(const Scenario& scenario);

// Parses a YAML (or JSON) scenario document and validates it, including the
// expansion. Errors are ValidationError with the 1-based line of the node.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

std::string serialize_scenario(const Scenario& scenario);

// Deterministic random scenario. Template: "<family>-<d>d[-<adversary>]" with
// family in {cones, quadratics, mixed} and adversary in {above_all, below_all,
// gap, random_cone}; without the suffix the adversary kind is drawn too.
Scenario generate_scenario(std::uint64_t seed, std::string_view template_name);
std::string generate_scenario_text(std::uint64_t seed, std::string_view template_name);

}  // namespace ftmm
