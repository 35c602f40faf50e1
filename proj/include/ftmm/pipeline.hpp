#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftmm/approx_solver.hpp"
#include "ftmm/exact_solver.hpp"
#include "ftmm/scenario.hpp"
#include "ftmm/verifier.hpp"

namespace ftmm {

namespace exit_code {
inline constexpr int pass = 0;
inline constexpr int check_failure = 1;
inline constexpr int usage = 2;
inline constexpr int budget = 3;
}  // namespace exit_code

// "key=start:stop:step", stop inclusive. Only "epsilon" is sweepable.
struct Sweep {
    std::string key;
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;

    std::vector<double> values() const;
};
Sweep parse_sweep(std::string_view text);

struct RunOptions {
    std::optional<std::vector<Stage>> stages;
    std::optional<std::size_t> resolution;
    std::optional<double> epsilon;
    std::optional<Sweep> sweep;
    std::optional<unsigned> threads;
    bool timestamp = true;
};

struct RunOutcome {
    std::string report;     // JSON document
    std::string curve_csv;  // empty unless curve output was requested (1-D only)
    int exit_code = exit_code::pass;
    VerificationReport verification{""};
    std::optional<SolveResult> exact;
    std::vector<ApproxResult> approx;
};

// Runs the requested stages and builds the report. Throws ValidationError for
// settings that cannot run (e.g. no usable Lipschitz constant).
RunOutcome run_scenario(const Scenario& scenario, const RunOptions& options = {});

// Columns: x, Q1..Qn, h_f, g_0, g_f; `points` evenly spaced samples of a 1-D domain.
std::string curve_csv(const Ensemble& ensemble, const GroundTruth& truth, std::size_t points);

// write to a sibling temp file, then rename over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// File-name-safe form of a scenario name.
std::string sanitize_name(std::string_view name);

}  // namespace ftmm
