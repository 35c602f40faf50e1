// ftmm: run fault-tolerant min-max scenarios and generate random ones.
//
//   ftmm run scenarios/cone-1d.yaml --out results --stages exact,approx,verify
//   ftmm generate --seed 7 --template cones-1d-gap --out gen.yaml

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ftmm/errors.hpp"
#include "ftmm/pipeline.hpp"
#include "ftmm/scenario.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<ftmm::Stage> parse_stage_list(const std::string& text) {
    std::vector<ftmm::Stage> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto s = ftmm::parse_stage(item);
        if (!s) throw ftmm::ValidationError("unknown stage '" + item + "' (expected exact, approx or verify)");
        out.push_back(*s);
    }
    if (out.empty()) throw ftmm::ValidationError("--stages needs at least one stage");
    return out;
}

struct RunArgs {
    std::string scenario;
    std::string out = "results";
    std::string stages;
    std::size_t resolution = 0;
    double epsilon = 0.0;
    std::string sweep;
    unsigned threads = 0;
    bool no_timestamp = false;
};

int do_run(const RunArgs& args, CLI::App& cmd) {
    const ftmm::Scenario scenario = ftmm::load_scenario(args.scenario);

    ftmm::RunOptions opts;
    if (!args.stages.empty()) opts.stages = parse_stage_list(args.stages);
    if (cmd.count("--resolution") > 0) {
        if (args.resolution < 2) throw ftmm::ValidationError("--resolution must be at least 2");
        opts.resolution = args.resolution;
    }
    if (cmd.count("--epsilon") > 0) {
        if (!(args.epsilon > 0.0 && args.epsilon < 1.0)) throw ftmm::ValidationError("--epsilon must lie in (0, 1)");
        opts.epsilon = args.epsilon;
    }
    if (!args.sweep.empty()) opts.sweep = ftmm::parse_sweep(args.sweep);
    if (cmd.count("--threads") > 0) opts.threads = args.threads;
    opts.timestamp = !args.no_timestamp;

    const ftmm::RunOutcome outcome = ftmm::run_scenario(scenario, opts);

    fs::create_directories(args.out);
    const std::string stem = ftmm::sanitize_name(scenario.name);
    const fs::path report_path = fs::path(args.out) / (stem + ".json");
    ftmm::write_file_atomic(report_path, outcome.report);
    std::cout << "report: " << report_path.string() << "\n";
    if (!outcome.curve_csv.empty()) {
        const fs::path curve_path = fs::path(args.out) / (stem + ".curve.csv");
        ftmm::write_file_atomic(curve_path, outcome.curve_csv);
        std::cout << "curve:  " << curve_path.string() << "\n";
    }

    const auto& ver = outcome.verification;
    for (const auto& r : ver.records()) {
        if (r.status == ftmm::CheckStatus::fail) {
            std::cout << "FAIL " << r.name << ": " << r.detail << "\n";
        }
    }
    std::cout << "checks: " << ver.count(ftmm::CheckStatus::pass) << " pass, "
              << ver.count(ftmm::CheckStatus::fail) << " fail, " << ver.count(ftmm::CheckStatus::inconclusive)
              << " inconclusive, " << ver.count(ftmm::CheckStatus::skipped) << " skipped\n";
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fault-tolerant min-max solver and bound checker"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run a scenario through the exact, approx and verify stages");
    run->add_option("scenario", run_args.scenario, "Scenario file (YAML or JSON)")->required();
    run->add_option("--out", run_args.out, "Output directory")->capture_default_str();
    run->add_option("--stages", run_args.stages, "Comma-separated stages: exact,approx,verify");
    run->add_option("--resolution", run_args.resolution, "Grid points per axis for the exact solver and oracles");
    run->add_option("--epsilon", run_args.epsilon, "Accuracy parameter for the approximate solver");
    run->add_option("--sweep", run_args.sweep, "Parameter sweep, e.g. epsilon=0.05:0.5:0.05");
    run->add_option("--threads", run_args.threads, "Worker threads for grid evaluation");
    run->add_flag("--no-timestamp", run_args.no_timestamp, "Omit the generated_at field from the report");

    std::uint64_t seed = 0;
    std::string template_name;
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "Write a seeded random scenario");
    gen->add_option("--seed", seed, "Random seed")->required();
    gen->add_option("--template", template_name, "Template, e.g. cones-1d or mixed-2d-below_all")->required();
    gen->add_option("--out", gen_out, "Output scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : ftmm::exit_code::usage;
    }

    try {
        if (*run) return do_run(run_args, *run);
        const std::string text = ftmm::generate_scenario_text(seed, template_name);
        const fs::path out(gen_out);
        if (out.has_parent_path()) fs::create_directories(out.parent_path());
        ftmm::write_file_atomic(out, text);
        std::cout << "scenario: " << out.string() << "\n";
        return ftmm::exit_code::pass;
    } catch (const ftmm::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ftmm::exit_code::usage;
    } catch (const ftmm::ContractViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ftmm::exit_code::usage;
    } catch (const ftmm::BudgetExceeded& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return ftmm::exit_code::budget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ftmm::exit_code::usage;
    }
}
