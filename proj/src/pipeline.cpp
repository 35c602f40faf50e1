#include "ftmm/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "ftmm/errors.hpp"
#include "ftmm/grid.hpp"
#include "ftmm/numfmt.hpp"

namespace ftmm {

using Json = nlohmann::ordered_json;

std::vector<double> Sweep::values() const {
    std::vector<double> out;
    const double span = (stop - start) / step;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        // Snap to 12 significant digits so 0.05 + 2 * 0.05 reads as 0.15.
        const double raw = start + static_cast<double>(i) * step;
        std::ostringstream os;
        os.precision(12);
        os << raw;
        out.push_back(std::stod(os.str()));
    }
    return out;
}

Sweep parse_sweep(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ValidationError("sweep must look like key=start:stop:step");
    Sweep s;
    s.key = std::string(text.substr(0, eq));
    if (s.key != "epsilon") throw ValidationError("only 'epsilon' can be swept, got '" + s.key + "'");
    const std::string rest(text.substr(eq + 1));
    std::vector<double> parts;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("sweep bound '" + item + "' is not a number");
        }
    }
    if (parts.size() != 3) throw ValidationError("sweep must look like key=start:stop:step");
    s.start = parts[0];
    s.stop = parts[1];
    s.step = parts[2];
    if (!(s.step > 0.0) || !(s.stop >= s.start)) {
        throw ValidationError("sweep needs step > 0 and stop >= start");
    }
    for (double e : s.values()) {
        if (!(e > 0.0 && e < 1.0)) throw ValidationError("swept epsilon values must lie in (0, 1)");
    }
    return s;
}

namespace {

Json real(double v) {
    if (!std::isfinite(v)) return Json(nullptr);
    return Json(v);
}

Json point_json(const Point& p) {
    Json a = Json::array();
    for (double v : p) a.push_back(real(v));
    return a;
}

Json record_json(const CheckRecord& r) {
    Json j;
    j["name"] = r.name;
    j["status"] = std::string(to_string(r.status));
    j["relation"] = std::string(to_string(r.relation));
    j["lhs"] = real(r.lhs);
    j["rhs"] = real(r.rhs);
    j["gap"] = real(r.gap);
    j["tolerance"] = real(r.tolerance);
    j["detail"] = r.detail;
    j["witness"] = r.witness ? point_json(*r.witness) : Json(nullptr);
    return j;
}

Json oracle_json(const OracleInfo& o) {
    Json j;
    j["name"] = o.name;
    j["resolution"] = o.resolution;
    j["error_bound"] = o.error_bound ? real(*o.error_bound) : Json(nullptr);
    j["evaluations"] = o.evaluations;
    return j;
}

Json solve_json(const SolveResult& s) {
    Json j;
    j["x_hat"] = point_json(s.x_hat);
    j["v_hat"] = real(s.v_hat);
    Json idx = Json::array();
    for (std::size_t i : s.grid_index) idx.push_back(i);
    j["grid_index"] = idx;
    j["evaluations"] = s.evaluations;
    Json cert;
    cert["grid_step"] = point_json(s.certificate.grid_step);
    cert["half_cell_diameter"] = real(s.certificate.half_cell_diameter);
    cert["error_bound"] = s.certificate.error_bound ? real(*s.certificate.error_bound) : Json("uncertified");
    j["certificate"] = cert;
    j["boundary_touch"] = s.boundary_touch;
    return j;
}

Json approx_json(const ApproxResult& a, const ApproxConfig& cfg, bool with_trace) {
    Json j;
    j["epsilon"] = real(cfg.epsilon);
    j["bound_factor"] = real(1.0 / (1.0 - cfg.epsilon));
    j["lipschitz"] = real(cfg.lipschitz);
    j["x_bar"] = point_json(a.x_bar);
    j["value"] = real(a.value);
    j["k"] = a.k + 1;
    j["cell_count"] = a.cell_count;
    j["terminated_by"] = std::string(to_string(a.terminated_by));
    j["rounds"] = a.rounds;
    j["tau_abs"] = real(a.tau_abs);
    if (with_trace) {
        Json t = Json::array();
        for (const auto& r : a.trace) {
            Json row;
            row["round"] = r.round;
            row["cell_count"] = r.cell_count;
            row["min_center_value"] = real(r.min_center_value);
            row["max_violation"] = real(r.max_violation);
            row["violators"] = r.violators;
            t.push_back(row);
        }
        j["trace"] = t;
    }
    return j;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string eps_suffix(double eps) {
    return "@eps=" + format_double(eps);
}

void suffix_names(CheckSet& set, const std::string& suffix) {
    for (auto& r : set.records) r.name += suffix;
    for (auto& o : set.oracles) o.name += suffix;
}

// Obs. 3 applies when every adversary is a gap adversary with one shared V.
std::optional<Obs3Setup> obs3_setup_for(const Scenario& s) {
    if (s.adversaries.empty() || s.f < 1) return std::nullopt;
    const auto& first = s.adversaries.front();
    for (const auto& a : s.adversaries) {
        if (a.kind != AdversaryDirective::Kind::gap || a.gap != first.gap) return std::nullopt;
    }
    return Obs3Setup{.tail = s.honest,
                     .f = s.f,
                     .gap = first.gap,
                     .margin = first.margin,
                     .domain = s.domain,
                     .rank = s.solver.obs3_rank};
}

}  // namespace

std::string curve_csv(const Ensemble& ensemble, const GroundTruth& truth, std::size_t points) {
    if (ensemble.domain().dimension() != 1) throw ContractViolation("curve output needs a 1-D domain");
    if (points < 2) throw ContractViolation("curve output needs at least 2 points");
    std::string out = "x";
    for (std::size_t i = 0; i < ensemble.n(); ++i) out += ",Q" + std::to_string(i + 1);
    out += ",h_f,g_0,g_f\n";
    const Grid grid(ensemble.domain(), {points});
    for (std::uint64_t k = 0; k < grid.node_count(); ++k) {
        const Point x = grid.node(k);
        const auto p = profile(ensemble, x);
        out += format_double(x[0]);
        for (double v : p.values) out += "," + format_double(v);
        out += "," + format_double(eval_hf(ensemble, x));
        out += "," + format_double(eval_g0(ensemble, truth, x));
        out += "," + format_double(eval_gf(ensemble, truth, x));
        out += "\n";
    }
    return out;
}

RunOutcome run_scenario(const Scenario& scenario, const RunOptions& options) {
    RunOutcome outcome;
    outcome.verification = VerificationReport(scenario.name);

    const std::vector<Stage> stages = options.stages.value_or(scenario.stages);
    auto wants = [&](Stage s) { return std::find(stages.begin(), stages.end(), s) != stages.end(); };
    if (wants(Stage::approx) && !scenario.nonnegative) {
        throw ValidationError("the approx stage requires a scenario flagged non-negative");
    }

    const auto [ensemble, truth] = expand(scenario);
    const std::size_t d = ensemble.domain().dimension();

    std::vector<std::size_t> resolution = scenario.solver.resolution;
    if (options.resolution) resolution = {*options.resolution};
    resolution = Grid(ensemble.domain(), resolution).points_per_axis();

    SolveOptions solve_opts;
    solve_opts.budget = scenario.solver.budget;
    solve_opts.threads = options.threads.value_or(scenario.solver.threads);

    std::vector<double> epsilons{options.epsilon.value_or(scenario.solver.epsilon)};
    if (options.sweep) epsilons = options.sweep->values();

    double lipschitz = 0.0;
    if (wants(Stage::approx)) {
        if (scenario.solver.lipschitz) {
            lipschitz = *scenario.solver.lipschitz;
        } else if (const auto l = ensemble.lipschitz_bound(truth.honest()); l && *l > 0.0) {
            lipschitz = *l;
        } else {
            throw ValidationError("no Lipschitz constant given and none can be derived for the honest functions");
        }
    }

    Json report;
    report["tool"] = "ftmm";
    report["format_version"] = 1;
    if (options.timestamp) report["generated_at"] = utc_timestamp();

    Json sj;
    sj["name"] = scenario.name;
    sj["n"] = ensemble.n();
    sj["f"] = ensemble.f();
    sj["dimension"] = d;
    sj["domain"] = {{"lower", point_json(ensemble.domain().lower())},
                    {"upper", point_json(ensemble.domain().upper())}};
    Json faulty = Json::array();
    for (std::size_t i : truth.faulty()) faulty.push_back(i + 1);
    sj["faulty"] = faulty;
    sj["seed"] = scenario.seed;
    report["scenario"] = sj;

    Json settings;
    Json stage_names = Json::array();
    for (Stage s : stages) stage_names.push_back(std::string(to_string(s)));
    settings["stages"] = stage_names;
    settings["resolution"] = resolution;
    settings["budget"] = solve_opts.budget;
    settings["threads"] = solve_opts.threads;
    Json eps_json = Json::array();
    for (double e : epsilons) eps_json.push_back(real(e));
    settings["epsilon"] = eps_json;
    settings["lipschitz"] = wants(Stage::approx) ? real(lipschitz) : Json(nullptr);
    report["settings"] = settings;

    bool budget_hit = false;
    Json warnings = Json::array();

    if (wants(Stage::exact)) {
        try {
            outcome.exact = minimize_hf(ensemble, resolution, solve_opts);
            report["exact"] = solve_json(*outcome.exact);
            if (outcome.exact->boundary_touch) {
                warnings.push_back("x_hat lies on the domain boundary; the minimizer over a larger region may lie outside");
            }
            if (!outcome.exact->certificate.error_bound) {
                warnings.push_back("exact solve is uncertified: some function has no declared Lipschitz constant");
            }
        } catch (const BudgetExceeded& e) {
            budget_hit = true;
            report["exact"] = {{"error", e.what()}, {"required", e.required()}, {"budget", e.budget()}};
        }
    }

    std::vector<ApproxConfig> configs;
    if (wants(Stage::approx)) {
        Json arr = Json::array();
        for (double eps : epsilons) {
            ApproxConfig cfg;
            cfg.epsilon = eps;
            cfg.lipschitz = lipschitz;
            cfg.max_cells = scenario.solver.max_cells;
            cfg.tau_abs = scenario.solver.tau_abs;
            cfg.threads = solve_opts.threads;
            ApproxResult res = refine(ensemble, cfg);
            if (res.terminated_by == Termination::budget) budget_hit = true;
            arr.push_back(approx_json(res, cfg, scenario.output.trace));
            outcome.approx.push_back(std::move(res));
            configs.push_back(cfg);
        }
        report["approx"] = arr;
    }

    if (wants(Stage::verify)) {
        VerifyOptions vopts;
        vopts.resolution = resolution;
        vopts.solve = solve_opts;
        auto& ver = outcome.verification;
        ver.merge(check_claim1(ensemble, truth, vopts));
        if (outcome.exact) ver.add(check_obs1(ensemble, truth, *outcome.exact));
        ver.merge(check_obs2(ensemble, truth, vopts));
        if (const auto setup = obs3_setup_for(scenario)) {
            if (setup->rank >= 1 && setup->rank < setup->f + 1) {
                ver.merge(check_obs3_indistinguishability(*setup, vopts));
            } else {
                ver.add(make_skipped("obs3", "obs3_rank must satisfy 1 <= r < f + 1"));
            }
        }
        ver.add(check_lipschitz_g0(ensemble, truth, scenario.solver.lipschitz_pairs, scenario.seed + 1));
        for (std::size_t a = 0; a < outcome.approx.size(); ++a) {
            const std::string suffix = eps_suffix(configs[a].epsilon);
            CheckSet set = check_approx_guarantee(ensemble, truth, outcome.approx[a], configs[a], vopts);
            set.append(check_approx_derivation(ensemble, truth, outcome.approx[a], configs[a], 4, scenario.seed + 2));
            set.append(check_partition_tiling(outcome.approx[a].partition, ensemble.domain()));
            suffix_names(set, suffix);
            ver.merge(std::move(set));
        }

        Json checks = Json::array();
        for (const auto& r : ver.records()) checks.push_back(record_json(r));
        report["checks"] = checks;
        Json oracles = Json::array();
        for (const auto& o : ver.oracles()) oracles.push_back(oracle_json(o));
        report["oracles"] = oracles;
    }

    if (scenario.output.curve_points > 0) {
        if (d == 1) {
            outcome.curve_csv = curve_csv(ensemble, truth, scenario.output.curve_points);
        } else {
            warnings.push_back("curve output is only produced for 1-D domains");
        }
    }
    report["warnings"] = warnings;

    const auto& ver = outcome.verification;
    if (ver.count(CheckStatus::fail) > 0) {
        outcome.exit_code = exit_code::check_failure;
    } else if (budget_hit) {
        outcome.exit_code = exit_code::budget;
    } else {
        outcome.exit_code = exit_code::pass;
    }
    report["summary"] = {{"pass", ver.count(CheckStatus::pass)},
                         {"fail", ver.count(CheckStatus::fail)},
                         {"inconclusive", ver.count(CheckStatus::inconclusive)},
                         {"skipped", ver.count(CheckStatus::skipped)},
                         {"exit_code", outcome.exit_code}};

    outcome.report = report.dump(2) + "\n";
    return outcome;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string sanitize_name(std::string_view name) {
    std::string out;
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                        c == '_' || c == '.';
        out += ok ? c : '_';
    }
    return out.empty() ? "scenario" : out;
}

}  // namespace ftmm
