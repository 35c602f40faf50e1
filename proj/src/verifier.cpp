#include "ftmm/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ftmm/errors.hpp"
#include "ftmm/grid.hpp"
#include "ftmm/random.hpp"
#include "ftmm/rank.hpp"

namespace ftmm {

std::string_view to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::inconclusive: return "inconclusive";
        case CheckStatus::skipped: return "skipped";
    }
    return "unknown";
}

std::string_view to_string(Relation r) {
    switch (r) {
        case Relation::greater_equal: return ">=";
        case Relation::greater: return ">";
        case Relation::less_equal: return "<=";
        case Relation::equal: return "==";
    }
    return "?";
}

std::string_view to_string(Dominance d) {
    switch (d) {
        case Dominance::above_all: return "above_all";
        case Dominance::below_all: return "below_all";
        case Dominance::none: return "none";
    }
    return "unknown";
}

bool relation_holds(Relation relation, double lhs, double rhs, double tolerance) {
    switch (relation) {
        case Relation::greater_equal: return lhs >= rhs - tolerance;
        case Relation::greater: return lhs > rhs - tolerance;
        case Relation::less_equal: return lhs <= rhs + tolerance;
        case Relation::equal: return std::abs(lhs - rhs) <= tolerance;
    }
    return false;
}

CheckRecord make_check(std::string name, Relation relation, double lhs, double rhs,
                       double tolerance, std::string detail, std::optional<Point> witness) {
    CheckRecord r;
    r.name = std::move(name);
    r.relation = relation;
    r.lhs = lhs;
    r.rhs = rhs;
    r.gap = lhs - rhs;
    r.tolerance = tolerance;
    r.status = relation_holds(relation, lhs, rhs, tolerance) ? CheckStatus::pass : CheckStatus::fail;
    r.detail = std::move(detail);
    r.witness = std::move(witness);
    return r;
}

CheckRecord make_inconclusive(std::string name, Relation relation, double lhs, double rhs,
                              std::string detail) {
    CheckRecord r;
    r.name = std::move(name);
    r.relation = relation;
    r.lhs = lhs;
    r.rhs = rhs;
    r.gap = lhs - rhs;
    r.status = CheckStatus::inconclusive;
    r.detail = std::move(detail);
    return r;
}

CheckRecord make_skipped(std::string name, std::string detail) {
    CheckRecord r;
    r.name = std::move(name);
    r.status = CheckStatus::skipped;
    r.detail = std::move(detail);
    return r;
}

void CheckSet::append(CheckSet other) {
    for (auto& r : other.records) records.push_back(std::move(r));
    for (auto& o : other.oracles) oracles.push_back(std::move(o));
}

void VerificationReport::merge(CheckSet set) {
    for (auto& r : set.records) records_.push_back(std::move(r));
    for (auto& o : set.oracles) oracles_.push_back(std::move(o));
}

const CheckRecord* VerificationReport::find(std::string_view name) const {
    for (const auto& r : records_) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

std::size_t VerificationReport::count(CheckStatus status) const {
    return static_cast<std::size_t>(
        std::count_if(records_.begin(), records_.end(), [&](const auto& r) { return r.status == status; }));
}

namespace {

// Slack for comparisons whose two sides are computed along different
// floating-point paths but are mathematically ordered.
double float_slack(double scale) {
    return 1e-12 * (1.0 + std::abs(scale));
}

OracleInfo oracle_info(std::string name, const SolveResult& s, const Grid& grid) {
    return {std::move(name), grid.points_per_axis(), s.certificate.error_bound, s.evaluations};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::string fmt_point(const Point& x) {
    std::string s = "(";
    for (std::size_t t = 0; t < x.size(); ++t) s += (t ? ", " : "") + fmt(x[t]);
    return s + ")";
}

std::optional<double> sum_certificates(std::initializer_list<std::optional<double>> certs) {
    double total = 0.0;
    for (const auto& c : certs) {
        if (!c) return std::nullopt;
        total += *c;
    }
    return total;
}

Grid oracle_grid(const Ensemble& e, const VerifyOptions& o) {
    return Grid(e.domain(), o.resolution);
}

std::vector<std::size_t> honest_of(const Ensemble& e, const GroundTruth& truth) {
    if (truth.n() != e.n()) throw ContractViolation("ground truth size does not match ensemble");
    return truth.honest();
}

}  // namespace

CheckSet check_claim1(const Ensemble& ensemble, const GroundTruth& truth, const VerifyOptions& options) {
    CheckSet out;
    const auto honest = honest_of(ensemble, truth);
    const Grid grid = oracle_grid(ensemble, options);
    const auto& res = grid.points_per_axis();

    std::optional<SolveResult> g0_min, hf_min, gf_min;
    try {
        g0_min = minimize_rank_r(ensemble, honest, 1, res, options.solve);
        hf_min = minimize_hf(ensemble, res, options.solve);
        gf_min = minimize_rank_r(ensemble, honest, ensemble.f() + 1, res, options.solve);
    } catch (const BudgetExceeded& e) {
        for (const char* name : {"claim1.upper", "claim1.middle", "claim1.lower"}) {
            out.records.push_back(
                make_inconclusive(name, Relation::greater_equal, 0.0, 0.0, std::string("oracle: ") + e.what()));
        }
        return out;
    }
    out.oracles.push_back(oracle_info("min_g0", *g0_min, grid));
    out.oracles.push_back(oracle_info("min_hf", *hf_min, grid));
    out.oracles.push_back(oracle_info("min_gf", *gf_min, grid));

    const double v_hat = hf_min->v_hat;
    const double gf_at_xhat = eval_gf(ensemble, truth, hf_min->x_hat);

    const auto upper_tol =
        sum_certificates({g0_min->certificate.error_bound, hf_min->certificate.error_bound});
    const std::string upper_detail = "min g_0 = " + fmt(g0_min->v_hat) + " at " +
                                     fmt_point(g0_min->x_hat) + ", v_hat = " + fmt(v_hat);
    if (upper_tol) {
        out.records.push_back(make_check("claim1.upper", Relation::greater_equal, g0_min->v_hat, v_hat,
                                         *upper_tol, upper_detail, hf_min->x_hat));
    } else {
        out.records.push_back(make_inconclusive("claim1.upper", Relation::greater_equal, g0_min->v_hat,
                                                v_hat, upper_detail + "; uncertified oracle"));
    }

    out.records.push_back(make_check("claim1.middle", Relation::greater_equal, v_hat, gf_at_xhat, 0.0,
                                     "v_hat vs g_f(x_hat) at x_hat = " + fmt_point(hf_min->x_hat),
                                     hf_min->x_hat));

    const std::string lower_detail = "g_f(x_hat) = " + fmt(gf_at_xhat) + ", min g_f = " +
                                     fmt(gf_min->v_hat) + " at " + fmt_point(gf_min->x_hat);
    if (const auto lower_tol = gf_min->certificate.error_bound) {
        out.records.push_back(make_check("claim1.lower", Relation::greater_equal, gf_at_xhat, gf_min->v_hat,
                                         *lower_tol, lower_detail, gf_min->x_hat));
    } else {
        out.records.push_back(make_inconclusive("claim1.lower", Relation::greater_equal, gf_at_xhat,
                                                gf_min->v_hat, lower_detail + "; uncertified oracle"));
    }
    return out;
}

CheckRecord check_obs1(const Ensemble& ensemble, const GroundTruth& truth, const SolveResult& solve,
                       double tolerance) {
    const auto honest = honest_of(ensemble, truth);
    const auto p = profile(ensemble, solve.x_hat);
    std::size_t bounded = 0;
    for (std::size_t i : honest) {
        if (p.values[i] <= solve.v_hat + tolerance) ++bounded;
    }
    const double required = static_cast<double>(honest.size() - ensemble.f());
    return make_check("obs1.all_but_f", Relation::greater_equal, static_cast<double>(bounded), required, 0.0,
                      std::to_string(bounded) + " of " + std::to_string(honest.size()) +
                          " honest values at x_hat are <= v_hat = " + fmt(solve.v_hat),
                      solve.x_hat);
}

Dominance classify_dominance(const Ensemble& ensemble, const GroundTruth& truth,
                             const VerifyOptions& options) {
    const auto honest = honest_of(ensemble, truth);
    const auto& faulty = truth.faulty();
    if (faulty.empty() || faulty.size() != ensemble.f()) return Dominance::none;
    const Grid grid = oracle_grid(ensemble, options);
    if (grid.node_count() > options.solve.budget) return Dominance::none;

    bool above = true;
    bool below = true;
    Point x(grid.dimension());
    for (std::uint64_t k = 0; k < grid.node_count() && (above || below); ++k) {
        grid.node_into(k, x);
        double h_min = std::numeric_limits<double>::infinity();
        double h_max = -h_min;
        for (std::size_t i : honest) {
            const double v = ensemble.spec(i)(x);
            h_min = std::min(h_min, v);
            h_max = std::max(h_max, v);
        }
        for (std::size_t j : faulty) {
            const double v = ensemble.spec(j)(x);
            if (!(v > h_max)) above = false;
            if (!(v < h_min)) below = false;
        }
    }
    if (above) return Dominance::above_all;
    if (below) return Dominance::below_all;
    return Dominance::none;
}

namespace {

CheckSet obs2_for(const Ensemble& ensemble, const GroundTruth& truth, Dominance kind,
                  const VerifyOptions& options) {
    CheckSet out;
    const std::string prefix = std::string("obs2.") + std::string(to_string(kind));
    const auto honest = honest_of(ensemble, truth);
    const Grid grid = oracle_grid(ensemble, options);
    const std::size_t honest_rank = kind == Dominance::above_all ? 1 : ensemble.f() + 1;
    const char* target = kind == Dominance::above_all ? "g_0" : "g_f";

    std::optional<SolveResult> hf_min, g_min;
    try {
        hf_min = minimize_hf(ensemble, grid.points_per_axis(), options.solve);
        g_min = minimize_rank_r(ensemble, honest, honest_rank, grid.points_per_axis(), options.solve);
    } catch (const BudgetExceeded& e) {
        out.records.push_back(make_inconclusive(prefix + ".value", Relation::equal, 0.0, 0.0, e.what()));
        out.records.push_back(make_inconclusive(prefix + ".pointwise", Relation::equal, 0.0, 0.0, e.what()));
        return out;
    }
    out.oracles.push_back(oracle_info("min_hf", *hf_min, grid));
    out.oracles.push_back(oracle_info(std::string("min_") + target, *g_min, grid));

    const std::string value_detail =
        "v_hat = " + fmt(hf_min->v_hat) + ", min " + target + " = " + fmt(g_min->v_hat);
    if (const auto tol = sum_certificates({hf_min->certificate.error_bound, g_min->certificate.error_bound})) {
        out.records.push_back(make_check(prefix + ".value", Relation::equal, hf_min->v_hat, g_min->v_hat, *tol,
                                         value_detail, hf_min->x_hat));
    } else {
        out.records.push_back(make_inconclusive(prefix + ".value", Relation::equal, hf_min->v_hat,
                                                g_min->v_hat, value_detail + "; uncertified oracle"));
    }

    const auto all = ensemble.all_indices();
    std::vector<double> scratch_all(all.size());
    std::vector<double> scratch_h(honest.size());
    Point x(grid.dimension());
    double worst = 0.0;
    std::uint64_t mismatches = 0;
    std::optional<Point> witness;
    for (std::uint64_t k = 0; k < grid.node_count(); ++k) {
        grid.node_into(k, x);
        const double hf = detail::rank_over_unchecked(ensemble, all, ensemble.f() + 1, x, scratch_all);
        const double g = detail::rank_over_unchecked(ensemble, honest, honest_rank, x, scratch_h);
        const double diff = std::abs(hf - g);
        if (diff > 0.0) ++mismatches;
        if (diff > worst || (!witness && diff > 0.0)) {
            worst = diff;
            witness = x;
        }
    }
    out.records.push_back(make_check(prefix + ".pointwise", Relation::equal, worst, 0.0, 0.0,
                                     std::to_string(mismatches) + " of " + std::to_string(grid.node_count()) +
                                         " grid nodes where h_f != " + target,
                                     witness));
    return out;
}

}  // namespace

CheckSet check_obs2(const Ensemble& ensemble, const GroundTruth& truth, const VerifyOptions& options) {
    const Dominance kind = classify_dominance(ensemble, truth, options);
    if (kind == Dominance::none) {
        CheckSet out;
        out.records.push_back(make_skipped(
            "obs2.tightness", "faulty functions are neither all above nor all below the honest ones"));
        return out;
    }
    return obs2_for(ensemble, truth, kind, options);
}

CheckSet check_obs2_tightness(const Ensemble& above, const GroundTruth& above_truth, const Ensemble& below,
                              const GroundTruth& below_truth, const VerifyOptions& options) {
    CheckSet out;
    if (classify_dominance(above, above_truth, options) == Dominance::above_all) {
        out.append(obs2_for(above, above_truth, Dominance::above_all, options));
    } else {
        out.records.push_back(make_skipped("obs2.above_all", "above-all precondition does not hold"));
    }
    if (classify_dominance(below, below_truth, options) == Dominance::below_all) {
        out.append(obs2_for(below, below_truth, Dominance::below_all, options));
    } else {
        out.records.push_back(make_skipped("obs2.below_all", "below-all precondition does not hold"));
    }
    return out;
}

CheckSet check_obs3_indistinguishability(const Obs3Setup& setup, const VerifyOptions& options) {
    if (setup.rank < 1 || setup.rank >= setup.f + 1) {
        throw ContractViolation("observation 3 concerns estimators with 1 <= r < f + 1; got r = " +
                                std::to_string(setup.rank) + ", f = " + std::to_string(setup.f));
    }
    if (setup.f < 1) throw ContractViolation("observation 3 needs f >= 1");
    const auto adversary = make_gap_adversary(setup.tail, setup.gap, setup.margin);
    std::vector<CostFunction> specs(setup.f, adversary);
    specs.insert(specs.end(), setup.tail.begin(), setup.tail.end());
    const Ensemble ensemble(std::move(specs), setup.f, setup.domain);
    const std::size_t n = ensemble.n();

    std::vector<std::size_t> e1_faulty, e2_faulty;
    for (std::size_t i = n - setup.f; i < n; ++i) e1_faulty.push_back(i);
    for (std::size_t i = 0; i < setup.f; ++i) e2_faulty.push_back(i);
    const GroundTruth e1(n, setup.f, e1_faulty);
    const GroundTruth e2(n, setup.f, e2_faulty);

    CheckSet out;
    const Grid grid = oracle_grid(ensemble, options);
    const auto all = ensemble.all_indices();

    // Construction check: Q_j(x) - max_{i > f} Q_i(x) > V on the oracle grid.
    {
        std::vector<std::size_t> tail_idx;
        for (std::size_t i = setup.f; i < n; ++i) tail_idx.push_back(i);
        std::vector<double> scratch(tail_idx.size());
        Point x(grid.dimension());
        double min_excess = std::numeric_limits<double>::infinity();
        Point where;
        for (std::uint64_t k = 0; k < grid.node_count(); ++k) {
            grid.node_into(k, x);
            const double tail_max = detail::rank_over_unchecked(ensemble, tail_idx, 1, x, scratch);
            for (std::size_t j = 0; j < setup.f; ++j) {
                const double e = ensemble.spec(j)(x) - tail_max;
                if (e < min_excess) {
                    min_excess = e;
                    where = x;
                }
            }
        }
        out.records.push_back(make_check("obs3.construction", Relation::greater, min_excess, setup.gap, 0.0,
                                         "smallest excess of an adversary over the tail envelope", where));
    }

    // The solver never sees the labeling, so each execution is just a run on
    // the same function multiset.
    const SolveResult run_e1 = minimize_rank_r(ensemble, all, setup.rank, grid.points_per_axis(), options.solve);
    const SolveResult run_e2 = minimize_rank_r(ensemble, all, setup.rank, grid.points_per_axis(), options.solve);
    out.oracles.push_back(oracle_info("estimator_e1", run_e1, grid));
    out.oracles.push_back(oracle_info("estimator_e2", run_e2, grid));
    const bool identical = run_e1 == run_e2;
    const double diff = std::max(std::abs(run_e1.v_hat - run_e2.v_hat), euclidean_distance(run_e1.x_hat, run_e2.x_hat));
    out.records.push_back(make_check("obs3.identical_outputs", Relation::equal, diff, 0.0, 0.0,
                                     identical ? "E1 and E2 outputs are bit-identical"
                                               : "E1 and E2 outputs differ",
                                     run_e1.x_hat));

    const double e1_rank = eval_rank_over(ensemble, e1.honest(), setup.rank, run_e1.x_hat);
    out.records.push_back(make_check("obs3.e1_guarantee", Relation::greater_equal, run_e1.v_hat, e1_rank, 0.0,
                                     "v* vs rank_r over H1 at x*", run_e1.x_hat));

    const SolveResult g0_e2 = minimize_rank_r(ensemble, e2.honest(), 1, grid.points_per_axis(), options.solve);
    out.oracles.push_back(oracle_info("min_g0_e2", g0_e2, grid));
    const double rhs = g0_e2.v_hat + setup.gap;
    const std::string detail = "v* = " + fmt(run_e2.v_hat) + ", min g_0 (E2) = " + fmt(g0_e2.v_hat) +
                               ", V = " + fmt(setup.gap) + ", gap over min g_0 = " +
                               fmt(run_e2.v_hat - g0_e2.v_hat);
    if (const auto tol = g0_e2.certificate.error_bound) {
        out.records.push_back(
            make_check("obs3.e2_unbounded", Relation::greater, run_e2.v_hat, rhs, *tol, detail, run_e2.x_hat));
    } else {
        out.records.push_back(make_inconclusive("obs3.e2_unbounded", Relation::greater, run_e2.v_hat, rhs,
                                                detail + "; uncertified oracle"));
    }
    return out;
}

CheckRecord check_lipschitz_g0(const Ensemble& ensemble, const GroundTruth& truth, std::size_t pair_count,
                               std::uint64_t seed, std::optional<double> declared) {
    if (!declared) declared = ensemble.lipschitz_bound(truth.honest());
    if (!declared) {
        return make_inconclusive("claim2.lipschitz_g0", Relation::less_equal, 0.0, 0.0,
                                 "an honest function has no declared Lipschitz constant");
    }
    const double lipschitz = *declared;
    const auto honest = honest_of(ensemble, truth);
    if (pair_count == 0) throw ContractViolation("check_lipschitz_g0: pair_count must be > 0");
    SeededRng rng(seed);
    std::vector<double> scratch(honest.size());
    double worst = 0.0;
    Point worst_a, worst_b;
    std::size_t done = 0;
    while (done < pair_count) {
        const Point a = rng.point_in(ensemble.domain());
        const Point b = rng.point_in(ensemble.domain());
        const double dist = euclidean_distance(a, b);
        if (dist < 1e-9) continue;
        const double ga = detail::rank_over_unchecked(ensemble, honest, 1, a, scratch);
        const double gb = detail::rank_over_unchecked(ensemble, honest, 1, b, scratch);
        const double ratio = std::abs(ga - gb) / dist;
        if (ratio > worst || worst_a.empty()) {
            worst = ratio;
            worst_a = a;
            worst_b = b;
        }
        ++done;
    }
    return make_check("claim2.lipschitz_g0", Relation::less_equal, worst, lipschitz, 1e-9 * lipschitz,
                      "largest |dg_0|/|dx| over " + std::to_string(pair_count) + " pairs, between " +
                          fmt_point(worst_a) + " and " + fmt_point(worst_b),
                      worst_a);
}

CheckSet check_approx_guarantee(const Ensemble& ensemble, const GroundTruth& truth, const ApproxResult& approx,
                                const ApproxConfig& config, const VerifyOptions& options) {
    CheckSet out;
    const auto honest = honest_of(ensemble, truth);
    const double factor = 1.0 / (1.0 - config.epsilon);

    if (const auto honest_l = ensemble.lipschitz_bound(honest)) {
        out.records.push_back(make_check("approx.lipschitz_valid", Relation::greater_equal, config.lipschitz,
                                         *honest_l, 0.0, "declared L vs largest honest Lipschitz bound"));
    } else {
        out.records.push_back(make_inconclusive("approx.lipschitz_valid", Relation::greater_equal,
                                                config.lipschitz, 0.0, "honest Lipschitz bound unknown"));
    }

    if (approx.terminated_by == Termination::budget) {
        const std::string why = "refinement stopped on the cell budget; no guarantee is claimed";
        out.records.push_back(make_inconclusive("approx.guarantee", Relation::less_equal, 0.0, 0.0, why));
        out.records.push_back(make_inconclusive("approx.count_form", Relation::greater_equal, 0.0, 0.0, why));
        out.records.push_back(make_inconclusive("approx.criterion_postcondition", Relation::equal, 0.0, 0.0, why));
        return out;
    }

    {
        ApproxConfig recheck = config;
        recheck.tau_abs = approx.terminated_by == Termination::floor ? approx.tau_abs : 0.0;
        const auto crit = criterion_satisfied(approx.partition, recheck);
        out.records.push_back(make_check("approx.criterion_postcondition", Relation::equal,
                                         static_cast<double>(crit.violators.size()), 0.0, 0.0,
                                         std::to_string(crit.violators.size()) + " violating cells of " +
                                             std::to_string(approx.partition.size())));
    }

    std::optional<SolveResult> g0_min;
    try {
        g0_min = minimize_rank_r(ensemble, honest, 1, options.resolution, options.solve);
    } catch (const BudgetExceeded& e) {
        out.records.push_back(make_inconclusive("approx.guarantee", Relation::less_equal, 0.0, 0.0, e.what()));
        out.records.push_back(make_inconclusive("approx.count_form", Relation::greater_equal, 0.0, 0.0, e.what()));
        return out;
    }
    const Grid grid = oracle_grid(ensemble, options);
    out.oracles.push_back(oracle_info("min_g0", *g0_min, grid));

    const double bound = factor * g0_min->v_hat;
    const double gf_bar = eval_gf(ensemble, truth, approx.x_bar);
    const double floor_term = approx.terminated_by == Termination::floor ? factor * approx.tau_abs : 0.0;
    const std::string detail = "g_f(x_bar) = " + fmt(gf_bar) + ", min g_0 = " + fmt(g0_min->v_hat) +
                               ", factor 1/(1-eps) = " + fmt(factor) +
                               (floor_term > 0.0 ? ", floor relaxation " + fmt(floor_term) : std::string());
    if (!g0_min->certificate.error_bound) {
        out.records.push_back(make_inconclusive("approx.guarantee", Relation::less_equal, gf_bar, bound,
                                                detail + "; uncertified oracle"));
        out.records.push_back(make_inconclusive("approx.count_form", Relation::greater_equal, 0.0, 0.0,
                                                "uncertified oracle"));
        return out;
    }
    const double tol = factor * *g0_min->certificate.error_bound + floor_term + float_slack(bound);
    out.records.push_back(
        make_check("approx.guarantee", Relation::less_equal, gf_bar, bound, tol, detail, approx.x_bar));

    const auto p = profile(ensemble, approx.x_bar);
    std::size_t bounded = 0;
    for (std::size_t i : honest) {
        if (p.values[i] <= bound + tol) ++bounded;
    }
    out.records.push_back(make_check("approx.count_form", Relation::greater_equal, static_cast<double>(bounded),
                                     static_cast<double>(honest.size() - ensemble.f()), 0.0,
                                     std::to_string(bounded) + " of " + std::to_string(honest.size()) +
                                         " honest values at x_bar are <= " + fmt(bound),
                                     approx.x_bar));
    return out;
}

CheckSet check_approx_derivation(const Ensemble& ensemble, const GroundTruth& truth, const ApproxResult& approx,
                                 const ApproxConfig& config, std::size_t samples_per_cell, std::uint64_t seed) {
    CheckSet out;
    if (approx.terminated_by == Termination::budget || approx.partition.empty()) {
        const std::string why = "refinement stopped on the cell budget";
        out.records.push_back(make_inconclusive("approx.center_bound", Relation::less_equal, 0.0, 0.0, why));
        out.records.push_back(make_inconclusive("approx.cell_lipschitz", Relation::less_equal, 0.0, 0.0, why));
        return out;
    }
    const auto honest = honest_of(ensemble, truth);
    const double L = config.lipschitz;
    const double inv = 1.0 / (1.0 - config.epsilon);
    const double hk = approx.value;
    SeededRng rng(seed);
    std::vector<double> scratch(honest.size());

    double worst_center = -std::numeric_limits<double>::infinity();
    double worst_cell = -std::numeric_limits<double>::infinity();
    std::size_t center_cell = 0;
    std::size_t lip_cell = 0;
    std::size_t floor_cells = 0;
    double scale = std::abs(hk);
    for (const Cell& c : approx.partition) {
        const double slack = L * c.diameter;
        scale = std::max(scale, std::abs(c.h_value) + slack);
        const bool bare = c.h_value - slack >= (1.0 - config.epsilon) * hk;
        if (bare) {
            const double excess = hk - inv * (c.h_value - slack);
            if (excess > worst_center) {
                worst_center = excess;
                center_cell = c.id;
            }
        } else {
            ++floor_cells;
        }

        const Hypercube box(c.lower, c.upper);
        double g0_min = detail::rank_over_unchecked(ensemble, honest, 1, c.center, scratch);
        g0_min = std::min(g0_min, detail::rank_over_unchecked(ensemble, honest, 1, c.lower, scratch));
        g0_min = std::min(g0_min, detail::rank_over_unchecked(ensemble, honest, 1, c.upper, scratch));
        for (std::size_t s = 0; s < samples_per_cell; ++s) {
            const Point x = rng.point_in(box);
            g0_min = std::min(g0_min, detail::rank_over_unchecked(ensemble, honest, 1, x, scratch));
        }
        const double excess = c.h_value - (g0_min + slack);
        if (excess > worst_cell) {
            worst_cell = excess;
            lip_cell = c.id;
        }
    }
    if (worst_center == -std::numeric_limits<double>::infinity()) worst_center = 0.0;
    out.records.push_back(make_check(
        "approx.center_bound", Relation::less_equal, worst_center, 0.0, float_slack(scale),
        "max_j h_f(C_k) - (h_f(C_j) - L d_j)/(1-eps), worst cell " + std::to_string(center_cell + 1) + "; " +
            std::to_string(floor_cells) + " floor-assisted cells excluded",
        approx.partition[center_cell].center));
    out.records.push_back(make_check("approx.cell_lipschitz", Relation::less_equal, worst_cell, 0.0,
                                     float_slack(scale),
                                     "max_j h_f(C_j) - (sampled min g_0 on S_j + L d_j), worst cell " +
                                         std::to_string(lip_cell + 1),
                                     approx.partition[lip_cell].center));
    return out;
}

CheckSet check_partition_tiling(std::span<const Cell> cells, const Hypercube& domain,
                                std::size_t exhaustive_limit) {
    CheckSet out;
    const double vol = partition_volume(cells);
    const double target = domain.volume();
    out.records.push_back(make_check("partition.volume", Relation::equal, vol, target, 1e-9 * target,
                                     std::to_string(cells.size()) + " cells"));

    std::size_t outside = 0;
    for (const auto& c : cells) {
        if (!domain.contains(c.lower) || !domain.contains(c.upper)) ++outside;
    }
    out.records.push_back(make_check("partition.containment", Relation::equal, static_cast<double>(outside), 0.0,
                                     0.0, "cells not contained in X"));

    if (cells.size() > exhaustive_limit) {
        out.records.push_back(make_skipped("partition.disjoint", "too many cells for the pairwise check"));
        return out;
    }
    std::size_t overlaps = 0;
    std::optional<Point> witness;
    for (std::size_t a = 0; a < cells.size(); ++a) {
        for (std::size_t b = a + 1; b < cells.size(); ++b) {
            if (interiors_overlap(cells[a], cells[b])) {
                ++overlaps;
                if (!witness) witness = cells[a].center;
            }
        }
    }
    out.records.push_back(make_check("partition.disjoint", Relation::equal, static_cast<double>(overlaps), 0.0, 0.0,
                                     "pairs of cells with overlapping interiors", witness));
    return out;
}

}  // namespace ftmm
