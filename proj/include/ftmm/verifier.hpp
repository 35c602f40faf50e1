#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftmm/approx_solver.hpp"
#include "ftmm/ensemble.hpp"
#include "ftmm/exact_solver.hpp"

namespace ftmm {

enum class CheckStatus { pass, fail, inconclusive, skipped };
// How lhs is compared with rhs under the tolerance:
//   greater_equal: lhs >= rhs - tol      greater: lhs > rhs - tol
//   less_equal:    lhs <= rhs + tol      equal:   |lhs - rhs| <= tol
enum class Relation { greater_equal, greater, less_equal, equal };

std::string_view to_string(CheckStatus s);
std::string_view to_string(Relation r);
bool relation_holds(Relation relation, double lhs, double rhs, double tolerance);

struct CheckRecord {
    std::string name;
    CheckStatus status = CheckStatus::skipped;
    Relation relation = Relation::greater_equal;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;  // lhs - rhs
    double tolerance = 0.0;
    std::string detail;
    std::optional<Point> witness;

    bool operator==(const CheckRecord&) const = default;
};

// Status is derived from the numbers, so it can always be recomputed.
CheckRecord make_check(std::string name, Relation relation, double lhs, double rhs,
                       double tolerance, std::string detail = {},
                       std::optional<Point> witness = std::nullopt);
CheckRecord make_inconclusive(std::string name, Relation relation, double lhs, double rhs,
                              std::string detail);
CheckRecord make_skipped(std::string name, std::string detail);

struct OracleInfo {
    std::string name;
    std::vector<std::size_t> resolution;
    std::optional<double> error_bound;
    std::uint64_t evaluations = 0;

    bool operator==(const OracleInfo&) const = default;
};

struct CheckSet {
    std::vector<CheckRecord> records;
    std::vector<OracleInfo> oracles;

    void append(CheckSet other);
};

// Append-only collection of check outcomes for one scenario.
class VerificationReport {
public:
    explicit VerificationReport(std::string scenario_id) : scenario_id_(std::move(scenario_id)) {}

    void add(CheckRecord record) { records_.push_back(std::move(record)); }
    void add(OracleInfo oracle) { oracles_.push_back(std::move(oracle)); }
    void merge(CheckSet set);

    const std::string& scenario_id() const noexcept { return scenario_id_; }
    const std::vector<CheckRecord>& records() const noexcept { return records_; }
    const std::vector<OracleInfo>& oracles() const noexcept { return oracles_; }
    const CheckRecord* find(std::string_view name) const;
    std::size_t count(CheckStatus status) const;
    // True when nothing failed. Inconclusive and skipped records do not count.
    bool all_passed() const { return count(CheckStatus::fail) == 0; }

private:
    std::string scenario_id_;
    std::vector<CheckRecord> records_;
    std::vector<OracleInfo> oracles_;
};

struct VerifyOptions {
    // Oracle grid; empty selects default_resolution.
    std::vector<std::size_t> resolution;
    SolveOptions solve;
};

// min g_0 >= v_hat >= g_f(x_hat) >= min g_f, with grid oracles for the two
// minima. Records: claim1.upper, claim1.middle, claim1.lower.
CheckSet check_claim1(const Ensemble& ensemble, const GroundTruth& truth,
                      const VerifyOptions& options = {});

// At least |H| - f honest values at x_hat are <= v_hat + tolerance.
CheckRecord check_obs1(const Ensemble& ensemble, const GroundTruth& truth,
                       const SolveResult& solve, double tolerance = 0.0);

enum class Dominance { above_all, below_all, none };
std::string_view to_string(Dominance d);

// Classifies the faulty functions against the honest ones on the oracle grid.
// Only exactly f strictly dominating (or dominated) faulty functions count.
Dominance classify_dominance(const Ensemble& ensemble, const GroundTruth& truth,
                             const VerifyOptions& options = {});

// Tightness of the Claim 1 bounds for whichever dominance holds: value
// equality with min g_0 (above) or min g_f (below), and pointwise equality of
// h_f with g_0 or g_f at every oracle grid node. Skipped when neither holds.
CheckSet check_obs2(const Ensemble& ensemble, const GroundTruth& truth,
                    const VerifyOptions& options = {});

// Runs check_obs2 on a pair of scenarios expected to be above-all and
// below-all respectively; a scenario of the wrong kind is reported as skipped.
CheckSet check_obs2_tightness(const Ensemble& above, const GroundTruth& above_truth,
                              const Ensemble& below, const GroundTruth& below_truth,
                              const VerifyOptions& options = {});

struct Obs3Setup {
    // Functions f+1..n; they are honest in execution E2.
    std::vector<CostFunction> tail;
    std::size_t f = 1;
    double gap = 10.0;  // V
    double margin = 0.5;
    Hypercube domain;
    // Rank guaranteed by the estimator; must satisfy 1 <= rank < f + 1.
    std::size_t rank = 1;
};

// Builds the gap construction (functions 1..f exceed the tail envelope by more
// than V), runs the deterministic rank-r estimator in executions E1 and E2 and
// records: obs3.construction, obs3.identical_outputs, obs3.e1_guarantee,
// obs3.e2_unbounded (lhs = v*, rhs = min g_0 in E2 + V).
// Throws ContractViolation when rank >= f + 1.
CheckSet check_obs3_indistinguishability(const Obs3Setup& setup, const VerifyOptions& options = {});

// |g_0(x1) - g_0(x2)| <= L |x1 - x2| over random pairs. lhs is the largest
// observed ratio, rhs is L. Without an explicit L the largest honest
// Lipschitz bound is used (inconclusive if some honest bound is unknown).
CheckRecord check_lipschitz_g0(const Ensemble& ensemble, const GroundTruth& truth, std::size_t pair_count,
                               std::uint64_t seed = 1, std::optional<double> lipschitz = std::nullopt);

// g_f(x_bar) <= min g_0 / (1 - eps) (+ tau / (1 - eps) after floor-assisted
// termination), its count form, validity of the L used, and the criterion
// postcondition on the final partition. Budget-terminated runs are inconclusive.
CheckSet check_approx_guarantee(const Ensemble& ensemble, const GroundTruth& truth,
                                const ApproxResult& approx, const ApproxConfig& config,
                                const VerifyOptions& options = {});

// Per-cell derivation steps for the final partition:
//   h_f(C_k) <= (h_f(C_j) - L d_j) / (1 - eps)
//   h_f(C_j) <= min_{x in S_j} g_0(x) + L d_j   (minimum over sampled points)
CheckSet check_approx_derivation(const Ensemble& ensemble, const GroundTruth& truth,
                                 const ApproxResult& approx, const ApproxConfig& config,
                                 std::size_t samples_per_cell = 4, std::uint64_t seed = 1);

// Volume sum equals |X| within 1e-9 relative, cells lie inside X, and (up to
// `exhaustive_limit` cells) no two cells share interior.
CheckSet check_partition_tiling(std::span<const Cell> cells, const Hypercube& domain,
                                std::size_t exhaustive_limit = 2000);

}  // namespace ftmm
