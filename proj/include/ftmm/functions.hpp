#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ftmm/hypercube.hpp"

namespace ftmm {

// Immutable, cheaply copyable description of one cost function Q_i.
//
// The analytic families carry closed-form Lipschitz constants on a box, which
// is what lets the grid solvers certify their error. Adversaries are built as
// composites (envelopes) of honest functions so they remain evaluable and
// certifiable. `Custom` wraps an arbitrary callable; it is not serializable
// and is certified only when the caller declares a Lipschitz constant.
class CostFunction {
public:
    // Q(x) = slope * |x - center| + offset
    struct Cone {
        Point center;
        double slope;
        double offset;
    };
    // Q(x) = scale * |x - center|^2 + offset
    struct Quadratic {
        Point center;
        double scale;
        double offset;
    };
    // d = 1 only. Linear interpolation between (x, value) pairs, constant
    // beyond the first and last breakpoint.
    struct PiecewiseLinear1D {
        std::vector<std::pair<double, double>> breakpoints;
    };
    // Q(x) = max_b base_b(x) + delta
    struct EnvelopePlus {
        std::vector<CostFunction> base;
        double delta;
    };
    // Q(x) = min_b base_b(x) - delta, then max(., 0) when floor_at_zero.
    struct EnvelopeMinus {
        std::vector<CostFunction> base;
        double delta;
        bool floor_at_zero;
    };
    struct Custom {
        std::function<double(std::span<const double>)> fn;
        std::size_t dimension;
        std::optional<double> lipschitz;
        std::string label;
    };

    using Variant =
        std::variant<Cone, Quadratic, PiecewiseLinear1D, EnvelopePlus, EnvelopeMinus, Custom>;

    static CostFunction cone(Point center, double slope, double offset = 0.0);
    static CostFunction quadratic(Point center, double scale, double offset = 0.0);
    static CostFunction piecewise_linear(std::vector<std::pair<double, double>> breakpoints);
    static CostFunction envelope_plus(std::vector<CostFunction> base, double delta);
    static CostFunction envelope_minus(std::vector<CostFunction> base, double delta,
                                       bool floor_at_zero = false);
    static CostFunction custom(std::function<double(std::span<const double>)> fn,
                               std::size_t dimension,
                               std::optional<double> lipschitz = std::nullopt,
                               std::string label = "custom");

    double operator()(std::span<const double> x) const;

    const Variant& variant() const noexcept { return *node_; }
    std::size_t dimension() const;
    std::string_view kind() const;
    // False when a Custom node appears anywhere in the tree.
    bool serializable() const;

    // Structural equality. Custom nodes compare by identity.
    friend bool operator==(const CostFunction& a, const CostFunction& b);

private:
    explicit CostFunction(Variant v);
    std::shared_ptr<const Variant> node_;
};

double evaluate(const CostFunction& spec, std::span<const double> x);

// A valid (not necessarily tight) Lipschitz constant on `domain` in the
// Euclidean norm; nullopt when a Custom node has no declared constant.
std::optional<double> lipschitz_bound(const CostFunction& spec, const Hypercube& domain);

// A lower bound on min_{x in domain} Q(x). Exact for cones, quadratics and
// piecewise-linear functions; -inf for undeclared Custom nodes.
double min_lower_bound(const CostFunction& spec, const Hypercube& domain);

// Conservative structural test that Q >= 0 everywhere.
bool structurally_nonnegative(const CostFunction& spec);

// Strictly above every honest function: max(honest) + margin.
CostFunction make_above_all_adversary(std::span<const CostFunction> honest, double margin);

// Strictly below every honest function: min(honest) - margin, unfloored.
CostFunction make_below_all_adversary(std::span<const CostFunction> honest, double margin);

// Non-negative variant floored at 0. Only admissible when the honest lower
// envelope is >= margin on all of `domain`; otherwise the floor could meet an
// honest function and break strict dominance, so construction throws.
CostFunction make_below_all_adversary(std::span<const CostFunction> honest, double margin,
                                      const Hypercube& domain);

// max(tail) + gap + margin: exceeds the tail envelope by strictly more than gap.
CostFunction make_gap_adversary(std::span<const CostFunction> tail, double gap, double margin);

}  // namespace ftmm
