#include "ftmm/functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ftmm/errors.hpp"

namespace ftmm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite_point(const Point& p, const char* what) {
    if (p.empty()) throw ContractViolation(std::string(what) + ": empty center");
    for (double v : p) {
        if (!std::isfinite(v)) throw ContractViolation(std::string(what) + ": non-finite center");
    }
}

std::size_t common_dimension(const std::vector<CostFunction>& base, const char* what) {
    if (base.empty()) throw ContractViolation(std::string(what) + ": empty base");
    const std::size_t d = base.front().dimension();
    for (const auto& b : base) {
        if (b.dimension() != d) {
            throw ContractViolation(std::string(what) + ": base functions disagree on dimension");
        }
    }
    return d;
}

double squared_distance(std::span<const double> x, const Point& c) {
    if (x.size() != c.size()) throw ContractViolation("evaluate: dimension mismatch");
    double s = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        const double d = x[t] - c[t];
        s += d * d;
    }
    return s;
}

double interpolate(const std::vector<std::pair<double, double>>& bp, double x) {
    if (x <= bp.front().first) return bp.front().second;
    if (x >= bp.back().first) return bp.back().second;
    auto hi = std::upper_bound(bp.begin(), bp.end(), x,
                               [](double v, const auto& p) { return v < p.first; });
    auto lo = hi - 1;
    const double t = (x - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

}  // namespace

CostFunction::CostFunction(Variant v) : node_(std::make_shared<const Variant>(std::move(v))) {}

CostFunction CostFunction::cone(Point center, double slope, double offset) {
    require_finite_point(center, "cone");
    if (!(slope > 0.0) || !std::isfinite(slope)) throw ContractViolation("cone: slope must be > 0");
    if (!(offset >= 0.0) || !std::isfinite(offset)) throw ContractViolation("cone: offset must be >= 0");
    return CostFunction(Cone{std::move(center), slope, offset});
}

CostFunction CostFunction::quadratic(Point center, double scale, double offset) {
    require_finite_point(center, "quadratic");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ContractViolation("quadratic: scale must be > 0");
    if (!(offset >= 0.0) || !std::isfinite(offset)) {
        throw ContractViolation("quadratic: offset must be >= 0");
    }
    return CostFunction(Quadratic{std::move(center), scale, offset});
}

CostFunction CostFunction::piecewise_linear(std::vector<std::pair<double, double>> breakpoints) {
    if (breakpoints.empty()) throw ContractViolation("piecewise_linear: no breakpoints");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        const auto& [x, v] = breakpoints[i];
        if (!std::isfinite(x) || !std::isfinite(v)) {
            throw ContractViolation("piecewise_linear: non-finite breakpoint");
        }
        if (i > 0 && !(breakpoints[i - 1].first < x)) {
            throw ContractViolation("piecewise_linear: breakpoints must be strictly increasing");
        }
    }
    return CostFunction(PiecewiseLinear1D{std::move(breakpoints)});
}

CostFunction CostFunction::envelope_plus(std::vector<CostFunction> base, double delta) {
    common_dimension(base, "envelope_plus");
    if (!std::isfinite(delta)) throw ContractViolation("envelope_plus: non-finite delta");
    return CostFunction(EnvelopePlus{std::move(base), delta});
}

CostFunction CostFunction::envelope_minus(std::vector<CostFunction> base, double delta,
                                          bool floor_at_zero) {
    common_dimension(base, "envelope_minus");
    if (!std::isfinite(delta)) throw ContractViolation("envelope_minus: non-finite delta");
    return CostFunction(EnvelopeMinus{std::move(base), delta, floor_at_zero});
}

CostFunction CostFunction::custom(std::function<double(std::span<const double>)> fn,
                                  std::size_t dimension, std::optional<double> lipschitz,
                                  std::string label) {
    if (!fn) throw ContractViolation("custom: empty callable");
    if (dimension == 0) throw ContractViolation("custom: dimension must be >= 1");
    if (lipschitz && !(*lipschitz >= 0.0 && std::isfinite(*lipschitz))) {
        throw ContractViolation("custom: declared Lipschitz constant must be finite and >= 0");
    }
    return CostFunction(Custom{std::move(fn), dimension, lipschitz, std::move(label)});
}

double CostFunction::operator()(std::span<const double> x) const {
    return std::visit(
        Overloaded{
            [&](const Cone& c) { return c.slope * std::sqrt(squared_distance(x, c.center)) + c.offset; },
            [&](const Quadratic& q) { return q.scale * squared_distance(x, q.center) + q.offset; },
            [&](const PiecewiseLinear1D& p) {
                if (x.size() != 1) throw ContractViolation("piecewise_linear: 1-D only");
                return interpolate(p.breakpoints, x[0]);
            },
            [&](const EnvelopePlus& e) {
                double m = -std::numeric_limits<double>::infinity();
                for (const auto& b : e.base) m = std::max(m, b(x));
                return m + e.delta;
            },
            [&](const EnvelopeMinus& e) {
                double m = std::numeric_limits<double>::infinity();
                for (const auto& b : e.base) m = std::min(m, b(x));
                const double v = m - e.delta;
                return e.floor_at_zero ? std::max(v, 0.0) : v;
            },
            [&](const Custom& c) {
                if (x.size() != c.dimension) throw ContractViolation("custom: dimension mismatch");
                return c.fn(x);
            },
        },
        *node_);
}

std::size_t CostFunction::dimension() const {
    return std::visit(Overloaded{
                          [](const Cone& c) { return c.center.size(); },
                          [](const Quadratic& q) { return q.center.size(); },
                          [](const PiecewiseLinear1D&) { return std::size_t{1}; },
                          [](const EnvelopePlus& e) { return e.base.front().dimension(); },
                          [](const EnvelopeMinus& e) { return e.base.front().dimension(); },
                          [](const Custom& c) { return c.dimension; },
                      },
                      *node_);
}

std::string_view CostFunction::kind() const {
    return std::visit(Overloaded{
                          [](const Cone&) { return std::string_view("cone"); },
                          [](const Quadratic&) { return std::string_view("quadratic"); },
                          [](const PiecewiseLinear1D&) { return std::string_view("piecewise_linear"); },
                          [](const EnvelopePlus&) { return std::string_view("envelope_plus"); },
                          [](const EnvelopeMinus&) { return std::string_view("envelope_minus"); },
                          [](const Custom&) { return std::string_view("custom"); },
                      },
                      *node_);
}

bool CostFunction::serializable() const {
    return std::visit(Overloaded{
                          [](const EnvelopePlus& e) {
                              return std::all_of(e.base.begin(), e.base.end(),
                                                 [](const auto& b) { return b.serializable(); });
                          },
                          [](const EnvelopeMinus& e) {
                              return std::all_of(e.base.begin(), e.base.end(),
                                                 [](const auto& b) { return b.serializable(); });
                          },
                          [](const Custom&) { return false; },
                          [](const auto&) { return true; },
                      },
                      *node_);
}

bool operator==(const CostFunction& a, const CostFunction& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->index() != b.node_->index()) return false;
    using CF = CostFunction;
    return std::visit(
        Overloaded{
            [&](const CF::Cone& x) {
                const auto& y = std::get<CF::Cone>(*b.node_);
                return x.center == y.center && x.slope == y.slope && x.offset == y.offset;
            },
            [&](const CF::Quadratic& x) {
                const auto& y = std::get<CF::Quadratic>(*b.node_);
                return x.center == y.center && x.scale == y.scale && x.offset == y.offset;
            },
            [&](const CF::PiecewiseLinear1D& x) {
                return x.breakpoints == std::get<CF::PiecewiseLinear1D>(*b.node_).breakpoints;
            },
            [&](const CF::EnvelopePlus& x) {
                const auto& y = std::get<CF::EnvelopePlus>(*b.node_);
                return x.delta == y.delta && x.base == y.base;
            },
            [&](const CF::EnvelopeMinus& x) {
                const auto& y = std::get<CF::EnvelopeMinus>(*b.node_);
                return x.delta == y.delta && x.floor_at_zero == y.floor_at_zero && x.base == y.base;
            },
            [&](const CF::Custom&) { return false; },
        },
        *a.node_);
}

double evaluate(const CostFunction& spec, std::span<const double> x) {
    return spec(x);
}

std::optional<double> lipschitz_bound(const CostFunction& spec, const Hypercube& domain) {
    using CF = CostFunction;
    auto envelope = [&](const std::vector<CF>& base) -> std::optional<double> {
        double l = 0.0;
        for (const auto& b : base) {
            const auto lb = lipschitz_bound(b, domain);
            if (!lb) return std::nullopt;
            l = std::max(l, *lb);
        }
        return l;
    };
    return std::visit(
        Overloaded{
            [](const CF::Cone& c) -> std::optional<double> { return c.slope; },
            [&](const CF::Quadratic& q) -> std::optional<double> {
                return 2.0 * q.scale * domain.max_distance_from(q.center);
            },
            [](const CF::PiecewiseLinear1D& p) -> std::optional<double> {
                double l = 0.0;
                for (std::size_t i = 1; i < p.breakpoints.size(); ++i) {
                    const auto& [x0, v0] = p.breakpoints[i - 1];
                    const auto& [x1, v1] = p.breakpoints[i];
                    l = std::max(l, std::abs(v1 - v0) / (x1 - x0));
                }
                return l;
            },
            [&](const CF::EnvelopePlus& e) { return envelope(e.base); },
            [&](const CF::EnvelopeMinus& e) { return envelope(e.base); },
            [](const CF::Custom& c) { return c.lipschitz; },
        },
        spec.variant());
}

double min_lower_bound(const CostFunction& spec, const Hypercube& domain) {
    using CF = CostFunction;
    return std::visit(
        Overloaded{
            [&](const CF::Cone& c) { return c.slope * domain.min_distance_from(c.center) + c.offset; },
            [&](const CF::Quadratic& q) {
                const double r = domain.min_distance_from(q.center);
                return q.scale * r * r + q.offset;
            },
            [&](const CF::PiecewiseLinear1D& p) {
                const double lo = domain.lower()[0];
                const double hi = domain.upper()[0];
                const Point a{lo};
                const Point b{hi};
                double m = std::min(spec(a), spec(b));
                for (const auto& [x, v] : p.breakpoints) {
                    if (x > lo && x < hi) m = std::min(m, v);
                }
                return m;
            },
            [&](const CF::EnvelopePlus& e) {
                double m = -std::numeric_limits<double>::infinity();
                for (const auto& b : e.base) m = std::max(m, min_lower_bound(b, domain));
                return m + e.delta;
            },
            [&](const CF::EnvelopeMinus& e) {
                double m = std::numeric_limits<double>::infinity();
                for (const auto& b : e.base) m = std::min(m, min_lower_bound(b, domain));
                const double v = m - e.delta;
                return e.floor_at_zero ? std::max(v, 0.0) : v;
            },
            [](const CF::Custom&) { return -std::numeric_limits<double>::infinity(); },
        },
        spec.variant());
}

bool structurally_nonnegative(const CostFunction& spec) {
    using CF = CostFunction;
    return std::visit(
        Overloaded{
            [](const CF::Cone&) { return true; },
            [](const CF::Quadratic&) { return true; },
            [](const CF::PiecewiseLinear1D& p) {
                return std::all_of(p.breakpoints.begin(), p.breakpoints.end(),
                                   [](const auto& bp) { return bp.second >= 0.0; });
            },
            [](const CF::EnvelopePlus& e) {
                return e.delta >= 0.0 && std::any_of(e.base.begin(), e.base.end(), structurally_nonnegative);
            },
            [](const CF::EnvelopeMinus& e) {
                return e.floor_at_zero ||
                       (e.delta <= 0.0 && std::all_of(e.base.begin(), e.base.end(), structurally_nonnegative));
            },
            [](const CF::Custom&) { return false; },
        },
        spec.variant());
}

namespace {

void require_margin(double margin, const char* what) {
    if (!(margin > 0.0) || !std::isfinite(margin)) {
        throw ContractViolation(std::string(what) + ": margin must be > 0");
    }
}

std::vector<CostFunction> as_base(std::span<const CostFunction> honest, const char* what) {
    if (honest.empty()) throw ContractViolation(std::string(what) + ": no honest functions");
    return {honest.begin(), honest.end()};
}

// Lower bound on min_x min_i honest_i(x) over the domain. The structural bound
// is exact for the analytic families; a Lipschitz-certified grid sample covers
// Custom functions that declare a constant.
double honest_floor_certificate(std::span<const CostFunction> honest, const Hypercube& domain) {
    double structural = std::numeric_limits<double>::infinity();
    for (const auto& h : honest) structural = std::min(structural, min_lower_bound(h, domain));
    if (std::isfinite(structural)) return structural;

    const auto env = CostFunction::envelope_minus(as_base(honest, "below_all"), 0.0);
    const auto lip = lipschitz_bound(env, domain);
    if (!lip) return structural;

    const std::size_t d = domain.dimension();
    const auto per_axis = static_cast<std::size_t>(
        std::max(2.0, std::floor(std::pow(100000.0, 1.0 / static_cast<double>(d)))));
    std::vector<std::size_t> idx(d, 0);
    Point x(d);
    double sampled = std::numeric_limits<double>::infinity();
    double half_diag_sq = 0.0;
    for (std::size_t t = 0; t < d; ++t) {
        const double step = domain.width(t) / static_cast<double>(per_axis - 1);
        half_diag_sq += 0.25 * step * step;
    }
    while (true) {
        for (std::size_t t = 0; t < d; ++t) {
            x[t] = domain.lower()[t] +
                   domain.width(t) * static_cast<double>(idx[t]) / static_cast<double>(per_axis - 1);
        }
        const double v = env(x);
        if (!std::isfinite(v)) return -std::numeric_limits<double>::infinity();
        sampled = std::min(sampled, v);
        std::size_t t = d;
        while (t > 0) {
            --t;
            if (++idx[t] < per_axis) break;
            idx[t] = 0;
            if (t == 0) return sampled - *lip * std::sqrt(half_diag_sq);
        }
    }
}

}  // namespace

CostFunction make_above_all_adversary(std::span<const CostFunction> honest, double margin) {
    require_margin(margin, "above_all");
    return CostFunction::envelope_plus(as_base(honest, "above_all"), margin);
}

CostFunction make_below_all_adversary(std::span<const CostFunction> honest, double margin) {
    require_margin(margin, "below_all");
    return CostFunction::envelope_minus(as_base(honest, "below_all"), margin, false);
}

CostFunction make_below_all_adversary(std::span<const CostFunction> honest, double margin,
                                      const Hypercube& domain) {
    require_margin(margin, "below_all");
    auto base = as_base(honest, "below_all");
    const double floor = honest_floor_certificate(honest, domain);
    if (!(floor >= margin)) {
        throw ContractViolation("below_all: honest lower envelope (certified >= " +
                                std::to_string(floor) + ") is not >= margin " +
                                std::to_string(margin) + " on the domain");
    }
    return CostFunction::envelope_minus(std::move(base), margin, true);
}

CostFunction make_gap_adversary(std::span<const CostFunction> tail, double gap, double margin) {
    if (!(gap > 0.0) || !std::isfinite(gap)) throw ContractViolation("gap adversary: V must be > 0");
    require_margin(margin, "gap adversary");
    return CostFunction::envelope_plus(as_base(tail, "gap adversary"), gap + margin);
}

}  // namespace ftmm
