#include "ftmm/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "ftmm/errors.hpp"
#include "ftmm/numfmt.hpp"
#include "ftmm/random.hpp"

namespace ftmm {

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::exact: return "exact";
        case Stage::approx: return "approx";
        case Stage::verify: return "verify";
    }
    return "unknown";
}

std::optional<Stage> parse_stage(std::string_view name) {
    if (name == "exact") return Stage::exact;
    if (name == "approx") return Stage::approx;
    if (name == "verify") return Stage::verify;
    return std::nullopt;
}

std::string_view to_string(AdversaryDirective::Kind k) {
    using K = AdversaryDirective::Kind;
    switch (k) {
        case K::above_all: return "above_all";
        case K::below_all: return "below_all";
        case K::gap: return "gap";
        case K::explicit_function: return "explicit";
    }
    return "unknown";
}

bool Scenario::has_stage(Stage s) const {
    return std::find(stages.begin(), stages.end(), s) != stages.end();
}

namespace {

using K = AdversaryDirective::Kind;

CostFunction build_adversary(const AdversaryDirective& a, const std::vector<CostFunction>& honest,
                             const Hypercube& domain, bool nonnegative) {
    switch (a.kind) {
        case K::above_all: return make_above_all_adversary(honest, a.margin);
        case K::below_all:
            return nonnegative ? make_below_all_adversary(honest, a.margin, domain)
                               : make_below_all_adversary(honest, a.margin);
        case K::gap: return make_gap_adversary(honest, a.gap, a.margin);
        case K::explicit_function:
            if (!a.function) throw ContractViolation("explicit adversary without a function");
            return *a.function;
    }
    throw ContractViolation("unknown adversary kind");
}

}  // namespace

ExpandedScenario expand(const Scenario& s) {
    const std::size_t n = s.n();
    if (s.adversaries.size() > s.f) {
        throw ContractViolation(std::to_string(s.adversaries.size()) + " adversaries exceed f = " +
                                std::to_string(s.f));
    }
    if (s.honest.empty()) throw ContractViolation("scenario has no honest functions");
    std::vector<std::optional<CostFunction>> slots(n);
    std::vector<std::size_t> faulty;
    for (const auto& a : s.adversaries) {
        if (!a.index) continue;
        if (*a.index < 1 || *a.index > n) {
            throw ContractViolation("adversary index " + std::to_string(*a.index) + " outside 1.." +
                                    std::to_string(n));
        }
        auto& slot = slots[*a.index - 1];
        if (slot) throw ContractViolation("two adversaries share index " + std::to_string(*a.index));
        slot = build_adversary(a, s.honest, s.domain, s.nonnegative);
        faulty.push_back(*a.index - 1);
    }
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i) {
        if (!slots[i]) free.push_back(i);
    }
    const auto unindexed = static_cast<std::size_t>(
        std::count_if(s.adversaries.begin(), s.adversaries.end(), [](const auto& a) { return !a.index; }));
    std::size_t next_adv = free.size() - unindexed;
    for (const auto& a : s.adversaries) {
        if (a.index) continue;
        const std::size_t pos = free[next_adv++];
        slots[pos] = build_adversary(a, s.honest, s.domain, s.nonnegative);
        faulty.push_back(pos);
    }
    std::size_t h = 0;
    std::vector<CostFunction> specs;
    specs.reserve(n);
    for (auto& slot : slots) {
        if (!slot) slot = s.honest[h++];
        specs.push_back(*slot);
    }
    Ensemble ensemble(std::move(specs), s.f, s.domain, s.nonnegative);
    GroundTruth truth(n, s.f, std::move(faulty));
    return {std::move(ensemble), std::move(truth)};
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void fail_at(const YAML::Node& node, const std::string& msg) {
    const auto m = node.Mark();
    if (m.is_null()) throw ValidationError(msg);
    throw ValidationError("line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) +
                              ": " + msg,
                          static_cast<std::size_t>(m.line + 1), static_cast<std::size_t>(m.column + 1));
}

void require_map(const YAML::Node& node, const std::string& what) {
    if (!node.IsMap()) fail_at(node, what + " must be a mapping");
}

void allowed_keys(const YAML::Node& map, std::initializer_list<std::string_view> keys,
                  const std::string& what) {
    for (const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            fail_at(kv.first, "unknown key '" + key + "' in " + what);
        }
    }
}

YAML::Node required(const YAML::Node& map, const char* key, const std::string& what) {
    const YAML::Node v = map[key];
    if (!v.IsDefined() || v.IsNull()) fail_at(map, what + " is missing '" + key + "'");
    return v;
}

double as_real(const YAML::Node& node, const std::string& what) {
    if (!node.IsScalar()) fail_at(node, what + " must be a number");
    double v = 0.0;
    try {
        v = node.as<double>();
    } catch (const YAML::Exception&) {
        fail_at(node, what + " must be a number, got '" + node.Scalar() + "'");
    }
    if (!std::isfinite(v)) fail_at(node, what + " must be finite");
    return v;
}

std::uint64_t as_count(const YAML::Node& node, const std::string& what) {
    if (!node.IsScalar()) fail_at(node, what + " must be a non-negative integer");
    try {
        const auto v = node.as<long long>();
        if (v < 0) fail_at(node, what + " must be a non-negative integer");
        return static_cast<std::uint64_t>(v);
    } catch (const YAML::Exception&) {
        fail_at(node, what + " must be a non-negative integer, got '" + node.Scalar() + "'");
    }
}

bool as_flag(const YAML::Node& node, const std::string& what) {
    try {
        return node.as<bool>();
    } catch (const YAML::Exception&) {
        fail_at(node, what + " must be true or false");
    }
}

std::string as_text(const YAML::Node& node, const std::string& what) {
    if (!node.IsScalar()) fail_at(node, what + " must be a string");
    return node.Scalar();
}

Point as_point(const YAML::Node& node, const std::string& what) {
    if (!node.IsSequence()) fail_at(node, what + " must be a list of numbers");
    Point p;
    for (const auto& v : node) p.push_back(as_real(v, what));
    return p;
}

template <class Fn>
auto anchored(const YAML::Node& node, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ContractViolation& e) {
        fail_at(node, e.what());
    } catch (const EvaluationError& e) {
        fail_at(node, e.what());
    }
}

CostFunction parse_function(const YAML::Node& node, std::size_t dimension);

std::vector<CostFunction> parse_function_list(const YAML::Node& node, std::size_t dimension,
                                              const std::string& what) {
    if (!node.IsSequence()) fail_at(node, what + " must be a list of functions");
    std::vector<CostFunction> out;
    for (const auto& item : node) out.push_back(parse_function(item, dimension));
    return out;
}

CostFunction parse_function(const YAML::Node& node, std::size_t dimension) {
    require_map(node, "function");
    const auto kind = as_text(required(node, "kind", "function"), "kind");
    CostFunction fn = [&] {
        if (kind == "cone" || kind == "quadratic") {
            const char* scale_key = kind == "cone" ? "slope" : "scale";
            allowed_keys(node, {"kind", "center", scale_key, "offset"}, kind);
            const Point c = as_point(required(node, "center", kind), "center");
            const double a = as_real(required(node, scale_key, kind), scale_key);
            const double b = node["offset"] ? as_real(node["offset"], "offset") : 0.0;
            return anchored(node, [&] {
                return kind == "cone" ? CostFunction::cone(c, a, b) : CostFunction::quadratic(c, a, b);
            });
        }
        if (kind == "piecewise_linear") {
            allowed_keys(node, {"kind", "breakpoints"}, kind);
            const auto bp = required(node, "breakpoints", kind);
            if (!bp.IsSequence()) fail_at(bp, "breakpoints must be a list of [x, value] pairs");
            std::vector<std::pair<double, double>> pts;
            for (const auto& p : bp) {
                if (!p.IsSequence() || p.size() != 2) fail_at(p, "breakpoint must be [x, value]");
                pts.emplace_back(as_real(p[0], "breakpoint x"), as_real(p[1], "breakpoint value"));
            }
            return anchored(node, [&] { return CostFunction::piecewise_linear(std::move(pts)); });
        }
        if (kind == "envelope_plus" || kind == "envelope_minus") {
            if (kind == "envelope_plus") {
                allowed_keys(node, {"kind", "base", "delta"}, kind);
            } else {
                allowed_keys(node, {"kind", "base", "delta", "floor_at_zero"}, kind);
            }
            auto base = parse_function_list(required(node, "base", kind), dimension, "base");
            const double delta = as_real(required(node, "delta", kind), "delta");
            const bool floor = node["floor_at_zero"] ? as_flag(node["floor_at_zero"], "floor_at_zero") : false;
            return anchored(node, [&] {
                return kind == "envelope_plus" ? CostFunction::envelope_plus(std::move(base), delta)
                                               : CostFunction::envelope_minus(std::move(base), delta, floor);
            });
        }
        fail_at(node["kind"], "unknown function kind '" + kind + "'");
    }();
    if (fn.dimension() != dimension) {
        fail_at(node, "function has dimension " + std::to_string(fn.dimension()) + ", domain has " +
                          std::to_string(dimension));
    }
    return fn;
}

AdversaryDirective parse_adversary(const YAML::Node& node, std::size_t dimension) {
    require_map(node, "adversary");
    AdversaryDirective a;
    const auto kind = as_text(required(node, "kind", "adversary"), "kind");
    if (kind == "above_all" || kind == "below_all") {
        allowed_keys(node, {"kind", "margin", "index"}, kind);
        a.kind = kind == "above_all" ? K::above_all : K::below_all;
        a.margin = as_real(required(node, "margin", kind), "margin");
    } else if (kind == "gap") {
        allowed_keys(node, {"kind", "V", "margin", "index"}, kind);
        a.kind = K::gap;
        a.gap = as_real(required(node, "V", kind), "V");
        a.margin = as_real(required(node, "margin", kind), "margin");
    } else if (kind == "explicit") {
        allowed_keys(node, {"kind", "function", "index"}, kind);
        a.kind = K::explicit_function;
        a.function = parse_function(required(node, "function", kind), dimension);
    } else {
        fail_at(node["kind"], "unknown adversary kind '" + kind + "'");
    }
    if (node["index"]) a.index = as_count(node["index"], "index");
    return a;
}

std::vector<std::size_t> parse_resolution(const YAML::Node& node) {
    std::vector<std::size_t> out;
    if (node.IsScalar()) {
        out.push_back(as_count(node, "resolution"));
    } else if (node.IsSequence()) {
        for (const auto& v : node) out.push_back(as_count(v, "resolution"));
    } else {
        fail_at(node, "resolution must be an integer or a list of integers");
    }
    for (std::size_t m : out) {
        if (m < 2) fail_at(node, "resolution must be >= 2 points per axis");
    }
    return out;
}

SolverSettings parse_solver(const YAML::Node& node) {
    require_map(node, "solver");
    allowed_keys(node,
                 {"resolution", "epsilon", "lipschitz", "max_cells", "tau_abs", "budget", "threads",
                  "lipschitz_pairs", "obs3_rank"},
                 "solver");
    SolverSettings s;
    if (node["resolution"]) s.resolution = parse_resolution(node["resolution"]);
    if (node["epsilon"]) {
        s.epsilon = as_real(node["epsilon"], "epsilon");
        if (!(s.epsilon > 0.0 && s.epsilon < 1.0)) fail_at(node["epsilon"], "epsilon must lie in (0, 1)");
    }
    if (node["lipschitz"]) {
        s.lipschitz = as_real(node["lipschitz"], "lipschitz");
        if (!(*s.lipschitz > 0.0)) fail_at(node["lipschitz"], "lipschitz must be > 0");
    }
    if (node["max_cells"]) s.max_cells = as_count(node["max_cells"], "max_cells");
    if (node["tau_abs"]) {
        s.tau_abs = as_real(node["tau_abs"], "tau_abs");
        if (*s.tau_abs < 0.0) fail_at(node["tau_abs"], "tau_abs must be >= 0");
    }
    if (node["budget"]) s.budget = as_count(node["budget"], "budget");
    if (node["threads"]) s.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, as_count(node["threads"], "threads")));
    if (node["lipschitz_pairs"]) s.lipschitz_pairs = as_count(node["lipschitz_pairs"], "lipschitz_pairs");
    if (node["obs3_rank"]) s.obs3_rank = as_count(node["obs3_rank"], "obs3_rank");
    return s;
}

OutputSettings parse_output(const YAML::Node& node) {
    require_map(node, "output");
    allowed_keys(node, {"curve_points", "trace"}, "output");
    OutputSettings o;
    if (node["curve_points"]) o.curve_points = as_count(node["curve_points"], "curve_points");
    if (node["trace"]) o.trace = as_flag(node["trace"], "trace");
    return o;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ValidationError("line " + std::to_string(e.mark.line + 1) + ", column " +
                                  std::to_string(e.mark.column + 1) + ": " + e.msg,
                              static_cast<std::size_t>(e.mark.line + 1), static_cast<std::size_t>(e.mark.column + 1));
    }
    if (!root.IsMap()) throw ValidationError("scenario document must be a mapping", 1, 1);
    allowed_keys(root,
                 {"name", "domain", "n", "f", "nonnegative", "honest", "adversaries", "solver", "output", "stages",
                  "seed"},
                 "scenario");

    const std::string name = as_text(required(root, "name", "scenario"), "name");
    const auto dom = required(root, "domain", "scenario");
    require_map(dom, "domain");
    allowed_keys(dom, {"lower", "upper"}, "domain");
    Point lower = as_point(required(dom, "lower", "domain"), "domain.lower");
    Point upper = as_point(required(dom, "upper", "domain"), "domain.upper");
    Hypercube domain = anchored(dom, [&] { return Hypercube(lower, upper); });

    Scenario s{.name = name, .domain = std::move(domain), .honest = {}, .adversaries = {}, .solver = {}, .output = {}};
    const auto f_node = required(root, "f", "scenario");
    s.f = as_count(f_node, "f");
    if (root["nonnegative"]) s.nonnegative = as_flag(root["nonnegative"], "nonnegative");

    const std::size_t d = s.domain.dimension();
    const auto honest_node = required(root, "honest", "scenario");
    s.honest = parse_function_list(honest_node, d, "honest");
    if (s.honest.empty()) fail_at(honest_node, "at least one honest function is required");

    std::vector<YAML::Node> adversary_nodes;
    if (const auto adv = root["adversaries"]; adv && !adv.IsNull()) {
        if (!adv.IsSequence()) fail_at(adv, "adversaries must be a list");
        for (const auto& a : adv) {
            s.adversaries.push_back(parse_adversary(a, d));
            adversary_nodes.push_back(a);
        }
        if (s.adversaries.size() > s.f) {
            fail_at(adv, std::to_string(s.adversaries.size()) + " adversaries exceed the fault budget f = " +
                             std::to_string(s.f));
        }
    }

    if (const auto n_node = root["n"]) {
        const auto declared = as_count(n_node, "n");
        if (declared != s.n()) {
            fail_at(n_node, "n = " + std::to_string(declared) + " but the scenario lists " + std::to_string(s.n()) +
                                " functions");
        }
    }
    if (s.n() < 2 * s.f + 1) {
        fail_at(f_node, "n >= 2f + 1 is required (n = " + std::to_string(s.n()) + ", f = " + std::to_string(s.f) +
                            ")");
    }

    if (root["solver"]) s.solver = parse_solver(root["solver"]);
    if (root["output"]) s.output = parse_output(root["output"]);
    if (const auto st = root["stages"]) {
        if (!st.IsSequence()) fail_at(st, "stages must be a list");
        s.stages.clear();
        for (const auto& v : st) {
            const auto stage = parse_stage(as_text(v, "stage"));
            if (!stage) fail_at(v, "unknown stage '" + v.Scalar() + "' (expected exact, approx, verify)");
            if (!s.has_stage(*stage)) s.stages.push_back(*stage);
        }
    }
    if (root["seed"]) s.seed = as_count(root["seed"], "seed");

    if (s.nonnegative) {
        for (std::size_t i = 0; i < s.honest.size(); ++i) {
            if (!(min_lower_bound(s.honest[i], s.domain) >= 0.0)) {
                fail_at(honest_node[i], "scenario is flagged non-negative but honest function " +
                                            std::to_string(i + 1) + " can be negative on the domain");
            }
        }
    }
    if (s.has_stage(Stage::approx) && !s.nonnegative) {
        fail_at(root, "the approx stage requires 'nonnegative: true'");
    }

    // Expand once here so construction errors point at the adversary.
    for (std::size_t j = 0; j < s.adversaries.size(); ++j) {
        anchored(adversary_nodes[j], [&] { return build_adversary(s.adversaries[j], s.honest, s.domain, s.nonnegative); });
    }
    anchored(root, [&] { return expand(s); });
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what(), e.line(), e.column());
    }
}

// ---------------------------------------------------------------------------
// Emission

namespace {

void emit_real(YAML::Emitter& out, double v) {
    out << format_double(v);
}

void emit_point(YAML::Emitter& out, const Point& p) {
    out << YAML::Flow << YAML::BeginSeq;
    for (double v : p) emit_real(out, v);
    out << YAML::EndSeq;
}

void emit_function(YAML::Emitter& out, const CostFunction& fn) {
    using CF = CostFunction;
    if (!fn.serializable()) throw ContractViolation("custom functions cannot be written to a scenario file");
    out << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(fn.kind());
    const auto& v = fn.variant();
    if (const auto* c = std::get_if<CF::Cone>(&v)) {
        out << YAML::Key << "center" << YAML::Value;
        emit_point(out, c->center);
        out << YAML::Key << "slope" << YAML::Value;
        emit_real(out, c->slope);
        out << YAML::Key << "offset" << YAML::Value;
        emit_real(out, c->offset);
    } else if (const auto* q = std::get_if<CF::Quadratic>(&v)) {
        out << YAML::Key << "center" << YAML::Value;
        emit_point(out, q->center);
        out << YAML::Key << "scale" << YAML::Value;
        emit_real(out, q->scale);
        out << YAML::Key << "offset" << YAML::Value;
        emit_real(out, q->offset);
    } else if (const auto* p = std::get_if<CF::PiecewiseLinear1D>(&v)) {
        out << YAML::Key << "breakpoints" << YAML::Value << YAML::BeginSeq;
        for (const auto& [x, y] : p->breakpoints) emit_point(out, Point{x, y});
        out << YAML::EndSeq;
    } else if (const auto* e = std::get_if<CF::EnvelopePlus>(&v)) {
        out << YAML::Key << "base" << YAML::Value << YAML::BeginSeq;
        for (const auto& b : e->base) emit_function(out, b);
        out << YAML::EndSeq;
        out << YAML::Key << "delta" << YAML::Value;
        emit_real(out, e->delta);
    } else if (const auto* m = std::get_if<CF::EnvelopeMinus>(&v)) {
        out << YAML::Key << "base" << YAML::Value << YAML::BeginSeq;
        for (const auto& b : m->base) emit_function(out, b);
        out << YAML::EndSeq;
        out << YAML::Key << "delta" << YAML::Value;
        emit_real(out, m->delta);
        out << YAML::Key << "floor_at_zero" << YAML::Value << m->floor_at_zero;
    }
    out << YAML::EndMap;
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << s.name;
    out << YAML::Key << "domain" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "lower" << YAML::Value;
    emit_point(out, s.domain.lower());
    out << YAML::Key << "upper" << YAML::Value;
    emit_point(out, s.domain.upper());
    out << YAML::EndMap;
    out << YAML::Key << "n" << YAML::Value << s.n();
    out << YAML::Key << "f" << YAML::Value << s.f;
    out << YAML::Key << "nonnegative" << YAML::Value << s.nonnegative;
    out << YAML::Key << "honest" << YAML::Value << YAML::BeginSeq;
    for (const auto& h : s.honest) emit_function(out, h);
    out << YAML::EndSeq;
    out << YAML::Key << "adversaries" << YAML::Value << YAML::BeginSeq;
    for (const auto& a : s.adversaries) {
        out << YAML::BeginMap;
        out << YAML::Key << "kind" << YAML::Value << std::string(to_string(a.kind));
        if (a.kind == K::gap) {
            out << YAML::Key << "V" << YAML::Value;
            emit_real(out, a.gap);
        }
        if (a.kind == K::explicit_function) {
            out << YAML::Key << "function" << YAML::Value;
            emit_function(out, *a.function);
        } else {
            out << YAML::Key << "margin" << YAML::Value;
            emit_real(out, a.margin);
        }
        if (a.index) out << YAML::Key << "index" << YAML::Value << *a.index;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
    if (!s.solver.resolution.empty()) {
        out << YAML::Key << "resolution" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (std::size_t m : s.solver.resolution) out << m;
        out << YAML::EndSeq;
    }
    out << YAML::Key << "epsilon" << YAML::Value;
    emit_real(out, s.solver.epsilon);
    if (s.solver.lipschitz) {
        out << YAML::Key << "lipschitz" << YAML::Value;
        emit_real(out, *s.solver.lipschitz);
    }
    out << YAML::Key << "max_cells" << YAML::Value << s.solver.max_cells;
    if (s.solver.tau_abs) {
        out << YAML::Key << "tau_abs" << YAML::Value;
        emit_real(out, *s.solver.tau_abs);
    }
    out << YAML::Key << "budget" << YAML::Value << s.solver.budget;
    out << YAML::Key << "threads" << YAML::Value << s.solver.threads;
    out << YAML::Key << "lipschitz_pairs" << YAML::Value << s.solver.lipschitz_pairs;
    out << YAML::Key << "obs3_rank" << YAML::Value << s.solver.obs3_rank;
    out << YAML::EndMap;

    if (s.output != OutputSettings{}) {
        out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "curve_points" << YAML::Value << s.output.curve_points;
        out << YAML::Key << "trace" << YAML::Value << s.output.trace;
        out << YAML::EndMap;
    }
    out << YAML::Key << "stages" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (Stage st : s.stages) out << std::string(to_string(st));
    out << YAML::EndSeq;
    out << YAML::Key << "seed" << YAML::Value << s.seed;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

// ---------------------------------------------------------------------------
// Generation

namespace {

struct TemplateSpec {
    std::string family;
    std::size_t dimension = 1;
    std::optional<std::string> adversary;
};

TemplateSpec parse_template(std::string_view t) {
    TemplateSpec spec;
    std::vector<std::string> parts;
    std::string cur;
    for (char c : t) {
        if (c == '-') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    auto bad = [&] {
        return ValidationError("template '" + std::string(t) +
                                 "' must look like <cones|quadratics|mixed>-<d>d[-<above_all|below_all|gap|random_cone>]");
    };
    if (parts.size() < 2 || parts.size() > 3) throw bad();
    spec.family = parts[0];
    if (spec.family != "cones" && spec.family != "quadratics" && spec.family != "mixed") throw bad();
    const auto& dim = parts[1];
    if (dim.size() < 2 || dim.back() != 'd') throw bad();
    try {
        spec.dimension = std::stoul(dim.substr(0, dim.size() - 1));
    } catch (const std::exception&) {
        throw bad();
    }
    if (spec.dimension < 1 || spec.dimension > 3) throw bad();
    if (parts.size() == 3) {
        const auto& a = parts[2];
        if (a != "above_all" && a != "below_all" && a != "gap" && a != "random_cone") throw bad();
        spec.adversary = a;
    }
    return spec;
}

}  // namespace

Scenario generate_scenario(std::uint64_t seed, std::string_view template_name) {
    const TemplateSpec t = parse_template(template_name);
    SeededRng rng(seed);
    const std::size_t d = t.dimension;
    const Hypercube domain = Hypercube::cube(d, -2.0, 2.0);
    const Hypercube centers = Hypercube::cube(d, -1.5, 1.5);

    const auto f = static_cast<std::size_t>(rng.integer(1, 7));
    const auto n = static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(2 * f + 1), 15));

    Scenario s{.name = std::string(template_name) + "-seed" + std::to_string(seed), .domain = domain, .honest = {}, .adversaries = {}, .solver = {}, .output = {}};
    s.f = f;
    s.nonnegative = true;
    s.seed = seed;
    s.stages = {Stage::exact, Stage::approx, Stage::verify};

    for (std::size_t i = 0; i < n - f; ++i) {
        const bool use_cone = t.family == "cones" || (t.family == "mixed" && rng.uniform01() < 0.5);
        const Point c = rng.point_in(centers);
        if (use_cone) {
            const double a = rng.uniform(0.5, 2.0);
            const double b = rng.uniform(0.5, 2.0);
            s.honest.push_back(CostFunction::cone(c, a, b));
        } else {
            const double a = rng.uniform(0.25, 1.5);
            const double b = rng.uniform(0.5, 2.0);
            s.honest.push_back(CostFunction::quadratic(c, a, b));
        }
    }

    static constexpr const char* kinds[] = {"above_all", "below_all", "gap", "random_cone"};
    const std::string kind = t.adversary ? *t.adversary : kinds[rng.integer(0, 3)];

    // Distinct random positions for the adversaries.
    std::vector<std::size_t> positions(n);
    for (std::size_t i = 0; i < n; ++i) positions[i] = i + 1;
    for (std::size_t i = 0; i < f; ++i) {
        const auto j = static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - 1)));
        std::swap(positions[i], positions[j]);
    }
    for (std::size_t i = 0; i < f; ++i) {
        AdversaryDirective a;
        a.index = positions[i];
        if (kind == "above_all") {
            a.kind = K::above_all;
            a.margin = rng.uniform(0.1, 0.4);
        } else if (kind == "below_all") {
            a.kind = K::below_all;
            a.margin = rng.uniform(0.1, 0.4);
        } else if (kind == "gap") {
            a.kind = K::gap;
            a.gap = rng.uniform(1.0, 20.0);
            a.margin = rng.uniform(0.1, 0.4);
        } else {
            a.kind = K::explicit_function;
            const Point c = rng.point_in(domain);
            const double slope = rng.uniform(0.5, 3.0);
            const double offset = rng.uniform(0.0, 3.0);
            a.function = CostFunction::cone(c, slope, offset);
        }
        s.adversaries.push_back(std::move(a));
    }
    return s;
}

std::string generate_scenario_text(std::uint64_t seed, std::string_view template_name) {
    return serialize_scenario(generate_scenario(seed, template_name));
}

}  // namespace ftmm
