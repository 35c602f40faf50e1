#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ftmm/approx_solver.hpp"
#include "ftmm/ensemble.hpp"
#include "ftmm/errors.hpp"
#include "ftmm/exact_solver.hpp"
#include "ftmm/functions.hpp"
#include "ftmm/pipeline.hpp"
#include "ftmm/rank.hpp"
#include "ftmm/scenario.hpp"
#include "ftmm/verifier.hpp"

namespace py = pybind11;
using namespace ftmm;

namespace {

std::vector<std::size_t> resolution_or_default(const Ensemble& e, std::optional<std::vector<std::size_t>> r) {
    return r ? *r : default_resolution(e.domain().dimension());
}

VerifyOptions verify_options(std::optional<std::vector<std::size_t>> resolution) {
    VerifyOptions o;
    if (resolution) o.resolution = *resolution;
    return o;
}

void bind_geometry(py::module_& m) {
    py::class_<Hypercube>(m, "Hypercube")
        .def(py::init<Point, Point>(), py::arg("lower"), py::arg("upper"))
        .def_static("cube", &Hypercube::cube, py::arg("dimension"), py::arg("lo"), py::arg("hi"))
        .def_property_readonly("dimension", &Hypercube::dimension)
        .def_property_readonly("lower", &Hypercube::lower)
        .def_property_readonly("upper", &Hypercube::upper)
        .def_property_readonly("center", &Hypercube::center)
        .def_property_readonly("diameter", &Hypercube::diameter)
        .def_property_readonly("volume", &Hypercube::volume)
        .def("contains", [](const Hypercube& h, const Point& x) { return h.contains(x); })
        .def(py::self == py::self)
        .def("__repr__", [](const Hypercube& h) {
            return "Hypercube(" + py::repr(py::cast(h.lower())).cast<std::string>() + ", " +
                   py::repr(py::cast(h.upper())).cast<std::string>() + ")";
        });
}

void bind_functions(py::module_& m) {
    py::class_<CostFunction>(m, "CostFunction")
        .def_static("cone", &CostFunction::cone, py::arg("center"), py::arg("slope"), py::arg("offset") = 0.0)
        .def_static("quadratic", &CostFunction::quadratic, py::arg("center"), py::arg("scale"),
                    py::arg("offset") = 0.0)
        .def_static("piecewise_linear", &CostFunction::piecewise_linear, py::arg("breakpoints"))
        .def_static("envelope_plus", &CostFunction::envelope_plus, py::arg("base"), py::arg("delta"))
        .def_static("envelope_minus", &CostFunction::envelope_minus, py::arg("base"), py::arg("delta"),
                    py::arg("floor_at_zero") = false)
        .def_static(
            "custom",
            [](std::function<double(const Point&)> fn, std::size_t dimension, std::optional<double> lipschitz,
               std::string label) {
                // Copy into a Point so the Python callable sees a list.
                auto wrapped = [fn = std::move(fn)](std::span<const double> x) {
                    py::gil_scoped_acquire gil;
                    return fn(Point(x.begin(), x.end()));
                };
                return CostFunction::custom(std::move(wrapped), dimension, lipschitz, std::move(label));
            },
            py::arg("fn"), py::arg("dimension"), py::arg("lipschitz") = py::none(), py::arg("label") = "custom")
        .def("__call__", [](const CostFunction& q, const Point& x) { return q(x); })
        .def_property_readonly("dimension", &CostFunction::dimension)
        .def_property_readonly("kind", [](const CostFunction& q) { return std::string(q.kind()); })
        .def("lipschitz_bound", [](const CostFunction& q, const Hypercube& X) { return lipschitz_bound(q, X); })
        .def("min_lower_bound", [](const CostFunction& q, const Hypercube& X) { return min_lower_bound(q, X); })
        .def(py::self == py::self);

    m.def("make_above_all_adversary",
          [](const std::vector<CostFunction>& honest, double margin) { return make_above_all_adversary(honest, margin); },
          py::arg("honest"), py::arg("margin"));
    m.def(
        "make_below_all_adversary",
        [](const std::vector<CostFunction>& honest, double margin, std::optional<Hypercube> domain) {
            return domain ? make_below_all_adversary(honest, margin, *domain) : make_below_all_adversary(honest, margin);
        },
        py::arg("honest"), py::arg("margin"), py::arg("domain") = py::none(),
        "With a domain the adversary is floored at zero, which needs the honest minimum to exceed the margin.");
    m.def("make_gap_adversary",
          [](const std::vector<CostFunction>& tail, double gap, double margin) {
              return make_gap_adversary(tail, gap, margin);
          },
          py::arg("tail"), py::arg("gap"), py::arg("margin"));
}

void bind_ensemble(py::module_& m) {
    py::class_<Ensemble>(m, "Ensemble")
        .def(py::init<std::vector<CostFunction>, std::size_t, Hypercube, bool>(), py::arg("specs"), py::arg("f"),
             py::arg("domain"), py::arg("nonnegative") = false)
        .def_property_readonly("n", &Ensemble::n)
        .def_property_readonly("f", &Ensemble::f)
        .def_property_readonly("domain", &Ensemble::domain)
        .def_property_readonly("specs", &Ensemble::specs)
        .def_property_readonly("nonnegative", &Ensemble::nonnegative)
        .def("lipschitz_bound", py::overload_cast<>(&Ensemble::lipschitz_bound, py::const_));

    py::class_<GroundTruth>(m, "GroundTruth")
        .def(py::init<std::size_t, std::size_t, std::vector<std::size_t>>(), py::arg("n"), py::arg("f"),
             py::arg("faulty"), "Faulty positions are 0-based.")
        .def_static("none", &GroundTruth::none, py::arg("n"))
        .def_property_readonly("faulty", &GroundTruth::faulty)
        .def_property_readonly("honest", &GroundTruth::honest);

    m.def("rank_k", [](const std::vector<double>& v, std::size_t k) { return rank_k(v, k); }, py::arg("values"),
          py::arg("k"), "k-th largest value, 1-based k.");
    m.def("rank_k_index", [](const std::vector<double>& v, std::size_t k) { return rank_k_index(v, k); },
          py::arg("values"), py::arg("k"), "0-based index holding rank k; ties go to the smaller index.");
    m.def("eval_hf", [](const Ensemble& e, const Point& x) { return eval_hf(e, x); }, py::arg("ensemble"),
          py::arg("x"));
    m.def("eval_g0", [](const Ensemble& e, const GroundTruth& t, const Point& x) { return eval_g0(e, t, x); },
          py::arg("ensemble"), py::arg("truth"), py::arg("x"));
    m.def("eval_gf", [](const Ensemble& e, const GroundTruth& t, const Point& x) { return eval_gf(e, t, x); },
          py::arg("ensemble"), py::arg("truth"), py::arg("x"));
}

void bind_solvers(py::module_& m) {
    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("x_hat", &SolveResult::x_hat)
        .def_readonly("v_hat", &SolveResult::v_hat)
        .def_readonly("evaluations", &SolveResult::evaluations)
        .def_readonly("grid_index", &SolveResult::grid_index)
        .def_readonly("boundary_touch", &SolveResult::boundary_touch)
        .def_property_readonly("error_bound", [](const SolveResult& r) { return r.certificate.error_bound; })
        .def_property_readonly("grid_step", [](const SolveResult& r) { return r.certificate.grid_step; })
        .def(py::self == py::self);

    m.def(
        "minimize_hf",
        [](const Ensemble& e, std::optional<std::vector<std::size_t>> resolution, std::uint64_t budget,
           unsigned threads) {
            SolveOptions o{budget, threads};
            py::gil_scoped_release release;
            return minimize_hf(e, resolution_or_default(e, resolution), o);
        },
        py::arg("ensemble"), py::arg("resolution") = py::none(), py::arg("budget") = 10'000'000,
        py::arg("threads") = 1);
    m.def(
        "minimize_rank_r",
        [](const Ensemble& e, const std::vector<std::size_t>& subset, std::size_t r,
           std::optional<std::vector<std::size_t>> resolution, std::uint64_t budget, unsigned threads) {
            SolveOptions o{budget, threads};
            py::gil_scoped_release release;
            return minimize_rank_r(e, subset, r, resolution_or_default(e, resolution), o);
        },
        py::arg("ensemble"), py::arg("subset"), py::arg("r"), py::arg("resolution") = py::none(),
        py::arg("budget") = 10'000'000, py::arg("threads") = 1);

    py::class_<ApproxConfig>(m, "ApproxConfig")
        .def(py::init([](double epsilon, double lipschitz, std::size_t max_cells, std::optional<double> tau_abs,
                         unsigned threads) {
                 ApproxConfig c{epsilon, lipschitz, max_cells, tau_abs, threads};
                 c.validate();
                 return c;
             }),
             py::arg("epsilon") = 0.1, py::arg("lipschitz") = 1.0, py::arg("max_cells") = 1'000'000,
             py::arg("tau_abs") = py::none(), py::arg("threads") = 1)
        .def_readwrite("epsilon", &ApproxConfig::epsilon)
        .def_readwrite("lipschitz", &ApproxConfig::lipschitz)
        .def_readwrite("max_cells", &ApproxConfig::max_cells)
        .def_readwrite("tau_abs", &ApproxConfig::tau_abs)
        .def_readwrite("threads", &ApproxConfig::threads);

    py::class_<Cell>(m, "Cell")
        .def_readonly("id", &Cell::id)
        .def_readonly("lower", &Cell::lower)
        .def_readonly("upper", &Cell::upper)
        .def_readonly("center", &Cell::center)
        .def_readonly("diameter", &Cell::diameter)
        .def_readonly("h_value", &Cell::h_value);

    py::class_<ApproxResult>(m, "ApproxResult")
        .def_readonly("x_bar", &ApproxResult::x_bar)
        .def_readonly("value", &ApproxResult::value)
        .def_readonly("k", &ApproxResult::k)
        .def_readonly("cell_count", &ApproxResult::cell_count)
        .def_readonly("rounds", &ApproxResult::rounds)
        .def_readonly("tau_abs", &ApproxResult::tau_abs)
        .def_readonly("partition", &ApproxResult::partition)
        .def_property_readonly("terminated_by",
                               [](const ApproxResult& r) { return std::string(to_string(r.terminated_by)); })
        .def(py::self == py::self);

    m.def(
        "refine",
        [](const Ensemble& e, const ApproxConfig& cfg) {
            py::gil_scoped_release release;
            return refine(e, cfg);
        },
        py::arg("ensemble"), py::arg("config"));
}

void bind_verifier(py::module_& m) {
    py::class_<CheckRecord>(m, "CheckRecord")
        .def_readonly("name", &CheckRecord::name)
        .def_property_readonly("status", [](const CheckRecord& r) { return std::string(to_string(r.status)); })
        .def_property_readonly("relation", [](const CheckRecord& r) { return std::string(to_string(r.relation)); })
        .def_readonly("lhs", &CheckRecord::lhs)
        .def_readonly("rhs", &CheckRecord::rhs)
        .def_readonly("gap", &CheckRecord::gap)
        .def_readonly("tolerance", &CheckRecord::tolerance)
        .def_readonly("detail", &CheckRecord::detail)
        .def_readonly("witness", &CheckRecord::witness)
        .def("__repr__", [](const CheckRecord& r) {
            return "<CheckRecord " + r.name + ": " + std::string(to_string(r.status)) + ">";
        });

    using Res = std::optional<std::vector<std::size_t>>;
    m.def(
        "check_claim1",
        [](const Ensemble& e, const GroundTruth& t, Res resolution) {
            return check_claim1(e, t, verify_options(resolution)).records;
        },
        py::arg("ensemble"), py::arg("truth"), py::arg("resolution") = py::none());
    m.def(
        "check_obs2",
        [](const Ensemble& e, const GroundTruth& t, Res resolution) {
            return check_obs2(e, t, verify_options(resolution)).records;
        },
        py::arg("ensemble"), py::arg("truth"), py::arg("resolution") = py::none());
    m.def(
        "check_obs3",
        [](const std::vector<CostFunction>& tail, std::size_t f, double gap, double margin, const Hypercube& domain,
           std::size_t rank, Res resolution) {
            Obs3Setup s{tail, f, gap, margin, domain, rank};
            return check_obs3_indistinguishability(s, verify_options(resolution)).records;
        },
        py::arg("tail"), py::arg("f"), py::arg("gap"), py::arg("margin"), py::arg("domain"), py::arg("rank") = 1,
        py::arg("resolution") = py::none());
    m.def(
        "check_lipschitz_g0",
        [](const Ensemble& e, const GroundTruth& t, std::size_t pairs, std::uint64_t seed,
           std::optional<double> lipschitz) { return check_lipschitz_g0(e, t, pairs, seed, lipschitz); },
        py::arg("ensemble"), py::arg("truth"), py::arg("pairs") = 10000, py::arg("seed") = 1,
        py::arg("lipschitz") = py::none());
    m.def(
        "check_approx_guarantee",
        [](const Ensemble& e, const GroundTruth& t, const ApproxResult& a, const ApproxConfig& c, Res resolution) {
            return check_approx_guarantee(e, t, a, c, verify_options(resolution)).records;
        },
        py::arg("ensemble"), py::arg("truth"), py::arg("approx"), py::arg("config"),
        py::arg("resolution") = py::none());
}

void bind_scenarios(py::module_& m) {
    m.def("generate_scenario_text", &generate_scenario_text, py::arg("seed"), py::arg("template"));

    m.def(
        "expand_scenario",
        [](const std::string& text) {
            auto [ensemble, truth] = expand(parse_scenario(text));
            return py::make_tuple(std::move(ensemble), std::move(truth));
        },
        py::arg("text"), "Parses a scenario document and returns (Ensemble, GroundTruth).");

    m.def(
        "run_scenario",
        [](const std::string& text, std::optional<std::vector<std::string>> stages,
           std::optional<std::size_t> resolution, std::optional<double> epsilon, std::optional<std::string> sweep,
           bool timestamp) {
            const Scenario s = parse_scenario(text);
            RunOptions o;
            if (stages) {
                std::vector<Stage> v;
                for (const auto& name : *stages) {
                    const auto st = parse_stage(name);
                    if (!st) throw ValidationError("unknown stage '" + name + "'");
                    v.push_back(*st);
                }
                o.stages = v;
            }
            o.resolution = resolution;
            o.epsilon = epsilon;
            if (sweep) o.sweep = parse_sweep(*sweep);
            o.timestamp = timestamp;
            RunOutcome out;
            {
                py::gil_scoped_release release;
                out = run_scenario(s, o);
            }
            py::dict d;
            d["report"] = out.report;
            d["curve_csv"] = out.curve_csv;
            d["exit_code"] = out.exit_code;
            return d;
        },
        py::arg("text"), py::arg("stages") = py::none(), py::arg("resolution") = py::none(),
        py::arg("epsilon") = py::none(), py::arg("sweep") = py::none(), py::arg("timestamp") = false,
        "Runs a scenario document; returns a dict with the JSON report, the curve CSV and the exit code.");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fault-tolerant min-max: rank objectives, grid and partition solvers, bound checks";

    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

    bind_geometry(m);
    bind_functions(m);
    bind_ensemble(m);
    bind_solvers(m);
    bind_verifier(m);
    bind_scenarios(m);
}
