#include "ddlab/drawdown.hpp"
#include "ddlab/errors.hpp"
#include "ddlab/kernel_exit.hpp"
#include "ddlab/mc.hpp"
#include "ddlab/model.hpp"
#include "ddlab/snlp_rates.hpp"
#include "ddlab/solver.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ddlab;

PYBIND11_MODULE(_ddlab, m) {
    m.doc() = "Drawdown first-passage laws: local rates, solvers, Monte Carlo";

    py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<unsupported_error>(m, "UnsupportedError", PyExc_ValueError);
    py::register_exception<singular_error>(m, "SingularError", PyExc_ArithmeticError);
    py::register_exception<convergence_error>(m, "ConvergenceError",
                                              PyExc_ArithmeticError);
    py::register_exception<instability_error>(m, "InstabilityError",
                                              PyExc_ArithmeticError);

    py::class_<BrownianLevySpec>(m, "BrownianLevySpec")
        .def(py::init<double, double>(), py::arg("drift") = 0.0,
             py::arg("volatility") = 1.0)
        .def_readwrite("drift", &BrownianLevySpec::drift)
        .def_readwrite("volatility", &BrownianLevySpec::volatility)
        .def("psi", &BrownianLevySpec::psi);

    py::class_<CramerLundbergSpec>(m, "CramerLundbergSpec")
        .def(py::init<double, double, double>(), py::arg("premium") = 1.0,
             py::arg("claim_rate") = 1.0, py::arg("claim_mean") = 1.0)
        .def_readwrite("premium", &CramerLundbergSpec::premium)
        .def_readwrite("claim_rate", &CramerLundbergSpec::claim_rate)
        .def_readwrite("claim_mean", &CramerLundbergSpec::claim_mean)
        .def("psi", &CramerLundbergSpec::psi)
        .def("net_profit", &CramerLundbergSpec::net_profit);

    py::class_<JumpComponent>(m, "JumpComponent")
        .def(py::init([](double w, double r, bool up) {
                 return JumpComponent{w, r, up};
             }),
             py::arg("weight"), py::arg("rate"), py::arg("up"))
        .def_readwrite("weight", &JumpComponent::weight)
        .def_readwrite("rate", &JumpComponent::rate)
        .def_readwrite("up", &JumpComponent::up);

    py::class_<PempSpec>(m, "PempSpec")
        .def(py::init<>())
        .def_static("example_4_1", &PempSpec::example_4_1)
        .def_readwrite("mu", &PempSpec::mu)
        .def_readwrite("lambda_", &PempSpec::lambda)
        .def_readwrite("jump_mix", &PempSpec::jump_mix)
        .def("jump_density", &PempSpec::jump_density);

    py::class_<GenPempSpec>(m, "GenPempSpec")
        .def(py::init<>())
        .def_static("example_4_2", &GenPempSpec::example_4_2)
        .def_readwrite("drift_slope", &GenPempSpec::drift_slope)
        .def_readwrite("volatility", &GenPempSpec::volatility)
        .def_readwrite("jump_rate", &GenPempSpec::jump_rate)
        .def_readwrite("up_jump_rate", &GenPempSpec::up_jump_rate);

    py::enum_<DiffusionFamily>(m, "DiffusionFamily")
        .value("constant", DiffusionFamily::constant)
        .value("ou", DiffusionFamily::ou)
        .value("gbm", DiffusionFamily::gbm);

    py::class_<DiffusionSpec>(m, "DiffusionSpec")
        .def(py::init([](DiffusionFamily f, double dc, double vc) {
                 return DiffusionSpec{f, dc, vc};
             }),
             py::arg("family"), py::arg("drift_coef"), py::arg("vol_coef"))
        .def_readwrite("family", &DiffusionSpec::family)
        .def_readwrite("drift_coef", &DiffusionSpec::drift_coef)
        .def_readwrite("vol_coef", &DiffusionSpec::vol_coef)
        .def("mu", &DiffusionSpec::mu)
        .def("sigma", &DiffusionSpec::sigma);

    py::class_<RefractedSpec>(m, "RefractedSpec")
        .def(py::init([](std::variant<BrownianLevySpec, CramerLundbergSpec> base,
                         double refraction, double threshold) {
                 return RefractedSpec{base, refraction, threshold};
             }),
             py::arg("base"), py::arg("refraction"), py::arg("threshold"))
        .def_readwrite("refraction", &RefractedSpec::refraction)
        .def_readwrite("threshold", &RefractedSpec::threshold);

    py::class_<DrawdownQuery>(m, "DrawdownQuery")
        .def(py::init([](double q, double s, double delta, double a, double K,
                         double x0) {
                 return DrawdownQuery{q, s, delta, a, K, x0};
             }),
             py::arg("q") = 0.0, py::arg("s") = 0.0, py::arg("delta") = 0.0,
             py::arg("a") = 1.0, py::arg("K") = 0.0, py::arg("x0") = 0.0)
        .def_readwrite("q", &DrawdownQuery::q)
        .def_readwrite("s", &DrawdownQuery::s)
        .def_readwrite("delta", &DrawdownQuery::delta)
        .def_readwrite("a", &DrawdownQuery::a)
        .def_readwrite("K", &DrawdownQuery::K)
        .def_readwrite("x0", &DrawdownQuery::x0);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("violations", &ValidationReport::violations)
        .def("ok", &ValidationReport::ok)
        .def("__repr__", &ValidationReport::to_string);

    m.def("validate", &validate, py::arg("spec"), py::arg("query"));

    py::class_<RateField>(m, "RateField")
        .def("b1", [](const RateField& f, double x) { return f.b1(x); })
        .def("b2_amp",
             [](const RateField& f, double x) {
                 return f.b2_density.empty() ? 0.0 : f.b2_amp(x);
             })
        .def("c", [](const RateField& f, double x, double s) { return f.c(x, s); },
             py::arg("x"), py::arg("s") = 0.0)
        .def_readonly("model", &RateField::model)
        .def_readonly("domain_lo", &RateField::domain_lo);

    m.def("make_rate_field", &make_rate_field, py::arg("model"), py::arg("query"));
    m.def("pemp_rates", &pemp_rates, py::arg("a"));
    m.def("jd_rates", &jd_rates, py::arg("a"));
    m.def(
        "pemp_rates_renewal",
        [](const PempSpec& spec, double a, double x, double s) {
            LocalRates r = pemp_rates_renewal(spec, a, x, s);
            return py::make_tuple(r.b1, r.c);
        },
        py::arg("spec"), py::arg("a"), py::arg("x"), py::arg("s") = 0.0);

    m.def("scale_W", &scale_W, py::arg("spec"), py::arg("q"), py::arg("x"));
    m.def("scale_Z", &scale_Z, py::arg("spec"), py::arg("q"), py::arg("x"));
    m.def(
        "snlp_local_rates",
        [](const LevySpec& spec, double q, double s, double a) {
            LocalRates r = snlp_local_rates(spec, q, s, a);
            return py::make_tuple(r.b1, r.c);
        },
        py::arg("spec"), py::arg("q"), py::arg("s"), py::arg("a"));
    m.def("snlp_joint_lt", &snlp_joint_lt, py::arg("spec"), py::arg("query"));
    m.def(
        "refracted_local_rates",
        [](const RefractedSpec& spec, double q, double x, double a) {
            LocalRates r = refracted_local_rates(spec, q, x, a);
            return py::make_tuple(r.b1, r.c);
        },
        py::arg("spec"), py::arg("q"), py::arg("x"), py::arg("a"));
    m.def(
        "diffusion_rates_q0",
        [](const DiffusionSpec& spec, double x, double a) {
            LocalRates r = diffusion_rates_q0(spec, x, a);
            return py::make_tuple(r.b1, r.c);
        },
        py::arg("spec"), py::arg("x"), py::arg("a"));

    py::enum_<SolveMethod>(m, "SolveMethod")
        .value("backward_rk4", SolveMethod::backward_rk4)
        .value("picard", SolveMethod::picard)
        .value("both", SolveMethod::both);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("grid_step", &SolverConfig::grid_step)
        .def_readwrite("picard_tol", &SolverConfig::picard_tol)
        .def_readwrite("picard_max_iter", &SolverConfig::picard_max_iter)
        .def_readwrite("picard_init", &SolverConfig::picard_init)
        .def_readwrite("method", &SolverConfig::method)
        .def_readwrite("x_min", &SolverConfig::x_min);

    py::class_<HCurve>(m, "HCurve")
        .def_readonly("xs", &HCurve::xs)
        .def_readonly("hs", &HCurve::hs)
        .def("value_at", &HCurve::value_at)
        .def_property_readonly("method",
                               [](const HCurve& h) { return h.meta.method; })
        .def_property_readonly("iterations",
                               [](const HCurve& h) { return h.meta.iterations; })
        .def_property_readonly("contraction",
                               [](const HCurve& h) { return h.meta.contraction; });

    m.def("solve", &ddlab::solve, py::arg("model"), py::arg("query"),
          py::arg("config") = SolverConfig{});
    m.def("solve_backward", &solve_backward, py::arg("rates"), py::arg("query"),
          py::arg("config") = SolverConfig{});
    m.def("solve_picard", &solve_picard, py::arg("rates"), py::arg("query"),
          py::arg("config") = SolverConfig{});
    m.def("solve_spectrally_negative", &solve_spectrally_negative, py::arg("rates"),
          py::arg("query"), py::arg("config") = SolverConfig{});
    m.def("levy_joint_lt", &levy_joint_lt, py::arg("b1"), py::arg("b2_amp"),
          py::arg("b2_lt"), py::arg("c"), py::arg("delta"));
    m.def(
        "check_rate_inequality",
        [](const RateField& rates, const std::vector<double>& grid, double s) {
            auto v = check_rate_inequality(rates, grid, s);
            std::vector<std::pair<double, double>> out;
            out.reserve(v.size());
            for (const auto& e : v) out.emplace_back(e.x, e.margin);
            return out;
        },
        py::arg("rates"), py::arg("grid"), py::arg("s") = 0.0);

    py::class_<MCConfig>(m, "MCConfig")
        .def(py::init<>())
        .def_readwrite("n_paths", &MCConfig::n_paths)
        .def_readwrite("seed", &MCConfig::seed)
        .def_readwrite("dt", &MCConfig::dt)
        .def_readwrite("chunk_size", &MCConfig::chunk_size);

    py::class_<MCEstimate>(m, "MCEstimate")
        .def_readonly("mean", &MCEstimate::mean)
        .def_readonly("std_err", &MCEstimate::std_err)
        .def_readonly("n", &MCEstimate::n)
        .def_readonly("seed", &MCEstimate::seed);

    m.def(
        "estimate",
        [](const ModelSpec& model, const DrawdownQuery& query, const MCConfig& mc,
           const std::string& functional) {
            Functional f = functional == "laplace" ? Functional::laplace()
                                                   : Functional::indicator();
            if (functional != "laplace" && functional != "indicator_M_le_K")
                throw validation_error(
                    "functional must be indicator_M_le_K or laplace");
            return estimate(model, query, mc, f);
        },
        py::arg("model"), py::arg("query"), py::arg("mc") = MCConfig{},
        py::arg("functional") = "indicator_M_le_K");

    py::class_<PathIneqReport>(m, "PathIneqReport")
        .def_readonly("paths", &PathIneqReport::paths)
        .def_readonly("up_violations", &PathIneqReport::up_violations)
        .def_readonly("down1_violations", &PathIneqReport::down1_violations)
        .def_readonly("down2_violations", &PathIneqReport::down2_violations)
        .def("ok", &PathIneqReport::ok);

    m.def("check_path_inequalities", &check_path_inequalities, py::arg("spec"),
          py::arg("x"), py::arg("eps"), py::arg("a"), py::arg("n"), py::arg("seed"),
          py::arg("q") = 0.1, py::arg("s") = 0.1, py::arg("flip_directions") = false);
}
