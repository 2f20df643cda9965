#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qhedge/calculus.hpp"
#include "qhedge/decompose.hpp"
#include "qhedge/errors.hpp"
#include "qhedge/risk.hpp"
#include "qhedge/simulate.hpp"

namespace py = pybind11;
using namespace qhedge;

PYBIND11_MODULE(_qhedge, m) {
    m.doc() = "explicit quadratic hedging for Fourier-representable payoffs";

    // base first: later registrations take precedence, so subclasses map to
    // their own python types and everything else falls back to qhedge.Error
    py::register_exception<Error>(m, "Error");
    py::register_exception<SCViolated>(m, "SCViolated");
    py::register_exception<QuadratureFailure>(m, "QuadratureFailure");
    py::register_exception<TruncationTooTight>(m, "TruncationTooTight");
    py::register_exception<UnsupportedModel>(m, "UnsupportedModel");
    py::register_exception<NegativeVariance>(m, "NegativeVariance");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<Model>(m, "Model")
        .def("tag", &Model::tag)
        .def("psi", &Model::psi, py::arg("t"), py::arg("u"))
        .def("psi_d1", &Model::psi_d1, py::arg("t"), py::arg("u"))
        .def("psi_d2", &Model::psi_d2, py::arg("t"), py::arg("u"))
        .def("is_levy", &Model::is_levy);

    m.def("poisson", &make_poisson, py::arg("lam"));
    m.def("nig", &make_nig, py::arg("theta"), py::arg("beta"), py::arg("delta"),
          py::arg("mu") = 0.0);
    m.def("vg", &make_vg, py::arg("theta"), py::arg("beta"), py::arg("delta"),
          py::arg("mu") = 0.0);
    m.def(
        "brownian",
        [](std::vector<double> gt, std::vector<double> gv, std::vector<double> pt,
           std::vector<double> pv) {
            return make_brownian(PiecewiseLinear(std::move(gt), std::move(gv)),
                                 PiecewiseLinear(std::move(pt), std::move(pv)));
        },
        py::arg("gamma_t"), py::arg("gamma_v"), py::arg("psi_t"), py::arg("psi_v"));

    py::class_<ComplexMeasure>(m, "ComplexMeasure")
        .def("total_variation", &ComplexMeasure::total_variation)
        .def("hermitian", &ComplexMeasure::hermitian);

    m.def(
        "atom_payoff",
        [](std::vector<std::pair<double, cplx>> atoms) {
            ComplexMeasure mu;
            for (auto& [u, w] : atoms) mu.atoms.push_back({u, w});
            return mu;
        },
        py::arg("atoms"), "payoff measure from a list of (u, weight) atoms");
    m.def("self_quanto_put", &self_quanto_put, py::arg("K"),
          py::arg("truncation") = 500.0, py::arg("grid_step") = 0.05);
    m.def("fourier_eval", &fourier_eval, py::arg("mu"), py::arg("x"));

    py::class_<StructureCondition>(m, "StructureCondition")
        .def_readonly("satisfied", &StructureCondition::satisfied)
        .def_readonly("reason", &StructureCondition::reason)
        .def_readonly("K_T", &StructureCondition::K_T)
        .def("alpha", &StructureCondition::alpha, py::arg("t"))
        .def("K", &StructureCondition::K, py::arg("t"));

    m.def("check_sc", &check_sc, py::arg("model"), py::arg("T"));

    py::class_<OperatorContext, std::shared_ptr<OperatorContext>>(m, "OperatorContext")
        .def(py::init<Model, double>(), py::arg("model"), py::arg("T"))
        .def_readonly("T", &OperatorContext::T)
        .def_readonly("sc", &OperatorContext::sc);

    m.def("epsilon",
          [](const OperatorContext& c, double t, double u) { return epsilon(c, t, u); },
          py::arg("ctx"), py::arg("t"), py::arg("u"));
    m.def("delta",
          [](const OperatorContext& c, double t, double u) { return delta_op(c, t, u); },
          py::arg("ctx"), py::arg("t"), py::arg("u"));
    m.def("kernel_e", &kernel_e, py::arg("ctx"), py::arg("mu"), py::arg("t"), py::arg("x"));
    m.def("kernel_d", &kernel_d, py::arg("ctx"), py::arg("mu"), py::arg("t"), py::arg("x"));
    m.def("kernel_h", &kernel_h, py::arg("ctx"), py::arg("mu"), py::arg("t"), py::arg("x"));
    m.def("kernel_k", &kernel_k, py::arg("ctx"), py::arg("mu"), py::arg("t"), py::arg("x"));

    py::class_<KWDecomposition>(m, "KWDecomposition")
        .def_property_readonly("V0", &KWDecomposition::V0)
        .def("V", &KWDecomposition::V, py::arg("t"), py::arg("x"))
        .def("Z", &KWDecomposition::Z, py::arg("t"), py::arg("x"));
    py::class_<FSDecomposition>(m, "FSDecomposition")
        .def_property_readonly("H0", &FSDecomposition::H0)
        .def("H", &FSDecomposition::H, py::arg("t"), py::arg("x"))
        .def("xi", &FSDecomposition::xi, py::arg("t"), py::arg("x"));

    m.def("kw", &kw, py::arg("ctx"), py::arg("mu"));
    m.def("fs", &fs, py::arg("ctx"), py::arg("mu"));

    m.def("gamma_bracket", &gamma_bracket, py::arg("ctx"), py::arg("t"), py::arg("u"),
          py::arg("v"));
    m.def("j0_kernel", &j0_kernel, py::arg("ctx"), py::arg("u"), py::arg("v"));
    m.def(
        "variance_error",
        [](const OperatorContext& ctx, const ComplexMeasure& mu, double trunc,
           double step) {
            RiskOptions opt;
            opt.density_trunc = trunc;
            opt.density_step = step;
            ErrorReport rep = variance_error(ctx, mu, opt);
            return py::make_tuple(rep.j0, rep.imag_residual, rep.kernel_evals);
        },
        py::arg("ctx"), py::arg("mu"), py::arg("density_trunc") = 40.0,
        py::arg("density_step") = 0.2,
        "returns (j0, imag_residual, kernel_evals)");

    m.def(
        "backtest",
        [](const FSDecomposition& dec, const std::string& kind, std::size_t paths,
           std::size_t steps, std::uint64_t seed, double analytic_j0) {
            const auto& ctx = dec.ctx();
            std::vector<double> grid(steps + 1);
            for (std::size_t k = 0; k <= steps; ++k)
                grid[k] = ctx.T * static_cast<double>(k) / static_cast<double>(steps);
            PathBatch b = simulate_paths(ctx.model, grid, paths, seed);
            StrategyKind sk = (kind == "fs-pure") ? StrategyKind::FsPure
                                                  : StrategyKind::VoFeedback;
            BacktestReport rep = backtest(dec, sk, b, analytic_j0, nullptr);
            py::dict d;
            d["n_paths"] = rep.n_paths;
            d["steps"] = rep.steps;
            d["realized_mse"] = rep.realized_mse;
            d["se"] = rep.se;
            d["analytic_j0"] = rep.analytic_j0;
            d["h0_used"] = rep.h0_used;
            d["strategy"] = rep.strategy;
            return d;
        },
        py::arg("dec"), py::arg("strategy") = "vo-feedback", py::arg("paths") = 10000,
        py::arg("steps") = 100, py::arg("seed") = 1, py::arg("analytic_j0") = 0.0);
}
