#include "qgfit/analysis.hpp"
#include "qgfit/diffusion.hpp"
#include "qgfit/estimation.hpp"
#include "qgfit/fisher.hpp"
#include "qgfit/gof.hpp"
#include "qgfit/qgaussian.hpp"
#include "qgfit/sampling.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qgfit;

namespace {

const char* boundary_str(Boundary b) {
    switch (b) {
        case Boundary::q_low: return "q_low";
        case Boundary::q_high: return "q_high";
        default: return "none";
    }
}

py::dict estimation_dict(const EstimationResult& r) {
    py::dict d;
    d["q"] = r.params.q;
    d["beta"] = r.params.beta;
    d["stderr_q"] = r.stderr_q;
    d["stderr_beta"] = r.stderr_beta;
    d["log_likelihood"] = r.objective;
    d["gradient_norm"] = r.gradient_norm;
    d["boundary"] = boundary_str(r.boundary_hit);
    return d;
}

} // namespace

PYBIND11_MODULE(_qgfit, m) {
    m.doc() = "q-Gaussian return-distribution fitting";

    py::register_exception<ConfigError>(m, "QgfitConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "QgfitDomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "QgfitNumericalError",
                                           PyExc_ArithmeticError);

    py::class_<QGaussianParams>(m, "QGaussianParams")
        .def(py::init<double, double, double>(), py::arg("q"), py::arg("beta"),
             py::arg("mean") = 0.0)
        .def_readonly("q", &QGaussianParams::q)
        .def_readonly("beta", &QGaussianParams::beta)
        .def_readonly("mean", &QGaussianParams::mean)
        .def("alpha", &QGaussianParams::alpha)
        .def("kappa", &QGaussianParams::kappa)
        .def("cq", &QGaussianParams::cq)
        .def("zq", &QGaussianParams::zq)
        .def("sigma_q_sq", &QGaussianParams::sigma_q_sq)
        .def("__repr__", [](const QGaussianParams& p) {
            return "QGaussianParams(q=" + std::to_string(p.q) +
                   ", beta=" + std::to_string(p.beta) +
                   ", mean=" + std::to_string(p.mean) + ")";
        });

    m.def("q_log", &q_log, py::arg("x"), py::arg("q"));
    m.def("normalization_cq", &normalization_cq, py::arg("q"));
    m.def(
        "pdf", [](double x, double q, double beta,
                  double mean) { return pdf(x, QGaussianParams(q, beta, mean)); },
        py::arg("x"), py::arg("q"), py::arg("beta"), py::arg("mean") = 0.0);
    m.def(
        "cdf", [](double x, double q, double beta,
                  double mean) { return cdf(x, QGaussianParams(q, beta, mean)); },
        py::arg("x"), py::arg("q"), py::arg("beta"), py::arg("mean") = 0.0);
    m.def(
        "variance",
        [](double q, double beta) { return variance(QGaussianParams(q, beta)); },
        py::arg("q"), py::arg("beta"));
    m.def("tail_index", &tail_index, py::arg("q"));

    m.def(
        "sample",
        [](double q, double beta, std::size_t n, std::uint64_t seed, double mean) {
            QGaussianParams p(q, beta, mean);
            SeededStream st(seed);
            return sample_q_gaussian(p, n, st);
        },
        py::arg("q"), py::arg("beta"), py::arg("n"), py::arg("seed") = 1,
        py::arg("mean") = 0.0, "Deterministic q-Gaussian deviates.");

    m.def(
        "fit",
        [](const std::vector<double>& s) { return estimation_dict(estimate_q_beta(s)); },
        py::arg("samples"), "Joint maximum-likelihood (q, beta).");
    m.def(
        "fit_fixed_q",
        [](const std::vector<double>& s, double q) {
            return estimation_dict(estimate_beta_fixed_q(s, q));
        },
        py::arg("samples"), py::arg("q"), "Scale fit with the shape held fixed.");
    m.def(
        "fit_branches",
        [](const std::vector<double>& s, double q) {
            auto [l, r] = estimate_branches(s, q);
            return py::make_tuple(estimation_dict(l), estimation_dict(r));
        },
        py::arg("samples"), py::arg("q"),
        "Separate scale fits for the negative and positive branches.");

    m.def(
        "fisher_stderr",
        [](double q, double beta, std::size_t n) {
            QGaussianParams p(q, beta);
            auto [sq, sb] = standard_errors_q_beta(p, n, expected_fisher(p));
            return py::make_tuple(sq, sb);
        },
        py::arg("q"), py::arg("beta"), py::arg("n"),
        "Asymptotic standard errors (S_q, S_beta) from the expected information.");

    m.def(
        "gof",
        [](const std::vector<double>& samples, double q, double beta, double gamma,
           std::uint64_t seed, std::size_t syn_factor, bool restandardize,
           double mean) {
            QGaussianParams p(q, beta, mean);
            SeededStream st(seed);
            GofReport r = evaluate_gof(samples, p, gamma, st, syn_factor, restandardize);
            py::dict d;
            d["n1"] = r.n1;
            d["n2"] = r.n2;
            d["d_max"] = r.d_max;
            d["d_crit"] = r.d_crit;
            d["significance"] = r.significance;
            d["pass_d"] = r.pass_d;
            d["p_close"] = r.p_close;
            d["pass_p"] = r.pass_p;
            return d;
        },
        py::arg("samples"), py::arg("q"), py::arg("beta"), py::arg("gamma") = 0.05,
        py::arg("seed") = 1, py::arg("syn_factor") = 1,
        py::arg("restandardize") = false, py::arg("mean") = 0.0,
        "Kolmogorov-Smirnov + closeness tests against a q-Gaussian model.");

    m.def("ks_distance", &ks_distance, py::arg("a"), py::arg("b"));

    m.def(
        "fit_power_law",
        [](const std::vector<int>& delays, const std::vector<double>& beta_hat,
           const std::vector<double>& stderr_beta, bool weighted) {
            BetaSeries s{delays, beta_hat, stderr_beta};
            PowerLawFit f = fit_power_law(s, weighted);
            py::dict d;
            d["lambda"] = f.lambda;
            d["intercept"] = f.intercept;
            d["lambda_stderr"] = f.lambda_stderr;
            return d;
        },
        py::arg("delays"), py::arg("beta_hat"), py::arg("stderr_beta"),
        py::arg("weighted") = false);

    m.def(
        "fit_drift_diffusion",
        [](const std::vector<int>& delays, const std::vector<double>& beta_hat,
           const std::vector<double>& stderr_beta, double q) {
            BetaSeries s{delays, beta_hat, stderr_beta};
            DriftDiffusionParams p = fit_drift_params(s, q);
            py::dict d;
            d["b"] = p.b;
            d["d"] = p.d;
            d["a"] = p.a;
            d["q"] = p.q;
            d["tau"] = p.tau;
            d["b_at_lower_bound"] = p.b_at_lower_bound;
            return d;
        },
        py::arg("delays"), py::arg("beta_hat"), py::arg("stderr_beta"), py::arg("q"));

    m.def("beta_superdiffusion", &beta_superdiffusion, py::arg("t"), py::arg("q"),
          py::arg("beta1"));

    m.def(
        "analyze",
        [](const std::string& input, const std::string& cpi, const std::string& region,
           const std::vector<int>& delays, bool q_estimate, double q_fixed,
           double gamma, std::uint64_t seed, std::size_t syn_factor,
           const std::string& out_dir, bool branches, bool weighted,
           bool restandardize, bool overlapping) {
            AnalysisConfig cfg;
            cfg.input = input;
            cfg.cpi = cpi;
            cfg.region = region;
            if (!delays.empty()) cfg.delays = delays;
            cfg.q_estimate = q_estimate;
            cfg.q_fixed = q_fixed;
            cfg.gamma = gamma;
            cfg.seed = seed;
            cfg.syn_factor = syn_factor;
            cfg.out_dir = out_dir;
            cfg.branch_mode = branches;
            cfg.weighted = weighted;
            cfg.restandardize_synthetic = restandardize;
            cfg.overlapping = overlapping;
            auto [rep, files] = run_and_write(cfg);
            py::dict d;
            d["q_hat"] = rep.q_hat;
            d["q_stderr"] = rep.q_stderr;
            d["boundary"] = boundary_str(rep.boundary);
            d["sigma1"] = rep.sigma1;
            d["n_delay1"] = rep.n1;
            d["lambda"] = rep.power.lambda;
            d["lambda_stderr"] = rep.power.lambda_stderr;
            d["drift_b"] = rep.drift.b;
            d["diffusion_d"] = rep.drift.d;
            d["tau"] = rep.drift.tau;
            d["tail_index"] = rep.tail;
            d["files"] = files;
            d["warnings"] = rep.warnings;
            return d;
        },
        py::arg("input"), py::arg("cpi") = "", py::arg("region") = "",
        py::arg("delays") = std::vector<int>{}, py::arg("q_estimate") = true,
        py::arg("q_fixed") = 1.5, py::arg("gamma") = 0.05, py::arg("seed") = 1,
        py::arg("syn_factor") = 1, py::arg("out_dir") = ".",
        py::arg("branches") = false, py::arg("weighted") = false,
        py::arg("restandardize") = false, py::arg("overlapping") = true,
        "Full price-series pipeline; writes report files and returns a summary.");
}
