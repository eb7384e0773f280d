// qgfit: q-Gaussian return analysis toolkit.
//
// Exit codes: 0 success, 2 configuration error, 3 input data error,
// 4 numerical failure.

#include "qgfit/analysis.hpp"
#include "qgfit/diffusion.hpp"
#include "qgfit/estimation.hpp"
#include "qgfit/gof.hpp"
#include "qgfit/sampling.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

namespace {

using qgfit::AnalysisConfig;
using ojson = nlohmann::ordered_json;

double parse_strict_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e || !std::isfinite(v))
        throw qgfit::ConfigError(what + ": bad number '" + s + "'");
    return v;
}

// "estimate" or "fixed:<value>".
void parse_q_mode(const std::string& s, bool& estimate, double& q_fixed) {
    if (s == "estimate") {
        estimate = true;
        return;
    }
    if (s.rfind("fixed:", 0) == 0) {
        estimate = false;
        q_fixed = parse_strict_double(s.substr(6), "--q");
        return;
    }
    throw qgfit::ConfigError("--q expects 'estimate' or 'fixed:<value>', got '" +
                             s + "'");
}

// "a..b" inclusive integer range.
std::vector<int> parse_delay_range(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos)
        throw qgfit::ConfigError("--delays expects 'first..last', got '" + s + "'");
    auto to_int = [&](const std::string& part) {
        int v = 0;
        const char* b = part.data();
        const char* e = b + part.size();
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc{} || p != e)
            throw qgfit::ConfigError("--delays: bad integer '" + part + "'");
        return v;
    };
    int a = to_int(s.substr(0, dots));
    int b = to_int(s.substr(dots + 2));
    if (a < 1 || b < a)
        throw qgfit::ConfigError("--delays: need 1 <= first <= last");
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(b - a + 1));
    for (int t = a; t <= b; ++t) out.push_back(t);
    return out;
}

const char* boundary_str(qgfit::Boundary b) {
    switch (b) {
        case qgfit::Boundary::q_low: return "q_low";
        case qgfit::Boundary::q_high: return "q_high";
        default: return "none";
    }
}

ojson estimation_json(const qgfit::EstimationResult& r, std::size_t n) {
    ojson j;
    j["q"] = r.params.q;
    j["beta"] = r.params.beta;
    j["stderr_q"] = r.stderr_q;
    j["stderr_beta"] = r.stderr_beta;
    j["log_likelihood"] = r.objective;
    j["gradient_norm"] = r.gradient_norm;
    j["boundary"] = boundary_str(r.boundary_hit);
    j["n"] = n;
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"q-Gaussian analysis of financial return distributions"};
    app.require_subcommand(1);

    // --- analyze -----------------------------------------------------------
    auto* an = app.add_subcommand(
        "analyze", "Full pipeline: prices -> standardized returns -> q and "
                   "beta(t) fits -> goodness of fit -> diffusion-law fits");
    std::string an_input, an_cpi, an_region, an_delays, an_q = "estimate";
    std::string an_out = ".";
    double an_gamma = 0.05;
    std::uint64_t an_seed = 1;
    std::size_t an_syn = 1;
    bool an_branches = false, an_weighted = false, an_restd = false,
         an_nonoverlap = false;
    an->add_option("--input", an_input, "price CSV (date,close)")->required();
    an->add_option("--cpi", an_cpi, "CPI CSV (month,index); deflate prices");
    an->add_option("--region", an_region,
                   "preset name or YYYY-MM-DD:YYYY-MM-DD date slice");
    an->add_option("--delays", an_delays, "delay range first..last (default 1..60)");
    an->add_option("--q", an_q, "'estimate' or 'fixed:<value>'");
    an->add_option("--gamma", an_gamma, "KS significance level (default 0.05)");
    an->add_option("--seed", an_seed, "base seed for synthetic samples");
    an->add_option("--syn-factor", an_syn,
                   "synthetic sample size multiplier (default 1)");
    an->add_flag("--branches", an_branches, "fit the two sign branches separately");
    an->add_flag("--weighted", an_weighted, "weight the power-law fit by 1/stderr^2");
    an->add_flag("--restandardize-synthetic", an_restd,
                 "moment-match synthetic samples before the tests");
    an->add_flag("--non-overlapping", an_nonoverlap,
                 "advance return windows by the delay instead of one day");
    an->add_option("--out", an_out, "output directory (default .)");

    // --- fit ---------------------------------------------------------------
    auto* ft = app.add_subcommand(
        "fit", "Maximum-likelihood (q, beta) from a sample file (one value "
               "per line)");
    std::string ft_input, ft_q = "estimate";
    ft->add_option("--input", ft_input, "sample file")->required();
    ft->add_option("--q", ft_q, "'estimate' or 'fixed:<value>'");

    // --- gof ---------------------------------------------------------------
    auto* gf = app.add_subcommand(
        "gof", "Kolmogorov-Smirnov and closeness tests of a sample against a "
               "given q-Gaussian");
    std::string gf_input;
    double gf_q = 1.5, gf_beta = 1.0, gf_mean = 0.0, gf_gamma = 0.05;
    std::uint64_t gf_seed = 1;
    std::size_t gf_syn = 1;
    bool gf_restd = false;
    gf->add_option("--input", gf_input, "sample file")->required();
    gf->add_option("--q", gf_q, "model q")->required();
    gf->add_option("--beta", gf_beta, "model beta")->required();
    gf->add_option("--mean", gf_mean, "model mean (default 0)");
    gf->add_option("--gamma", gf_gamma, "KS significance level (default 0.05)");
    gf->add_option("--seed", gf_seed, "seed for the synthetic sample");
    gf->add_option("--syn-factor", gf_syn, "synthetic size multiplier");
    gf->add_flag("--restandardize-synthetic", gf_restd,
                 "moment-match the synthetic sample");

    // --- diffusion ---------------------------------------------------------
    auto* df = app.add_subcommand(
        "diffusion", "Power-law and drift+diffusion fits to a beta(t) series "
                     "(CSV delay,beta_hat,stderr)");
    std::string df_input, df_out;
    double df_q = 1.5;
    bool df_weighted = false;
    df->add_option("--input", df_input, "beta series CSV")->required();
    df->add_option("--q", df_q, "entropic index of the series")->required();
    df->add_flag("--weighted", df_weighted, "weight the power-law fit");
    df->add_option("--out", df_out,
                   "also write a per-delay CSV with the fitted model curves");

    // --- sample ------------------------------------------------------------
    auto* sm = app.add_subcommand("sample",
                                  "Draw q-Gaussian deviates (one per line)");
    double sm_q = 1.5, sm_beta = 1.0, sm_mean = 0.0;
    std::size_t sm_n = 0;
    std::uint64_t sm_seed = 1;
    std::string sm_out;
    sm->add_option("--q", sm_q, "entropic index")->required();
    sm->add_option("--beta", sm_beta, "scale parameter (default 1)");
    sm->add_option("--mean", sm_mean, "location (default 0)");
    sm->add_option("--n", sm_n, "number of deviates")->required();
    sm->add_option("--seed", sm_seed, "stream seed (default 1)");
    sm->add_option("--out", sm_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e); // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (an->parsed()) {
        AnalysisConfig cfg;
        cfg.input = an_input;
        cfg.cpi = an_cpi;
        cfg.region = an_region;
        if (!an_delays.empty()) cfg.delays = parse_delay_range(an_delays);
        parse_q_mode(an_q, cfg.q_estimate, cfg.q_fixed);
        cfg.gamma = an_gamma;
        cfg.seed = an_seed;
        cfg.syn_factor = an_syn;
        cfg.out_dir = an_out;
        cfg.branch_mode = an_branches;
        cfg.weighted = an_weighted;
        cfg.restandardize_synthetic = an_restd;
        cfg.overlapping = !an_nonoverlap;

        auto [rep, files] = qgfit::run_and_write(cfg);
        for (const std::string& w : rep.warnings)
            std::cerr << "warning: " << w << '\n';
        std::printf("q_hat       %.6f", rep.q_hat);
        if (rep.q_estimated) std::printf(" +- %.6f", rep.q_stderr);
        std::printf("%s\n", rep.boundary != qgfit::Boundary::none
                                ? " (boundary)"
                                : "");
        std::printf("lambda      %.6f +- %.6f\n", rep.power.lambda,
                    rep.power.lambda_stderr);
        std::printf("drift b     %.6g%s\n", rep.drift.b,
                    rep.drift.b_at_lower_bound ? " (at lower bound)" : "");
        std::printf("diffusion D %.6g\n", rep.drift.d);
        for (const std::string& f : files) std::printf("wrote %s\n", f.c_str());
        return 0;
    }

    if (ft->parsed()) {
        std::vector<double> s = qgfit::load_sample_file(ft_input);
        bool estimate = true;
        double qv = 0.0;
        parse_q_mode(ft_q, estimate, qv);
        qgfit::EstimationResult r = estimate
                                        ? qgfit::estimate_q_beta(s)
                                        : qgfit::estimate_beta_fixed_q(s, qv);
        std::cout << estimation_json(r, s.size()).dump(2) << '\n';
        return 0;
    }

    if (gf->parsed()) {
        std::vector<double> s = qgfit::load_sample_file(gf_input);
        qgfit::QGaussianParams model(gf_q, gf_beta, gf_mean);
        qgfit::SeededStream stream(gf_seed);
        qgfit::GofReport rep =
            qgfit::evaluate_gof(s, model, gf_gamma, stream, gf_syn, gf_restd);
        ojson j;
        j["n1"] = rep.n1;
        j["n2"] = rep.n2;
        j["d_max"] = rep.d_max;
        j["d_crit"] = rep.d_crit;
        j["significance"] = rep.significance;
        j["pass_d"] = rep.pass_d;
        j["p_close"] = rep.p_close;
        j["p_crit"] = qgfit::kPCrit;
        j["pass_p"] = rep.pass_p;
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    if (df->parsed()) {
        qgfit::BetaSeries s = qgfit::load_beta_series(df_input);
        qgfit::PowerLawFit pl = qgfit::fit_power_law(s, df_weighted);
        qgfit::DriftDiffusionParams dd = qgfit::fit_drift_params(s, df_q);
        if (!df_out.empty()) {
            std::FILE* f = std::fopen(df_out.c_str(), "wb");
            if (!f) throw qgfit::ConfigError("cannot write " + df_out);
            std::fputs("delay,beta_hat,stderr,beta_fit_powerlaw,beta_sd,beta_dd\n", f);
            for (std::size_t i = 0; i < s.delays.size(); ++i) {
                const double t = s.delays[i];
                std::fprintf(f, "%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", s.delays[i],
                             s.beta_hat[i], s.stderr_beta[i],
                             std::exp(pl.intercept) * std::pow(t, pl.lambda),
                             qgfit::beta_superdiffusion(t, df_q, s.beta_hat.front()),
                             qgfit::beta_drift_diffusion(t, dd));
            }
            std::fclose(f);
        }
        ojson j;
        ojson jp;
        jp["lambda"] = pl.lambda;
        jp["intercept"] = pl.intercept;
        jp["lambda_stderr"] = pl.lambda_stderr;
        j["power_law"] = jp;
        ojson jd;
        jd["b"] = dd.b;
        jd["d"] = dd.d;
        jd["a"] = dd.a;
        jd["q"] = dd.q;
        jd["tau"] = dd.tau;
        jd["b_at_lower_bound"] = dd.b_at_lower_bound;
        j["drift_diffusion"] = jd;
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    if (sm->parsed()) {
        qgfit::QGaussianParams p(sm_q, sm_beta, sm_mean);
        qgfit::SeededStream stream(sm_seed);
        std::vector<double> draws = qgfit::sample_q_gaussian(p, sm_n, stream);
        std::FILE* f = stdout;
        if (!sm_out.empty()) {
            f = std::fopen(sm_out.c_str(), "wb");
            if (!f) throw qgfit::ConfigError("cannot write " + sm_out);
        }
        for (double x : draws) std::fprintf(f, "%.17g\n", x);
        if (f != stdout) std::fclose(f);
        return 0;
    }

    return 2; // unreachable: require_subcommand(1)
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qgfit::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const qgfit::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const qgfit::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const qgfit::DegenerateError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const qgfit::InsufficientDataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const qgfit::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const qgfit::NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
