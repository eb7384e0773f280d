#include "qgfit/analysis.hpp"

#include "qgfit/parallel.hpp"
#include "qgfit/sampling.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace qgfit {

namespace {

using ojson = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double parse_double_token(std::string_view tok, std::size_t line) {
    double v = 0.0;
    const char* b = tok.data();
    const char* e = b + tok.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e || !std::isfinite(v))
        throw ParseError("line " + std::to_string(line) + ": bad number '" +
                         std::string(tok) + "'");
    return v;
}

long parse_int_token(std::string_view tok, std::size_t line) {
    long v = 0;
    const char* b = tok.data();
    const char* e = b + tok.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e)
        throw ParseError("line " + std::to_string(line) + ": bad integer '" +
                         std::string(tok) + "'");
    return v;
}

void chomp_cr(std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
}

// Re-throws the in-flight exception with the pipeline stage prepended,
// preserving its type so the CLI exit-code mapping still works.
[[noreturn]] void rethrow_staged_impl(const char* st) {
    auto tag = [&](const Error& e) { return std::string(st) + ": " + e.what(); };
    try {
        throw;
    } catch (const ConfigError& e) {
        throw ConfigError(tag(e));
    } catch (const ParseError& e) {
        throw ParseError(tag(e));
    } catch (const ValidationError& e) {
        throw ValidationError(tag(e));
    } catch (const DegenerateError& e) {
        throw DegenerateError(tag(e));
    } catch (const InsufficientDataError& e) {
        throw InsufficientDataError(tag(e));
    } catch (const DomainError& e) {
        throw DomainError(tag(e));
    } catch (const NumericalError& e) {
        throw NumericalError(tag(e));
    }
}

template <class Fn>
auto staged(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error&) {
        rethrow_staged_impl(name);
    }
}

// "YYYY-MM-DD:YYYY-MM-DD"; bad syntax or reversed bounds is a configuration
// problem, not a data problem.
std::pair<Date, Date> region_bounds(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        Date a, b;
        try {
            a = parse_date(spec.substr(0, colon));
            b = parse_date(spec.substr(colon + 1));
        } catch (const Error& e) {
            throw ConfigError("region '" + spec + "': " + e.what());
        }
        if (!(a < b))
            throw ConfigError("region '" + spec + "': start must precede end");
        return {a, b};
    }
    try {
        return named_region(spec);
    } catch (const Error&) {
        throw ConfigError("unknown region '" + spec +
                          "' (expected a preset name or YYYY-MM-DD:YYYY-MM-DD)");
    }
}

struct PanelStage {
    ReturnPanel panel;
    bool deflated = false;
    std::string span; // effective first:last dates
    std::vector<std::string> warnings;
};

PanelStage build_panel_stage(const AnalysisConfig& cfg) {
    PanelStage st;
    PriceSeries p = staged("load-data", [&] {
        PriceSeries series = load_price_series(cfg.input);
        if (!cfg.cpi.empty()) {
            CpiSeries c = load_cpi_series(cfg.cpi);
            const Date& last = series.dates.back();
            series = cpi_detrend(series, c, YearMonth{last.y, last.m});
            st.deflated = true;
        }
        if (!cfg.region.empty()) {
            auto [start, end] = region_bounds(cfg.region);
            if (start < series.dates.front()) {
                st.warnings.push_back("region start " + start.iso() +
                                      " precedes data, clamped to " +
                                      series.dates.front().iso());
                start = series.dates.front();
            }
            if (end > series.dates.back()) {
                st.warnings.push_back("region end " + end.iso() +
                                      " exceeds data, clamped to " +
                                      series.dates.back().iso());
                end = series.dates.back();
            }
            series = slice_region(series, start, end);
        }
        return series;
    });
    st.span = p.dates.front().iso() + ":" + p.dates.back().iso();
    st.panel =
        staged("return-panel", [&] { return build_return_panel(p, cfg.delays,
                                                               cfg.overlapping); });
    return st;
}

const char* boundary_name(Boundary b) {
    switch (b) {
        case Boundary::q_low: return "q_low";
        case Boundary::q_high: return "q_high";
        default: return "none";
    }
}


AnalysisReport analyze_panel(const ReturnPanel& panel, const AnalysisConfig& cfg) {
    AnalysisReport rep;
    rep.sigma1 = panel.sigma1;
    rep.n1 = panel.omega.front().size();
    rep.q_estimated = cfg.q_estimate;

    EstimationResult joint{QGaussianParams(1.5, 1.0)};
    if (cfg.q_estimate) {
        joint = staged("estimate-q",
                       [&] { return estimate_q_beta(panel.omega.front()); });
        rep.q_hat = joint.params.q;
        rep.q_stderr = joint.stderr_q;
        rep.boundary = joint.boundary_hit;
        if (joint.boundary_hit != Boundary::none)
            rep.warnings.push_back(std::string("entropic index clamped at ") +
                                   boundary_name(joint.boundary_hit));
    } else {
        rep.q_hat = cfg.q_fixed;
        rep.q_stderr = 0.0;
    }

    const std::size_t k = panel.delays.size();
    rep.delays.resize(k);
    staged("delay-fits", [&] {
    parallel_for(k, [&](std::size_t i) {
        DelayOutcome& out = rep.delays[i];
        out.t = panel.delays[i];
        const std::vector<double>& w = panel.omega[i];
        out.n = w.size();
        EstimationResult r = estimate_beta_fixed_q(w, rep.q_hat);
        out.beta = r.params.beta;
        out.stderr_beta = r.stderr_beta;
        SeededStream st = substream(cfg.seed, static_cast<std::uint64_t>(out.t));
        out.gof = evaluate_gof(w, QGaussianParams(rep.q_hat, out.beta), cfg.gamma,
                               st, cfg.syn_factor, cfg.restandardize_synthetic);
        if (cfg.branch_mode) {
            auto [left, right] = estimate_branches(w, rep.q_hat);
            out.n_left = static_cast<std::size_t>(
                std::count_if(w.begin(), w.end(), [](double x) { return x <= 0.0; }));
            out.n_right = static_cast<std::size_t>(
                std::count_if(w.begin(), w.end(), [](double x) { return x >= 0.0; }));
            out.beta_left = left.params.beta;
            out.stderr_left = left.stderr_beta;
            out.beta_right = right.params.beta;
            out.stderr_right = right.stderr_beta;
        }
    });
    });

    // At the base delay the joint fit carries the q uncertainty into the
    // scale error; prefer it over the fixed-shape refit.
    if (cfg.q_estimate) {
        rep.delays.front().beta = joint.params.beta;
        rep.delays.front().stderr_beta = joint.stderr_beta;
    }

    BetaSeries bs;
    bs.delays = panel.delays;
    for (const DelayOutcome& d : rep.delays) {
        bs.beta_hat.push_back(d.beta);
        bs.stderr_beta.push_back(d.stderr_beta);
    }
    staged("diffusion-fits", [&] {
        rep.power = fit_power_law(bs, cfg.weighted);
        rep.drift = fit_drift_params(bs, rep.q_hat);
    });
    rep.tail = rep.q_hat > 1.0 + kGaussianBand
                   ? tail_index(rep.q_hat)
                   : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

struct BinRow {
    double lo, hi, center;
    std::size_t count;
    double dens_emp, dens_q, dens_g;
};

double gauss_cdf(double x, double sd) {
    return 0.5 * std::erfc(-x / (sd * std::sqrt(2.0)));
}

// Symmetric log-spaced bins spanning ~3 decades below max|w|, merged
// center-outward so every bin keeps a model expectation of at least 5.
std::vector<BinRow> pdf_bins(const std::vector<double>& w,
                             const QGaussianParams& model) {
    const std::size_t n = w.size();
    double amax = 0.0, s2 = 0.0, mean = 0.0;
    for (double x : w) {
        amax = std::max(amax, std::abs(x));
        mean += x;
    }
    mean /= static_cast<double>(n);
    for (double x : w) s2 += (x - mean) * (x - mean);
    s2 /= static_cast<double>(n - 1);
    const double sd = std::sqrt(s2);

    const double hi = amax * 1.000001;
    const double lo = hi * 1e-3;
    constexpr int kFine = 25;
    std::vector<double> edge(kFine + 1);
    for (int j = 0; j <= kFine; ++j)
        edge[j] = lo * std::pow(hi / lo, double(j) / kFine);

    auto expected = [&](double a, double b) {
        return static_cast<double>(n) * (cdf(b, model) - cdf(a, model));
    };

    // Central bin, widened until it holds enough model mass.
    int start = 0;
    double c_hi = lo;
    while (expected(-c_hi, c_hi) < 5.0 && start < kFine) {
        ++start;
        c_hi = edge[start];
    }

    // Positive-side bins; the leftover tail folds into the last one.
    std::vector<std::pair<double, double>> pos;
    double a = c_hi;
    for (int j = start + 1; j <= kFine; ++j) {
        if (expected(a, edge[j]) >= 5.0) {
            pos.emplace_back(a, edge[j]);
            a = edge[j];
        }
    }
    if (a < hi) {
        if (!pos.empty())
            pos.back().second = hi;
        else
            c_hi = hi;
    }

    // Ascending edge list: mirrored positive bins, central bin, positive bins.
    std::vector<double> edges;
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) edges.push_back(-it->second);
    edges.push_back(-c_hi);
    edges.push_back(c_hi);
    for (const auto& pr : pos) edges.push_back(pr.second);

    std::vector<double> sorted(w);
    std::sort(sorted.begin(), sorted.end());
    std::vector<BinRow> rows;
    for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
        BinRow r{};
        r.lo = edges[j];
        r.hi = edges[j + 1];
        const bool central = r.lo < 0.0 && r.hi > 0.0;
        r.center = central ? 0.0
                           : (r.lo >= 0.0 ? std::sqrt(r.lo * r.hi)
                                          : -std::sqrt(r.lo * r.hi));
        auto lb = std::lower_bound(sorted.begin(), sorted.end(), r.lo);
        auto ub = j + 2 == edges.size()
                      ? std::upper_bound(sorted.begin(), sorted.end(), r.hi)
                      : std::lower_bound(sorted.begin(), sorted.end(), r.hi);
        r.count = static_cast<std::size_t>(ub - lb);
        const double width = r.hi - r.lo;
        r.dens_emp = static_cast<double>(r.count) / (static_cast<double>(n) * width);
        r.dens_q = (cdf(r.hi, model) - cdf(r.lo, model)) / width;
        r.dens_g = (gauss_cdf(r.hi, sd) - gauss_cdf(r.lo, sd)) / width;
        rows.push_back(r);
    }
    return rows;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + p.string());
    return f;
}

} // namespace

std::vector<int> default_delays() {
    std::vector<int> d(60);
    for (int t = 1; t <= 60; ++t) d[static_cast<std::size_t>(t - 1)] = t;
    return d;
}

void validate_config(const AnalysisConfig& cfg) {
    if (cfg.input.empty()) throw ConfigError("input path is required");
    if (cfg.delays.empty()) throw ConfigError("delay list must not be empty");
    if (cfg.delays.front() != 1)
        throw ConfigError("delay list must start at 1 (base scale)");
    for (std::size_t i = 0; i < cfg.delays.size(); ++i) {
        if (cfg.delays[i] < 1)
            throw ConfigError("delays must be positive");
        if (i > 0 && cfg.delays[i] <= cfg.delays[i - 1])
            throw ConfigError("delays must be strictly increasing");
    }
    if (cfg.delays.size() < 4)
        throw ConfigError("at least 4 delays are required for the scale fits");
    if (!(cfg.gamma > 0.0 && cfg.gamma <= 0.2))
        throw ConfigError("gamma must lie in (0, 0.2]");
    if (cfg.syn_factor < 1) throw ConfigError("syn-factor must be >= 1");
    if (!cfg.q_estimate) {
        if (!(cfg.q_fixed > 1.0 - kGaussianBand && cfg.q_fixed <= kQHigh))
            throw ConfigError("fixed q must lie in [1, " + fmt(kQHigh) + "]");
    }
    if (cfg.out_dir.empty()) throw ConfigError("output directory is required");
    if (!cfg.region.empty()) region_bounds(cfg.region); // syntax check only
}

ReturnPanel panel_from_config(const AnalysisConfig& cfg,
                              std::vector<std::string>* warnings,
                              bool* deflated,
                              std::string* region_label) {
    PanelStage st = build_panel_stage(cfg);
    if (warnings)
        warnings->insert(warnings->end(), st.warnings.begin(), st.warnings.end());
    if (deflated) *deflated = st.deflated;
    if (region_label) *region_label = st.span;
    return st.panel;
}

AnalysisReport run_analysis(const AnalysisConfig& cfg) {
    validate_config(cfg);
    PanelStage st = build_panel_stage(cfg);
    AnalysisReport rep = analyze_panel(st.panel, cfg);
    rep.deflated = st.deflated;
    rep.region_label = st.span;
    rep.warnings.insert(rep.warnings.begin(), st.warnings.begin(), st.warnings.end());
    return rep;
}

std::vector<std::string> write_outputs(const AnalysisReport& rep,
                                       const AnalysisConfig& cfg,
                                       const ReturnPanel& panel) {
    namespace fs = std::filesystem;
    fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());

    std::vector<std::string> written;

    {
        ojson j;
        j["schema_version"] = 1;
        ojson c;
        c["input"] = cfg.input;
        c["cpi"] = cfg.cpi.empty() ? ojson(nullptr) : ojson(cfg.cpi);
        c["region"] = cfg.region.empty() ? ojson(nullptr) : ojson(cfg.region);
        c["delays"] = cfg.delays;
        c["q_mode"] = cfg.q_estimate ? "estimate" : "fixed";
        if (!cfg.q_estimate) c["q_fixed"] = cfg.q_fixed;
        c["gamma"] = cfg.gamma;
        c["seed"] = cfg.seed;
        c["syn_factor"] = cfg.syn_factor;
        c["overlapping"] = cfg.overlapping;
        c["weighted"] = cfg.weighted;
        c["restandardize_synthetic"] = cfg.restandardize_synthetic;
        c["branch_mode"] = cfg.branch_mode;
        j["config"] = c;

        ojson d;
        d["span"] = rep.region_label;
        d["deflated"] = rep.deflated;
        d["n_delay1"] = rep.n1;
        d["sigma1"] = rep.sigma1;
        j["data"] = d;

        ojson q;
        q["estimate"] = rep.q_hat;
        q["stderr"] = rep.q_stderr;
        q["estimated"] = rep.q_estimated;
        q["boundary"] = boundary_name(rep.boundary);
        j["q"] = q;

        ojson pl;
        pl["lambda"] = rep.power.lambda;
        pl["intercept"] = rep.power.intercept;
        pl["lambda_stderr"] = rep.power.lambda_stderr;
        j["power_law"] = pl;

        ojson dd;
        dd["b"] = rep.drift.b;
        dd["d"] = rep.drift.d;
        dd["a"] = rep.drift.a;
        dd["q"] = rep.drift.q;
        dd["tau"] = rep.drift.tau;
        dd["b_at_lower_bound"] = rep.drift.b_at_lower_bound;
        j["drift_diffusion"] = dd;

        j["tail_index"] = std::isfinite(rep.tail) ? ojson(rep.tail) : ojson(nullptr);

        std::size_t pass_d = 0, pass_p = 0;
        for (const DelayOutcome& o : rep.delays) {
            pass_d += o.gof.pass_d;
            pass_p += o.gof.pass_p;
        }
        ojson g;
        g["pass_d_fraction"] =
            static_cast<double>(pass_d) / static_cast<double>(rep.delays.size());
        g["pass_p_fraction"] =
            static_cast<double>(pass_p) / static_cast<double>(rep.delays.size());
        j["gof"] = g;

        j["warnings"] = rep.warnings;

        auto f = open_out(dir / "summary.json");
        f << j.dump(2) << '\n';
        written.push_back((dir / "summary.json").string());
    }

    {
        auto f = open_out(dir / "beta.csv");
        f << "delay,n,beta_hat,stderr,beta_fit_powerlaw,beta_sd,beta_dd\n";
        const double beta1 = rep.delays.front().beta;
        for (const DelayOutcome& o : rep.delays) {
            const double t = o.t;
            const double bp = std::exp(rep.power.intercept) * std::pow(t, rep.power.lambda);
            const double bsd = beta_superdiffusion(t, rep.q_hat, beta1);
            const double bdd = beta_drift_diffusion(t, rep.drift);
            f << o.t << ',' << o.n << ',' << fmt(o.beta) << ',' << fmt(o.stderr_beta)
              << ',' << fmt(bp) << ',' << fmt(bsd) << ',' << fmt(bdd) << '\n';
        }
        written.push_back((dir / "beta.csv").string());
    }

    {
        auto f = open_out(dir / "gof.csv");
        f << "delay,n1,n2,d_max,d_crit,pass_d,p_close,pass_p\n";
        for (const DelayOutcome& o : rep.delays) {
            f << o.t << ',' << o.gof.n1 << ',' << o.gof.n2 << ',' << fmt(o.gof.d_max)
              << ',' << fmt(o.gof.d_crit) << ',' << int(o.gof.pass_d) << ','
              << fmt(o.gof.p_close) << ',' << int(o.gof.pass_p) << '\n';
        }
        written.push_back((dir / "gof.csv").string());
    }

    {
        const std::size_t k = panel.delays.size();
        std::vector<std::size_t> pick{0, (k - 1) / 3, 2 * (k - 1) / 3, k - 1};
        pick.erase(std::unique(pick.begin(), pick.end()), pick.end());
        for (std::size_t i : pick) {
            const int t = panel.delays[i];
            QGaussianParams model(rep.q_hat, rep.delays[i].beta);
            auto rows = pdf_bins(panel.omega[i], model);
            fs::path p = dir / ("pdf_compare_" + std::to_string(t) + ".csv");
            auto f = open_out(p);
            f << "bin_lo,bin_hi,bin_center,count,density_empirical,"
                 "density_qgauss,density_gauss\n";
            for (const BinRow& r : rows)
                f << fmt(r.lo) << ',' << fmt(r.hi) << ',' << fmt(r.center) << ','
                  << r.count << ',' << fmt(r.dens_emp) << ',' << fmt(r.dens_q)
                  << ',' << fmt(r.dens_g) << '\n';
            written.push_back(p.string());
        }
    }

    if (cfg.branch_mode) {
        auto f = open_out(dir / "branches.csv");
        f << "delay,n_left,beta_left,stderr_left,n_right,beta_right,stderr_right\n";
        for (const DelayOutcome& o : rep.delays)
            f << o.t << ',' << o.n_left << ',' << fmt(o.beta_left) << ','
              << fmt(o.stderr_left) << ',' << o.n_right << ',' << fmt(o.beta_right)
              << ',' << fmt(o.stderr_right) << '\n';
        written.push_back((dir / "branches.csv").string());
    }

    return written;
}

std::pair<AnalysisReport, std::vector<std::string>>
run_and_write(const AnalysisConfig& cfg) {
    validate_config(cfg);
    PanelStage st = build_panel_stage(cfg);
    AnalysisReport rep = analyze_panel(st.panel, cfg);
    rep.deflated = st.deflated;
    rep.region_label = st.span;
    rep.warnings.insert(rep.warnings.begin(), st.warnings.begin(), st.warnings.end());
    std::vector<std::string> files = staged(
        "write-outputs", [&] { return write_outputs(rep, cfg, st.panel); });
    return {std::move(rep), std::move(files)};
}

std::vector<double> load_sample_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    std::vector<double> out;
    std::string line;
    std::size_t ln = 0;
    while (std::getline(f, line)) {
        ++ln;
        chomp_cr(line);
        std::size_t a = line.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t");
        out.push_back(parse_double_token(
            std::string_view(line).substr(a, b - a + 1), ln));
    }
    if (out.empty()) throw ValidationError(path + ": no samples");
    return out;
}

BetaSeries load_beta_series(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw ParseError(path + ": empty file");
    chomp_cr(line);
    if (line != "delay,beta_hat,stderr")
        throw ParseError(path + ": expected header 'delay,beta_hat,stderr'");
    BetaSeries s;
    std::size_t ln = 1;
    while (std::getline(f, line)) {
        ++ln;
        chomp_cr(line);
        if (line.empty()) continue;
        std::size_t c1 = line.find(',');
        std::size_t c2 = c1 == std::string::npos ? std::string::npos
                                                 : line.find(',', c1 + 1);
        if (c2 == std::string::npos)
            throw ParseError("line " + std::to_string(ln) +
                             ": expected delay,beta_hat,stderr");
        std::string_view sv(line);
        s.delays.push_back(static_cast<int>(parse_int_token(sv.substr(0, c1), ln)));
        s.beta_hat.push_back(parse_double_token(sv.substr(c1 + 1, c2 - c1 - 1), ln));
        s.stderr_beta.push_back(parse_double_token(sv.substr(c2 + 1), ln));
    }
    s.validate();
    return s;
}

} // namespace qgfit
