#pragma once

#include "qgfit/data.hpp"
#include "qgfit/diffusion.hpp"
#include "qgfit/estimation.hpp"
#include "qgfit/gof.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qgfit {

std::vector<int> default_delays(); // 1..60

struct AnalysisConfig {
    std::string input;                 // price CSV path
    std::string cpi;                   // CPI CSV path; empty = no deflation
    std::string region;                // "", preset name, or "YYYY-MM-DD:YYYY-MM-DD"
    std::vector<int> delays = default_delays(); // must start at 1
    bool q_estimate = true;
    double q_fixed = 1.5;              // used when q_estimate is false
    double gamma = 0.05;
    std::uint64_t seed = 1;
    std::size_t syn_factor = 1;
    std::string out_dir = ".";
    bool branch_mode = false;
    bool weighted = false;
    bool restandardize_synthetic = false;
    bool overlapping = true;
};

// Throws ConfigError on violations (empty delays included); touches no files.
void validate_config(const AnalysisConfig& cfg);

struct DelayOutcome {
    int t = 0;
    std::size_t n = 0;
    double beta = 0.0;
    double stderr_beta = 0.0;
    GofReport gof;
    // branch_mode only
    std::size_t n_left = 0, n_right = 0;
    double beta_left = 0.0, stderr_left = 0.0;
    double beta_right = 0.0, stderr_right = 0.0;
};

struct AnalysisReport {
    bool q_estimated = true;
    double q_hat = 0.0;
    double q_stderr = 0.0;        // 0 when q was fixed
    Boundary boundary = Boundary::none;
    double sigma1 = 0.0;
    std::size_t n1 = 0;
    std::vector<DelayOutcome> delays;
    PowerLawFit power;
    DriftDiffusionParams drift;
    double tail = 0.0;            // NaN when q_hat has no power-law tail
    bool deflated = false;
    std::string region_label;     // empty when the whole series was used
    std::vector<std::string> warnings;
};

// Full pipeline: load, deflate, slice, panel, delay-1 fit, per-delay scale
// fits + goodness of fit (concurrent across delays), power-law and
// drift+diffusion fits.
AnalysisReport run_analysis(const AnalysisConfig& cfg);

// Writes summary.json, beta.csv, gof.csv, pdf_compare_<t>.csv (a four-delay
// subset) and branches.csv (branch mode) into cfg.out_dir. Needs the return
// panel to bin densities; returns the list of files written.
std::vector<std::string> write_outputs(const AnalysisReport& rep,
                                       const AnalysisConfig& cfg,
                                       const ReturnPanel& panel);

// Convenience wrapper used by the CLI and bindings: run + write.
// Returns the report and the list of files written.
std::pair<AnalysisReport, std::vector<std::string>>
run_and_write(const AnalysisConfig& cfg);

// One real number per line; used by the fit/gof subcommands.
std::vector<double> load_sample_file(const std::string& path);

// CSV "delay,beta_hat,stderr"; used by the diffusion subcommand.
BetaSeries load_beta_series(const std::string& path);

// Internal pipeline stage shared by run_analysis and the report writers.
ReturnPanel panel_from_config(const AnalysisConfig& cfg,
                              std::vector<std::string>* warnings,
                              bool* deflated,
                              std::string* region_label);

} // namespace qgfit
