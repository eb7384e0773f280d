#pragma once

#include "qgfit/qgaussian.hpp"
#include "qgfit/sampling.hpp"

#include <cstddef>
#include <vector>

namespace qgfit {

// Acceptance floor for the closeness P value.
constexpr double kPCrit = 0.1;

struct GofReport {
    double d_max = 0.0;
    double d_crit = 0.0;
    double significance = 0.0;
    double p_close = 0.0;
    bool pass_d = false;  // d_max <= d_crit
    bool pass_p = false;  // p_close >= kPCrit
    std::size_t n1 = 0;   // empirical sample size
    std::size_t n2 = 0;   // synthetic sample size
};

// Two-sample Kolmogorov-Smirnov sup distance, evaluated at all jump points.
double ks_distance(const std::vector<double>& a, const std::vector<double>& b);

// Threshold coefficient c(gamma) = sqrt(-ln(gamma/2)/2).
double ks_coefficient(double gamma);

// Critical distance c(gamma)*sqrt((n1 + n2)/(n1*n2)).
double ks_critical(std::size_t n1, std::size_t n2, double gamma);

// Fraction of empirical points whose empirical CDF lies at least as close to
// the model CDF as the synthetic CDF does (ties count as closer).
double closeness_p_value(const std::vector<double>& empirical,
                         const std::vector<double>& synthetic,
                         const QGaussianParams& model);

// Full report: draws n2 = syn_factor * n1 synthetic deviates from the model,
// runs both tests. restandardize moment-matches the synthetic sample to the
// empirical one (mean and standard deviation) before testing.
GofReport evaluate_gof(const std::vector<double>& empirical,
                       const QGaussianParams& model, double gamma,
                       SeededStream& stream, std::size_t syn_factor = 1,
                       bool restandardize = false);

} // namespace qgfit
