#pragma once

#include "qgfit/errors.hpp"

#include <vector>

namespace qgfit {

// Estimated beta per delay with standard errors, strictly increasing delays.
struct BetaSeries {
    std::vector<int> delays;
    std::vector<double> beta_hat;
    std::vector<double> stderr_beta;

    void validate() const;
};

struct PowerLawFit {
    double lambda = 0.0;
    double intercept = 0.0; // of ln(beta) vs ln(t)
    double lambda_stderr = 0.0;
};

// Search range for the drift rate b (1/day).
constexpr double kDriftBMin = 1e-6;
constexpr double kDriftBMax = 10.0;

struct DriftDiffusionParams {
    double b = 0.0;   // drift rate, 1/day
    double d = 0.0;   // diffusion coefficient
    double a = 0.0;   // drift offset; fixed 0 for zero-mean standardized returns
    double q = 0.0;
    double tau = 0.0; // 1/(b*(3-q)), days
    bool b_at_lower_bound = false; // fit ran into kDriftBMin (power-law regime)
};

// Pure nonlinear-diffusion curve: beta1 * t^(-2/(3-q)), anchored at t = 1.
double beta_superdiffusion(double t, double q, double beta1);

// Drift+diffusion curve:
//   beta(t)^(-(3-q)/2) = [2(2-q)D/b] * C_q^(q-1) * (1 - exp(-t/tau)).
// Requires b > 0 and 1 < q < 2 (the prefactor changes sign at q = 2).
double beta_drift_diffusion(double t, const DriftDiffusionParams& p);

// Least squares of ln(beta_hat) on ln(t). weighted uses 1/stderr^2 weights.
PowerLawFit fit_power_law(const BetaSeries& s, bool weighted = false);

// Fits b by minimizing the squared log-residuals of beta_hat(t)/beta_hat(1)
// against the drift+diffusion ratio curve (D cancels), then anchors D at
// t = 1. Delays must include t = 1; at least 4 delays.
DriftDiffusionParams fit_drift_params(const BetaSeries& s, double q);

} // namespace qgfit
