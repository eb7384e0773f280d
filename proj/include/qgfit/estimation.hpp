#pragma once

#include "qgfit/qgaussian.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace qgfit {

// Standardized return samples. Estimators require at least kMinSamples
// values; below that the asymptotic error theory is meaningless.
using SampleSet = std::vector<double>;

constexpr std::size_t kMinSamples = 30;

// Admissible entropic-index range for joint estimation.
constexpr double kQLow = 1.1;
constexpr double kQHigh = 1.66;

enum class Boundary { none, q_low, q_high };

struct EstimationResult {
    QGaussianParams params;
    double stderr_q = 0.0;     // 0 when q was not estimated
    double stderr_beta = 0.0;
    double objective = 0.0;    // log-likelihood at the optimum
    double gradient_norm = 0.0;
    Boundary boundary_hit = Boundary::none;
};

// Joint MLE of (q, beta). The two-parameter problem reduces to a scalar
// root find in kappa; alpha follows from the second stationarity condition
// and (q, beta) from alpha = 1/(q-1), beta = kappa*alpha. q is clamped to
// [kQLow, kQHigh] with boundary_hit set when the root lies outside.
EstimationResult estimate_q_beta(const SampleSet& s);

// beta MLE with the shape held fixed. Accepts q in the Gaussian limit band
// up to kQHigh; in the Gaussian limit 1/beta = 2*mean(w^2) in closed form.
EstimationResult estimate_beta_fixed_q(const SampleSet& s, double q);

// Separate fixed-q scale fits for the w <= 0 and w >= 0 branches.
// The likelihood depends on w^2 only, so half-samples are valid.
std::pair<EstimationResult, EstimationResult>
estimate_branches(const SampleSet& s, double q);

namespace detail {
// Root of 1/(2*kappa) = alpha * mean(w2/(1 + kappa*w2)) at fixed alpha,
// on precomputed squared samples. Shared with the fisher-consistency tests.
double kappa_for_alpha(const std::vector<double>& w2, double alpha);
}

} // namespace qgfit
