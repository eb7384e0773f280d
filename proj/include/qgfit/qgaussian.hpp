#pragma once

#include "qgfit/errors.hpp"

namespace qgfit {

// Width of the band around q = 1 treated as the exact Gaussian limit.
// Inside it the closed Gaussian forms are used to avoid cancellation in
// (x^(1-q) - 1)/(1 - q).
constexpr double kGaussianBand = 1e-8;

inline bool is_gaussian_limit(double q) {
    return q > 1.0 - kGaussianBand && q < 1.0 + kGaussianBand;
}

// Tsallis q-Gaussian parameter pair (q, beta) plus the mean.
// beta is the generalized inverse mean-square deviation: 1/beta plays the
// role of squared width. alpha = 1/(q-1) and kappa = beta/alpha decouple the
// likelihood equations; they are derived, never stored.
struct QGaussianParams {
    double q;
    double beta;
    double mean = 0.0;

    QGaussianParams(double q_, double beta_, double mean_ = 0.0);

    bool gaussian_limit() const { return is_gaussian_limit(q); }
    double alpha() const;   // 1/(q-1); requires q > 1 + band
    double kappa() const;   // beta/alpha = beta*(q-1)
    double cq() const;      // normalization factor independent of beta
    double zq() const;      // cq/sqrt(beta)
    double sigma_q_sq() const; // q-variance: 1/(2*beta*zq^(q-1))
};

// q-logarithm (x^(1-q) - 1)/(1 - q); natural log in the Gaussian band.
double q_log(double x, double q);

// Normalization factor C_q = sqrt(pi)*Gamma(alpha - 1/2)/(sqrt(q-1)*Gamma(alpha)),
// 1 < q < 3. Returns sqrt(pi) inside the Gaussian band.
double normalization_cq(double q);

// Density of the q-Gaussian at x.
double pdf(double x, const QGaussianParams& p);

// Cumulative distribution at x, via the Student-t equivalence
// (nu = 2*alpha - 1, scale sqrt(kappa*nu)).
double cdf(double x, const QGaussianParams& p);

// Ordinary variance 1/((5 - 3q)*beta); diverges for q >= 5/3.
double variance(const QGaussianParams& p);

// Tail exponent (q + 1)/(q - 1) of the asymptotic cumulative power law.
double tail_index(double q);

} // namespace qgfit
