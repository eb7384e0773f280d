#include "qgfit/qgaussian.hpp"
#include "qgfit/special_functions.hpp"

#include <cmath>

namespace qgfit {

QGaussianParams::QGaussianParams(double q_, double beta_, double mean_)
    : q(q_), beta(beta_), mean(mean_) {
    if (!(q > 1.0 - kGaussianBand && q < 3.0))
        throw DomainError("QGaussianParams: q must lie in (1, 3) or the Gaussian limit band");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw DomainError("QGaussianParams: beta must be positive and finite");
    if (!std::isfinite(mean))
        throw DomainError("QGaussianParams: mean must be finite");
}

double QGaussianParams::alpha() const {
    if (gaussian_limit())
        throw DomainError("QGaussianParams::alpha: undefined in the Gaussian limit");
    return 1.0 / (q - 1.0);
}

double QGaussianParams::kappa() const {
    return beta * (q - 1.0); // beta/alpha; zero-safe form in the Gaussian band
}

double QGaussianParams::cq() const { return normalization_cq(q); }

double QGaussianParams::zq() const { return cq() / std::sqrt(beta); }

double QGaussianParams::sigma_q_sq() const {
    return 1.0 / (2.0 * beta * std::pow(zq(), q - 1.0));
}

double q_log(double x, double q) {
    if (!(x > 0.0)) throw DomainError("q_log: requires x > 0");
    if (is_gaussian_limit(q)) return std::log(x);
    const double e = (1.0 - q) * std::log(x);
    return std::expm1(e) / (1.0 - q);
}

double normalization_cq(double q) {
    if (is_gaussian_limit(q)) return std::sqrt(M_PI);
    if (!(q > 1.0 && q < 3.0))
        throw DomainError("normalization_cq: requires 1 < q < 3");
    const double alpha = 1.0 / (q - 1.0);
    // Gamma-ratio via log space; stable for alpha up to ~1e8.
    return std::sqrt(M_PI) * std::exp(log_gamma(alpha - 0.5) - log_gamma(alpha))
           / std::sqrt(q - 1.0);
}

double pdf(double x, const QGaussianParams& p) {
    const double u = x - p.mean;
    if (p.gaussian_limit())
        return std::sqrt(p.beta / M_PI) * std::exp(-p.beta * u * u);
    const double alpha = p.alpha();
    const double kappa = p.kappa();
    return std::exp(-alpha * std::log1p(kappa * u * u)) / p.zq();
}

double cdf(double x, const QGaussianParams& p) {
    const double u = x - p.mean;
    if (p.gaussian_limit())
        return 0.5 * std::erfc(-u * std::sqrt(p.beta));
    const double alpha = p.alpha();
    const double nu = 2.0 * alpha - 1.0;
    const double t = u * std::sqrt(p.kappa() * nu);
    return student_t_cdf(t, nu);
}

double variance(const QGaussianParams& p) {
    if (p.gaussian_limit()) return 1.0 / (2.0 * p.beta);
    if (!(p.q < 5.0 / 3.0))
        throw DomainError("variance: diverges for q >= 5/3");
    return 1.0 / ((5.0 - 3.0 * p.q) * p.beta);
}

double tail_index(double q) {
    if (!(q > 1.0))
        throw DomainError("tail_index: requires q > 1 (no power-law tail otherwise)");
    return (q + 1.0) / (q - 1.0);
}

} // namespace qgfit
