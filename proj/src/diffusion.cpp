#include "qgfit/diffusion.hpp"
#include "qgfit/qgaussian.hpp"
#include "qgfit/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace qgfit {

void BetaSeries::validate() const {
    if (delays.size() != beta_hat.size()
        || (!stderr_beta.empty() && stderr_beta.size() != delays.size()))
        throw ValidationError("BetaSeries: field lengths differ");
    for (std::size_t i = 0; i < delays.size(); ++i) {
        if (delays[i] <= 0)
            throw ValidationError("BetaSeries: delays must be positive");
        if (i > 0 && delays[i] <= delays[i - 1])
            throw ValidationError("BetaSeries: delays must be strictly increasing");
        if (!(beta_hat[i] > 0.0) || !std::isfinite(beta_hat[i]))
            throw ValidationError("BetaSeries: beta_hat must be positive and finite");
    }
}

double beta_superdiffusion(double t, double q, double beta1) {
    if (!(t > 0.0)) throw DomainError("beta_superdiffusion: requires t > 0");
    if (!(q > 1.0 - kGaussianBand && q < 3.0))
        throw DomainError("beta_superdiffusion: requires 1 <= q < 3");
    if (!(beta1 > 0.0))
        throw DomainError("beta_superdiffusion: requires beta1 > 0");
    return beta1 * std::pow(t, -2.0 / (3.0 - q));
}

double beta_drift_diffusion(double t, const DriftDiffusionParams& p) {
    if (!(t > 0.0)) throw DomainError("beta_drift_diffusion: requires t > 0");
    if (!(p.b > 0.0))
        throw DomainError("beta_drift_diffusion: requires b > 0 "
                          "(use beta_superdiffusion for the b = 0 limit)");
    if (!(p.q > 1.0 - kGaussianBand && p.q < 2.0))
        throw DomainError("beta_drift_diffusion: requires 1 <= q < 2");
    if (!(p.d > 0.0))
        throw DomainError("beta_drift_diffusion: requires D > 0");
    const double tau = 1.0 / (p.b * (3.0 - p.q));
    const double cq = normalization_cq(p.q);
    const double rhs = 2.0 * (2.0 - p.q) * p.d / p.b
                       * std::pow(cq, p.q - 1.0)
                       * (-std::expm1(-t / tau));
    return std::pow(rhs, -2.0 / (3.0 - p.q));
}

PowerLawFit fit_power_law(const BetaSeries& s, bool weighted) {
    s.validate();
    const std::size_t n = s.delays.size();
    if (n < 3)
        throw InsufficientDataError("fit_power_law: need at least 3 delays");
    if (weighted && s.stderr_beta.size() != n)
        throw ValidationError("fit_power_law: weighted fit needs stderr values");

    std::vector<double> w(n, 1.0);
    if (weighted) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!(s.stderr_beta[i] > 0.0))
                throw ValidationError("fit_power_law: weights need stderr > 0");
            w[i] = 1.0 / (s.stderr_beta[i] * s.stderr_beta[i]);
        }
    }

    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sw += w[i];
        sx += w[i] * std::log(static_cast<double>(s.delays[i]));
        sy += w[i] * std::log(s.beta_hat[i]);
    }
    const double xbar = sx / sw, ybar = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(static_cast<double>(s.delays[i])) - xbar;
        const double dy = std::log(s.beta_hat[i]) - ybar;
        sxx += w[i] * dx * dx;
        sxy += w[i] * dx * dy;
    }
    if (!(sxx > 0.0))
        throw NumericalError("fit_power_law: degenerate delay grid");

    PowerLawFit f;
    f.lambda = sxy / sxx;
    f.intercept = ybar - f.lambda * xbar;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::log(s.beta_hat[i]) - f.intercept
                         - f.lambda * std::log(static_cast<double>(s.delays[i]));
        sse += w[i] * r * r;
    }
    f.lambda_stderr = n > 2 ? std::sqrt(sse / (static_cast<double>(n) - 2.0) / sxx) : 0.0;
    return f;
}

DriftDiffusionParams fit_drift_params(const BetaSeries& s, double q) {
    s.validate();
    if (s.delays.size() < 4)
        throw InsufficientDataError("fit_drift_params: need at least 4 delays");
    if (s.delays.front() != 1)
        throw ValidationError("fit_drift_params: delays must include t = 1");
    if (!(q > 1.0 - kGaussianBand && q < 2.0))
        throw DomainError("fit_drift_params: requires 1 <= q < 2");

    const double e = 2.0 / (3.0 - q);
    const double lb1 = std::log(s.beta_hat.front());
    // D and all constant factors cancel in beta(t)/beta(1), leaving
    //   ln R(t) = -e * [ln(1 - exp(-t/tau)) - ln(1 - exp(-1/tau))].
    auto sse = [&](double ln_b) {
        const double b = std::exp(ln_b);
        const double tau = 1.0 / (b * (3.0 - q));
        const double l1 = std::log(-std::expm1(-1.0 / tau));
        double acc = 0.0;
        for (std::size_t i = 1; i < s.delays.size(); ++i) {
            const double t = static_cast<double>(s.delays[i]);
            const double lr = -e * (std::log(-std::expm1(-t / tau)) - l1);
            const double res = std::log(s.beta_hat[i]) - lb1 - lr;
            acc += res * res;
        }
        return acc;
    };

    const auto [ln_b, obj] =
        golden_min(sse, std::log(kDriftBMin), std::log(kDriftBMax), 1e-12);
    (void)obj;
    const double b = std::exp(ln_b);
    if (b > kDriftBMax * 0.95)
        throw NumericalError("fit_drift_params: no interior minimum; "
                             "b ran into the upper search bound");

    DriftDiffusionParams p;
    p.q = q;
    p.b = b;
    p.tau = 1.0 / (b * (3.0 - q));
    p.b_at_lower_bound = b < kDriftBMin * 1.05;
    // Anchor D so the model reproduces beta_hat(1) exactly.
    const double cq = normalization_cq(q);
    p.d = b * std::pow(s.beta_hat.front(), -(3.0 - q) / 2.0)
          / (2.0 * (2.0 - q) * std::pow(cq, q - 1.0) * (-std::expm1(-1.0 / p.tau)));
    return p;
}

} // namespace qgfit
