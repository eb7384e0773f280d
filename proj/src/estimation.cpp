#include "qgfit/estimation.hpp"
#include "qgfit/fisher.hpp"
#include "qgfit/solvers.hpp"
#include "qgfit/special_functions.hpp"

#include <algorithm>
#include <cmath>

namespace qgfit {

namespace {

std::vector<double> squares_checked(const SampleSet& s, std::size_t min_n) {
    if (s.size() < min_n)
        throw InsufficientDataError("estimation: need at least "
                                    + std::to_string(min_n) + " samples, got "
                                    + std::to_string(s.size()));
    std::vector<double> w2(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!std::isfinite(s[i]))
            throw ValidationError("estimation: sample " + std::to_string(i)
                                  + " is not finite");
        w2[i] = s[i] * s[i];
    }
    if (*std::max_element(w2.begin(), w2.end()) == 0.0)
        throw DegenerateError("estimation: all samples are zero (zero variance)");
    return w2;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// mean(w2 / (1 + kappa*w2))
double moment_a(const std::vector<double>& w2, double kappa) {
    double s = 0.0;
    for (double x : w2) s += x / (1.0 + kappa * x);
    return s / static_cast<double>(w2.size());
}

// mean(log(1 + kappa*w2))
double moment_l(const std::vector<double>& w2, double kappa) {
    double s = 0.0;
    for (double x : w2) s += std::log1p(kappa * x);
    return s / static_cast<double>(w2.size());
}

// log Z in (alpha, kappa) coordinates: Z = sqrt(pi/kappa) G(a-1/2)/G(a).
double log_z(double alpha, double kappa) {
    return 0.5 * std::log(M_PI / kappa) + log_gamma(alpha - 0.5) - log_gamma(alpha);
}

EstimationResult result_at(const std::vector<double>& w2, double alpha,
                           double kappa, Boundary hit) {
    const std::size_t n = w2.size();
    const double q = 1.0 + 1.0 / alpha;
    const double beta = kappa * alpha;
    EstimationResult r{QGaussianParams(q, beta)};
    r.boundary_hit = hit;

    double sum_l = 0.0, sum_a = 0.0;
    for (double x : w2) {
        sum_l += std::log1p(kappa * x);
        sum_a += x / (1.0 + kappa * x);
    }
    r.objective = -static_cast<double>(n) * log_z(alpha, kappa) - alpha * sum_l;
    const double g_alpha =
        static_cast<double>(n) * (digamma(alpha) - digamma(alpha - 0.5)) - sum_l;
    const double g_kappa =
        static_cast<double>(n) / (2.0 * kappa) - alpha * sum_a;
    r.gradient_norm = std::hypot(g_alpha, g_kappa);

    const InfoMatrix2 info = expected_fisher(r.params);
    const auto [sq, sb] = standard_errors_q_beta(r.params, n, info);
    r.stderr_q = sq;
    r.stderr_beta = sb;
    return r;
}

} // namespace

namespace detail {

double kappa_for_alpha(const std::vector<double>& w2, double alpha) {
    // h(kappa) = 2*alpha*kappa*mean(w2/(1+kappa*w2)) - 1 rises from -1 at
    // kappa -> 0 to 2*alpha*(nonzero fraction) - 1 at kappa -> inf; the scale
    // seed is exact when the tails are light.
    const double seed = 1.0 / (2.0 * alpha * mean_of(w2));
    auto h = [&](double t) { return 2.0 * alpha * std::exp(t) * moment_a(w2, std::exp(t)) - 1.0; };
    double lo = std::log(seed) - 21.0; // factor 1.3e9 below the seed
    double hi = std::log(seed);
    while (h(hi) < 0.0) {
        hi += 2.3; // expand by x10 until the sign flips
        if (hi > std::log(seed) + 70.0)
            throw NumericalError("kappa_for_alpha: no root (too much mass at zero)");
    }
    const double t = bisect_root(h, lo, hi, 1e-11);
    return std::exp(t);
}

} // namespace detail

EstimationResult estimate_q_beta(const SampleSet& s) {
    const std::vector<double> w2 = squares_checked(s, kMinSamples);

    const double alpha_hi = 1.0 / (kQLow - 1.0);  // light-tail end, q = 1.1
    const double alpha_lo = 1.0 / (kQHigh - 1.0); // heavy-tail end, q = 1.66
    const double k_lo = detail::kappa_for_alpha(w2, alpha_hi);
    const double k_hi = detail::kappa_for_alpha(w2, alpha_lo);

    // Reduced scalar equation in kappa alone: with f = 1/(2*kappa*A(kappa))
    // the remaining stationarity condition reads
    //   g(kappa) = psi(f) - psi(f - 1/2) - mean(log(1 + kappa*w2)) = 0.
    // g < 0 at the q=1.1 end and g > 0 at the q=1.66 end when the optimum
    // is interior.
    auto g = [&](double kappa) {
        const double f = 1.0 / (2.0 * kappa * moment_a(w2, kappa));
        return digamma(f) - digamma(f - 0.5) - moment_l(w2, kappa);
    };

    const double g_lo = g(k_lo);
    const double g_hi = g(k_hi);
    if (g_lo > 0.0 && g_hi > 0.0)
        return result_at(w2, alpha_hi, k_lo, Boundary::q_low);
    if (g_lo < 0.0 && g_hi < 0.0)
        return result_at(w2, alpha_lo, k_hi, Boundary::q_high);

    const double kappa = bisect_root(g, k_lo, k_hi, 1e-12 * k_lo);
    double alpha = 1.0 / (2.0 * kappa * moment_a(w2, kappa));
    alpha = std::clamp(alpha, alpha_lo, alpha_hi);
    return result_at(w2, alpha, kappa, Boundary::none);
}

EstimationResult estimate_beta_fixed_q(const SampleSet& s, double q) {
    if (!(q > 1.0 - kGaussianBand && q <= kQHigh + 1e-12))
        throw DomainError("estimate_beta_fixed_q: q must lie in [1, 1.66]");
    const std::vector<double> w2 = squares_checked(s, kMinSamples);
    const std::size_t n = w2.size();

    if (is_gaussian_limit(q)) {
        // Gaussian closed form: 1/beta = 2*mean(w^2).
        const double m2 = mean_of(w2);
        const double beta = 1.0 / (2.0 * m2);
        EstimationResult r{QGaussianParams(q, beta)};
        r.stderr_beta = beta * std::sqrt(2.0 / static_cast<double>(n));
        r.objective = 0.5 * static_cast<double>(n) * std::log(beta / M_PI)
                      - beta * m2 * static_cast<double>(n);
        r.gradient_norm = 0.0;
        return r;
    }

    const double alpha = 1.0 / (q - 1.0);
    const double kappa = detail::kappa_for_alpha(w2, alpha);
    const double beta = kappa * alpha;
    EstimationResult r{QGaussianParams(q, beta)};

    double sum_l = 0.0, sum_a = 0.0;
    for (double x : w2) {
        sum_l += std::log1p(kappa * x);
        sum_a += x / (1.0 + kappa * x);
    }
    r.objective = -static_cast<double>(n) * log_z(alpha, kappa) - alpha * sum_l;
    r.gradient_norm =
        std::fabs(static_cast<double>(n) / (2.0 * kappa) - alpha * sum_a);
    // kappa-block of the expected information at fixed alpha.
    r.stderr_beta = 2.0 * beta * std::sqrt((alpha + 1.0) / (2.0 * alpha - 1.0))
                    / std::sqrt(static_cast<double>(n));
    return r;
}

std::pair<EstimationResult, EstimationResult>
estimate_branches(const SampleSet& s, double q) {
    SampleSet left, right;
    for (double x : s) {
        if (x <= 0.0) left.push_back(x);
        if (x >= 0.0) right.push_back(x);
    }
    if (left.size() < kMinSamples || right.size() < kMinSamples)
        throw InsufficientDataError(
            "estimate_branches: each branch needs at least "
            + std::to_string(kMinSamples) + " samples (left "
            + std::to_string(left.size()) + ", right "
            + std::to_string(right.size()) + ")");
    return {estimate_beta_fixed_q(left, q), estimate_beta_fixed_q(right, q)};
}

} // namespace qgfit
