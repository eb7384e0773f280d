#include "qgfit/fisher.hpp"
#include "qgfit/special_functions.hpp"

#include <cmath>

namespace qgfit {

namespace {

void require_alpha_kappa(const QGaussianParams& p) {
    if (p.gaussian_limit())
        throw DomainError("fisher: (alpha, kappa) information is undefined in "
                          "the Gaussian limit; use the fixed-q error formula");
}

} // namespace

InfoMatrix2 expected_fisher(const QGaussianParams& p) {
    require_alpha_kappa(p);
    const double alpha = p.alpha();
    const double kappa = p.kappa();
    if (!(alpha > 0.5))
        throw DomainError("expected_fisher: requires alpha > 1/2");
    InfoMatrix2 m;
    m.aa = trigamma(alpha - 0.5) - trigamma(alpha);
    m.ak = 1.0 / (2.0 * kappa * alpha);
    m.kk = (2.0 * alpha - 1.0) / ((alpha + 1.0) * 4.0 * kappa * kappa);
    return m;
}

InfoMatrix2 measured_fisher(const std::vector<double>& s, const QGaussianParams& p) {
    require_alpha_kappa(p);
    if (s.empty()) throw InsufficientDataError("measured_fisher: empty sample");
    const double alpha = p.alpha();
    const double kappa = p.kappa();
    // Per-sample scores of log P = -log Z - alpha*log(1 + kappa*w^2):
    //   d/dalpha = psi(alpha) - psi(alpha - 1/2) - log(1 + kappa*w^2)
    //   d/dkappa = 1/(2*kappa) - alpha*w^2/(1 + kappa*w^2)
    const double c_alpha = digamma(alpha) - digamma(alpha - 0.5);
    const double c_kappa = 1.0 / (2.0 * kappa);
    double saa = 0.0, sak = 0.0, skk = 0.0;
    for (double x : s) {
        const double u = x - p.mean;
        const double w2 = u * u;
        const double sa = c_alpha - std::log1p(kappa * w2);
        const double sk = c_kappa - alpha * w2 / (1.0 + kappa * w2);
        saa += sa * sa;
        sak += sa * sk;
        skk += sk * sk;
    }
    const double n = static_cast<double>(s.size());
    InfoMatrix2 m;
    m.aa = saa / n;
    m.ak = sak / n;
    m.kk = skk / n;
    return m;
}

InfoMatrix2 to_q_beta(const QGaussianParams& p, const InfoMatrix2& m) {
    require_alpha_kappa(p);
    if (m.basis != InfoMatrix2::Basis::alpha_kappa)
        throw DomainError("to_q_beta: matrix already in (q, beta) basis");
    const double alpha = p.alpha();
    const double kappa = p.kappa();
    const double a = -alpha * alpha;
    const double b = kappa * alpha;
    const double c = 1.0 / alpha;
    InfoMatrix2 r;
    r.aa = a * a * m.aa + 2.0 * a * b * m.ak + b * b * m.kk;
    r.ak = c * (a * m.ak + b * m.kk);
    r.kk = c * c * m.kk;
    r.basis = InfoMatrix2::Basis::q_beta;
    return r;
}

std::pair<double, double> standard_errors_q_beta(const QGaussianParams& p,
                                                 std::size_t n,
                                                 const InfoMatrix2& m) {
    const InfoMatrix2 t =
        m.basis == InfoMatrix2::Basis::q_beta ? m : to_q_beta(p, m);
    const double det = t.aa * t.kk - t.ak * t.ak;
    // Relative test: an exactly rank-deficient matrix can round to a tiny
    // nonzero determinant of either sign.
    const double scale = std::fabs(t.aa * t.kk) + t.ak * t.ak;
    if (!(det > 1e-12 * scale))
        throw NumericalError("standard_errors_q_beta: information matrix is singular");
    const double nn = static_cast<double>(n);
    const double var_q = t.kk / det / nn;
    const double var_b = t.aa / det / nn;
    if (!(var_q > 0.0) || !(var_b > 0.0))
        throw NumericalError("standard_errors_q_beta: matrix not positive definite");
    return {std::sqrt(var_q), std::sqrt(var_b)};
}

} // namespace qgfit
