#pragma once

#include "qgfit/qgaussian.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace qgfit {

// Symmetric 2x2 information matrix. Entries are per-sample (the 1/N of the
// measured matrix is already applied); basis says which parameter pair the
// rows refer to.
struct InfoMatrix2 {
    enum class Basis { alpha_kappa, q_beta };
    double aa = 0.0; // (1,1)
    double ak = 0.0; // (1,2) = (2,1)
    double kk = 0.0; // (2,2)
    Basis basis = Basis::alpha_kappa;
};

// Closed-form expected information in (alpha, kappa):
//   I_aa = psi_1(alpha - 1/2) - psi_1(alpha)
//   I_ak = 1/(2*kappa*alpha)
//   I_kk = (2*alpha - 1)/((alpha + 1) * 4*kappa^2)
InfoMatrix2 expected_fisher(const QGaussianParams& p);

// Empirical score outer-product average over the samples, same basis.
InfoMatrix2 measured_fisher(const std::vector<double>& s, const QGaussianParams& p);

// Change of basis to (q, beta) via the triangular Jacobian
// J = [[-alpha^2, kappa*alpha], [0, 1/alpha]]; det J = -alpha.
InfoMatrix2 to_q_beta(const QGaussianParams& p, const InfoMatrix2& m);

// Standard errors (S_q, S_beta): transform to (q, beta), invert, take
// sqrt(diag/N). Throws NumericalError when the matrix is singular.
std::pair<double, double> standard_errors_q_beta(const QGaussianParams& p,
                                                 std::size_t n,
                                                 const InfoMatrix2& m);

} // namespace qgfit
