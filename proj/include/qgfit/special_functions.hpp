#pragma once

namespace qgfit {

// All functions below are accurate to at least 1e-12 relative error on the
// domains this library uses (arguments that stay well clear of the poles).

// log Gamma(x) for x > 0.
double log_gamma(double x);

// Digamma psi(x) for x > 0.
double digamma(double x);

// Trigamma psi_1(x) for x > 0.
double trigamma(double x);

// Regularized incomplete beta I_x(a, b), a > 0, b > 0, x in [0, 1].
double reg_inc_beta(double a, double b, double x);

// Student-t CDF with nu > 0 degrees of freedom, via reg_inc_beta.
double student_t_cdf(double t, double nu);

} // namespace qgfit
