#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgfit/estimation.hpp"
#include "qgfit/fisher.hpp"
#include "qgfit/sampling.hpp"
#include "qgfit/special_functions.hpp"

#include "oracles.hpp"

#include <cmath>
#include <vector>

using namespace qgfit;

TEST_CASE("expected information matches the closed forms") {
    // q = 1.5, beta = 1 puts (alpha, kappa) at (2, 0.5).
    const QGaussianParams p(1.5, 1.0);
    const InfoMatrix2 m = expected_fisher(p);
    CHECK(std::fabs(m.ak - 0.5) < 1e-14);
    CHECK(std::fabs(m.kk - 1.0) < 1e-14);
    // psi_1(3/2) - psi_1(2), 30-digit reference.
    CHECK(std::fabs(m.aa / 0.28986813369645287294 - 1.0) < 1e-12);
    CHECK(m.basis == InfoMatrix2::Basis::alpha_kappa);
}

TEST_CASE("information is invariant under the location parameter") {
    const InfoMatrix2 a = expected_fisher(QGaussianParams(1.4, 2.0, 0.0));
    const InfoMatrix2 b = expected_fisher(QGaussianParams(1.4, 2.0, -3.7));
    CHECK(a.aa == b.aa);
    CHECK(a.ak == b.ak);
    CHECK(a.kk == b.kk);
}

TEST_CASE("score outer products converge to the expected information") {
    const QGaussianParams p(1.5, 1.0);
    SeededStream s(20250401);
    const auto x = sample_q_gaussian(p, 1000000, s);
    const InfoMatrix2 m = measured_fisher(x, p);
    const InfoMatrix2 e = expected_fisher(p);
    CHECK(std::fabs(m.aa / e.aa - 1.0) < 0.01);
    CHECK(std::fabs(m.ak / e.ak - 1.0) < 0.01);
    CHECK(std::fabs(m.kk / e.kk - 1.0) < 0.01);
}

TEST_CASE("negative mean hessian equals the expected information") {
    const QGaussianParams p(1.5, 1.0);
    const double alpha = p.alpha();
    const double kappa = p.kappa();
    const InfoMatrix2 e = expected_fisher(p);

    // The alpha-alpha block is deterministic.
    CHECK(std::fabs((trigamma(alpha - 0.5) - trigamma(alpha)) - e.aa) < 1e-14);

    // The mixed and kappa blocks involve sample moments.
    SeededStream s(555);
    const auto x = sample_q_gaussian(p, 1000000, s);
    double h_ak = 0.0, h_kk = 0.0;
    for (double v : x) {
        const double w2 = v * v;
        const double r = w2 / (1.0 + kappa * w2);
        h_ak += r;                                       // -d2/dadk
        h_kk += 1.0 / (2.0 * kappa * kappa) - alpha * r * r; // -d2/dk2
    }
    const double n = static_cast<double>(x.size());
    CHECK(std::fabs(h_ak / n / e.ak - 1.0) < 0.01);
    CHECK(std::fabs(h_kk / n / e.kk - 1.0) < 0.01);
}

TEST_CASE("auxiliary moment identities hold at one percent") {
    const QGaussianParams p(1.5, 1.0);
    const double alpha = p.alpha();
    const double kappa = p.kappa();
    SeededStream s(777);
    const auto x = sample_q_gaussian(p, 1000000, s);
    double m1 = 0.0, m2 = 0.0;
    for (double v : x) {
        const double w2 = v * v;
        const double d = 1.0 + kappa * w2;
        m1 += w2 / d;
        m2 += w2 * w2 / (d * d);
    }
    const double n = static_cast<double>(x.size());
    m1 /= n;
    m2 /= n;
    CHECK(std::fabs(m1 / (1.0 / (2.0 * kappa * alpha)) - 1.0) < 0.01);
    CHECK(std::fabs(m2 / (3.0 / (4.0 * kappa * kappa * alpha * (alpha + 1.0))) - 1.0)
          < 0.01);
}

TEST_CASE("a single repeated value yields a rank-one matrix") {
    const QGaussianParams p(1.5, 1.0);
    const std::vector<double> s(5, 0.7);
    const InfoMatrix2 m = measured_fisher(s, p);
    CHECK(std::fabs(m.aa * m.kk - m.ak * m.ak) < 1e-12);
    CHECK_THROWS_AS(standard_errors_q_beta(p, 5, m), NumericalError);
}

TEST_CASE("basis change scales the determinant by alpha squared") {
    const QGaussianParams p(1.5, 1.0);
    const double alpha = p.alpha();
    InfoMatrix2 m;
    m.aa = 0.3;
    m.ak = 0.1;
    m.kk = 0.9;
    const InfoMatrix2 t = to_q_beta(p, m);
    const double det_m = m.aa * m.kk - m.ak * m.ak;
    const double det_t = t.aa * t.kk - t.ak * t.ak;
    CHECK(std::fabs(det_t / (det_m * alpha * alpha) - 1.0) < 1e-12);
    CHECK(t.basis == InfoMatrix2::Basis::q_beta);
    CHECK_THROWS_AS(to_q_beta(p, t), DomainError);
}

TEST_CASE("diagonal information reduces the q error to the scalar chain rule") {
    const QGaussianParams p(1.5, 1.0);
    const double alpha = p.alpha();
    InfoMatrix2 m;
    m.aa = 0.29;
    m.ak = 0.0;
    m.kk = 1.0;
    const std::size_t n = 4096;
    const auto [sq, sb] = standard_errors_q_beta(p, n, m);
    const double chain =
        (1.0 / (alpha * alpha)) / std::sqrt(m.aa * static_cast<double>(n));
    CHECK(std::fabs(sq / chain - 1.0) < 1e-12);
    CHECK(sb > 0.0);
}

TEST_CASE("quadrupling the sample halves both standard errors") {
    const QGaussianParams p(1.45, 3.0);
    const InfoMatrix2 m = expected_fisher(p);
    const auto [sq1, sb1] = standard_errors_q_beta(p, 1000, m);
    const auto [sq4, sb4] = standard_errors_q_beta(p, 4000, m);
    CHECK(std::fabs(sq1 / sq4 - 2.0) < 1e-14);
    CHECK(std::fabs(sb1 / sb4 - 2.0) < 1e-14);
}

TEST_CASE("predicted errors match the spread over replicated fits") {
    const QGaussianParams p(1.5, 1.0);
    const std::size_t n = 2500;
    const int reps = 500;
    std::vector<double> qs, bs;
    for (int i = 0; i < reps; ++i) {
        SeededStream s = substream(660, static_cast<std::uint64_t>(i));
        const auto x = sample_q_gaussian(p, n, s);
        const EstimationResult r = estimate_q_beta(x);
        qs.push_back(r.params.q);
        bs.push_back(r.params.beta);
    }
    const auto [sq, sb] = standard_errors_q_beta(p, n, expected_fisher(p));
    CHECK(std::fabs(oracle::sd(qs) / sq - 1.0) < 0.15);
    CHECK(std::fabs(oracle::sd(bs) / sb - 1.0) < 0.15);
}

TEST_CASE("degenerate inputs are rejected") {
    const QGaussianParams p(1.5, 1.0);
    InfoMatrix2 zero;
    zero.aa = 0.0;
    zero.ak = 0.0;
    zero.kk = 0.0;
    CHECK_THROWS_AS(standard_errors_q_beta(p, 100, zero), NumericalError);
    CHECK_THROWS_AS(expected_fisher(QGaussianParams(1.0, 1.0)), DomainError);
    CHECK_THROWS_AS(measured_fisher(std::vector<double>{}, p),
                    InsufficientDataError);
}
