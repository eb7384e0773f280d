#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgfit/estimation.hpp"
#include "qgfit/sampling.hpp"
#include "qgfit/solvers.hpp"
#include "qgfit/special_functions.hpp"

#include "oracles.hpp"

#include <cmath>
#include <vector>

using namespace qgfit;

namespace {

std::vector<double> draw(double q, double beta, std::size_t n,
                         std::uint64_t seed) {
    SeededStream s(seed);
    return sample_q_gaussian(QGaussianParams(q, beta), n, s);
}

// Independent alternating solver for the two stationarity conditions:
//   psi(alpha) - psi(alpha - 1/2) = mean log1p(kappa w^2)   (alpha given kappa)
//   1/(2 kappa) = alpha * mean(w^2/(1 + kappa w^2))          (kappa given alpha)
// Coordinate iteration contracts for heavy-tail samples (alpha of order a few),
// which is the regime this check runs in.
std::pair<double, double> alternate_fit(const std::vector<double>& sample) {
    std::vector<double> w2(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) w2[i] = sample[i] * sample[i];

    double alpha = 2.0;
    double kappa = detail::kappa_for_alpha(w2, alpha);
    for (int it = 0; it < 2000; ++it) {
        double l = 0.0;
        for (double x : w2) l += std::log1p(kappa * x);
        l /= static_cast<double>(w2.size());
        auto h = [&](double a) { return digamma(a) - digamma(a - 0.5) - l; };
        const double next_alpha = bisect_root(h, 0.51, 20000.0, 1e-13);
        const double next_kappa = detail::kappa_for_alpha(w2, next_alpha);
        const bool done = std::fabs(next_alpha - alpha) < 1e-13 * alpha
                       && std::fabs(next_kappa - kappa) < 1e-13 * kappa;
        alpha = next_alpha;
        kappa = next_kappa;
        if (done) break;
    }
    return {alpha, kappa};
}

} // namespace

TEST_CASE("joint fit recovers the generating parameters") {
    const auto x = draw(1.5, 1.0, 50000, 606);
    const EstimationResult r = estimate_q_beta(x);
    CHECK(r.boundary_hit == Boundary::none);
    CHECK(std::fabs(r.params.q - 1.5) < 3.0 * r.stderr_q);
    CHECK(std::fabs(r.params.beta - 1.0) < 3.0 * r.stderr_beta);
    CHECK(r.stderr_q > 0.0);
    CHECK(r.stderr_beta > 0.0);
    CHECK(r.gradient_norm < 1e-8 * static_cast<double>(x.size()));
}

TEST_CASE("joint fit satisfies both stationarity conditions") {
    const auto x = draw(1.55, 4.0, 20000, 909);
    const EstimationResult r = estimate_q_beta(x);
    REQUIRE(r.boundary_hit == Boundary::none);
    const double alpha = 1.0 / (r.params.q - 1.0);
    const double kappa = r.params.beta / alpha;
    double l = 0.0, a = 0.0;
    for (double v : x) {
        const double w2 = v * v;
        l += std::log1p(kappa * w2);
        a += w2 / (1.0 + kappa * w2);
    }
    l /= static_cast<double>(x.size());
    a /= static_cast<double>(x.size());
    CHECK(std::fabs(digamma(alpha) - digamma(alpha - 0.5) - l) < 1e-9);
    CHECK(std::fabs(1.0 / (2.0 * kappa) - alpha * a) < 1e-9 * (1.0 / (2.0 * kappa)));
}

TEST_CASE("reduced scalar solve agrees with the alternating full solve") {
    const auto x = draw(1.5, 2.0, 20000, 1234);
    const EstimationResult r = estimate_q_beta(x);
    REQUIRE(r.boundary_hit == Boundary::none);
    const auto [alpha, kappa] = alternate_fit(x);
    const double alpha_lib = 1.0 / (r.params.q - 1.0);
    const double kappa_lib = r.params.beta / alpha_lib;
    CHECK(std::fabs(alpha_lib / alpha - 1.0) < 1e-9);
    CHECK(std::fabs(kappa_lib / kappa - 1.0) < 1e-9);
}

TEST_CASE("gaussian data drives the tail parameter into the lower clamp") {
    const auto x = draw(1.0, 0.5, 30000, 42);
    const EstimationResult r = estimate_q_beta(x);
    CHECK(r.boundary_hit == Boundary::q_low);
    CHECK(r.params.q == kQLow);
}

TEST_CASE("fixed-q fit in the gaussian limit has a closed form") {
    std::vector<double> s;
    for (int rep = 0; rep < 10; ++rep) {
        s.push_back(-1.0);
        s.push_back(0.0);
        s.push_back(1.0);
    }
    const EstimationResult r = estimate_beta_fixed_q(s, 1.0);
    CHECK(std::fabs(r.params.beta - 0.75) < 1e-12);
    CHECK(std::fabs(r.stderr_beta - 0.75 * std::sqrt(2.0 / 30.0)) < 1e-12);
}

TEST_CASE("fixed-q fit recovers beta") {
    const auto x = draw(1.5, 0.25, 50000, 5150);
    const EstimationResult r = estimate_beta_fixed_q(x, 1.5);
    CHECK(std::fabs(r.params.beta - 0.25) < 3.0 * r.stderr_beta);
    CHECK(r.gradient_norm < 1e-8 * static_cast<double>(x.size()));
}

TEST_CASE("rescaling the sample rescales beta and leaves q alone") {
    const auto x = draw(1.45, 1.3, 20000, 2718);
    std::vector<double> y(x);
    const double c = 2.5;
    for (double& v : y) v *= c;

    const EstimationResult rx = estimate_q_beta(x);
    const EstimationResult ry = estimate_q_beta(y);
    REQUIRE(rx.boundary_hit == Boundary::none);
    CHECK(std::fabs(ry.params.q - rx.params.q) < 1e-9);
    CHECK(std::fabs(ry.params.beta * c * c / rx.params.beta - 1.0) < 1e-9);

    const EstimationResult fx = estimate_beta_fixed_q(x, 1.45);
    const EstimationResult fy = estimate_beta_fixed_q(y, 1.45);
    CHECK(std::fabs(fy.params.beta * c * c / fx.params.beta - 1.0) < 1e-9);
}

TEST_CASE("quadrupling the sample roughly halves the estimator spread") {
    const int reps = 200;
    std::vector<double> q_small, q_big;
    for (int i = 0; i < reps; ++i) {
        SeededStream a = substream(8888, static_cast<std::uint64_t>(i));
        SeededStream b = substream(8889, static_cast<std::uint64_t>(i));
        const QGaussianParams p(1.5, 1.0);
        q_small.push_back(estimate_q_beta(sample_q_gaussian(p, 2500, a)).params.q);
        q_big.push_back(estimate_q_beta(sample_q_gaussian(p, 10000, b)).params.q);
    }
    const double ratio = oracle::sd(q_small) / oracle::sd(q_big);
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.4);
}

TEST_CASE("branch fits agree on a symmetric sample") {
    const auto base = draw(1.5, 1.0, 20000, 31337);
    std::vector<double> sym;
    for (double v : base) {
        sym.push_back(std::fabs(v));
        sym.push_back(-std::fabs(v));
    }
    const auto [left, right] = estimate_branches(sym, 1.5);
    CHECK(std::fabs(left.params.beta / right.params.beta - 1.0) < 1e-12);
}

TEST_CASE("branch fits resolve asymmetric widths") {
    const auto xl = draw(1.5, 1.0, 15000, 8080);
    const auto xr = draw(1.5, 4.0, 15000, 8081);
    std::vector<double> mix;
    for (double v : xl) mix.push_back(-std::fabs(v));
    for (double v : xr) mix.push_back(std::fabs(v));
    const auto [left, right] = estimate_branches(mix, 1.5);
    CHECK(right.params.beta > left.params.beta);
    CHECK(std::fabs(left.params.beta - 1.0) < 4.0 * left.stderr_beta);
    CHECK(std::fabs(right.params.beta - 4.0) < 4.0 * right.stderr_beta);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(estimate_q_beta(std::vector<double>(29, 1.0)),
                    InsufficientDataError);
    CHECK_THROWS_AS(estimate_q_beta(std::vector<double>(100, 0.0)),
                    DegenerateError);
    std::vector<double> with_nan(100, 0.5);
    with_nan[17] = std::nan("");
    CHECK_THROWS_AS(estimate_q_beta(with_nan), ValidationError);

    const auto x = draw(1.5, 1.0, 100, 1);
    CHECK_THROWS_AS(estimate_beta_fixed_q(x, 1.7), DomainError);
    CHECK_THROWS_AS(estimate_beta_fixed_q(x, 0.5), DomainError);

    std::vector<double> one_sided;
    for (double v : x) one_sided.push_back(std::fabs(v) + 1.0);
    CHECK_THROWS_AS(estimate_branches(one_sided, 1.5), InsufficientDataError);
}
