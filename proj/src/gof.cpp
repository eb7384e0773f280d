#include "qgfit/gof.hpp"

#include <algorithm>
#include <cmath>

namespace qgfit {

double ks_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty())
        throw InsufficientDataError("ks_distance: empty sample");
    std::vector<double> sa(a), sb(b);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    // Advance over pooled jump points; at ties move both ECDFs together.
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] == x) ++i;
        while (j < sb.size() && sb[j] == x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na
                                  - static_cast<double>(j) / nb));
    }
    return std::max(d, 1.0 - static_cast<double>(std::min(i / na, j / nb)));
}

double ks_coefficient(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw DomainError("ks_coefficient: gamma must lie in (0, 1)");
    return std::sqrt(-std::log(gamma / 2.0) / 2.0);
}

double ks_critical(std::size_t n1, std::size_t n2, double gamma) {
    if (n1 == 0 || n2 == 0)
        throw InsufficientDataError("ks_critical: sample sizes must be positive");
    const double a = static_cast<double>(n1);
    const double b = static_cast<double>(n2);
    return ks_coefficient(gamma) * std::sqrt((a + b) / (a * b));
}

double closeness_p_value(const std::vector<double>& empirical,
                         const std::vector<double>& synthetic,
                         const QGaussianParams& model) {
    if (empirical.empty() || synthetic.empty())
        throw InsufficientDataError("closeness_p_value: empty sample");
    std::vector<double> se(empirical), ss(synthetic);
    std::sort(se.begin(), se.end());
    std::sort(ss.begin(), ss.end());
    const double n1 = static_cast<double>(se.size());
    const double n2 = static_cast<double>(ss.size());
    std::size_t closer = 0;
    for (std::size_t i = 0; i < se.size(); ++i) {
        const double x = se[i];
        // Right-continuous ECDF values at x.
        std::size_t k = i + 1;
        while (k < se.size() && se[k] == x) ++k;
        const double f_emp = static_cast<double>(k) / n1;
        const double f_syn = static_cast<double>(
            std::upper_bound(ss.begin(), ss.end(), x) - ss.begin()) / n2;
        const double f_mod = cdf(x, model);
        if (std::fabs(f_emp - f_mod) <= std::fabs(f_syn - f_mod)) ++closer;
    }
    return static_cast<double>(closer) / n1;
}

GofReport evaluate_gof(const std::vector<double>& empirical,
                       const QGaussianParams& model, double gamma,
                       SeededStream& stream, std::size_t syn_factor,
                       bool restandardize) {
    if (empirical.empty())
        throw InsufficientDataError("evaluate_gof: empty empirical sample");
    if (syn_factor == 0)
        throw DomainError("evaluate_gof: syn_factor must be >= 1");
    std::vector<double> syn =
        sample_q_gaussian(model, syn_factor * empirical.size(), stream);
    if (restandardize) {
        // Match first two moments of the empirical sample.
        double me = 0.0, ms = 0.0;
        for (double x : empirical) me += x;
        me /= static_cast<double>(empirical.size());
        for (double x : syn) ms += x;
        ms /= static_cast<double>(syn.size());
        double ve = 0.0, vs = 0.0;
        for (double x : empirical) ve += (x - me) * (x - me);
        ve /= static_cast<double>(empirical.size() - 1);
        for (double x : syn) vs += (x - ms) * (x - ms);
        vs /= static_cast<double>(syn.size() - 1);
        const double r = vs > 0.0 ? std::sqrt(ve / vs) : 1.0;
        for (double& x : syn) x = me + (x - ms) * r;
    }
    GofReport rep;
    rep.n1 = empirical.size();
    rep.n2 = syn.size();
    rep.significance = gamma;
    rep.d_max = ks_distance(empirical, syn);
    rep.d_crit = ks_critical(rep.n1, rep.n2, gamma);
    rep.p_close = closeness_p_value(empirical, syn, model);
    rep.pass_d = rep.d_max <= rep.d_crit;
    rep.pass_p = rep.p_close >= kPCrit;
    return rep;
}

} // namespace qgfit
