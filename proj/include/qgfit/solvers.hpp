#pragma once

#include "qgfit/errors.hpp"

#include <cmath>
#include <utility>

namespace qgfit {

// Bisection on [lo, hi] where f(lo) and f(hi) have opposite signs.
// Halving runs until the interval width drops below x_tol, then a few
// guarded secant steps sharpen the root. x_tol is absolute.
template <typename F>
double bisect_root(F&& f, double lo, double hi, double x_tol,
                   int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericalError("bisect_root: no sign change over the bracket");
    for (int i = 0; i < max_iter && hi - lo > x_tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    // Secant polish; stays inside [lo, hi].
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        if (fhi == flo) break;
        const double s = hi - fhi * (hi - lo) / (fhi - flo);
        if (!(s > lo && s < hi)) break;
        const double fs = f(s);
        if (fs == 0.0) return s;
        if ((fs > 0.0) == (flo > 0.0)) {
            lo = s;
            flo = fs;
        } else {
            hi = s;
            fhi = fs;
        }
        x = s;
    }
    return x;
}

// Golden-section minimization of a unimodal f on [lo, hi], followed by one
// parabolic refinement through the final bracket. Returns (x_min, f(x_min)).
// x_tol is absolute.
template <typename F>
std::pair<double, double> golden_min(F&& f, double lo, double hi,
                                     double x_tol, int max_iter = 200) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    double xm = f1 < f2 ? x1 : x2;
    double fm = f1 < f2 ? f1 : f2;
    // Parabola through (a, xm, b); accept the vertex only if it improves.
    const double fa = f(a), fb = f(b);
    const double d1 = xm - a, d2 = xm - b;
    const double num = d1 * d1 * (fm - fb) - d2 * d2 * (fm - fa);
    const double den = d1 * (fm - fb) - d2 * (fm - fa);
    if (den != 0.0) {
        const double xv = xm - 0.5 * num / den;
        if (xv > a && xv < b) {
            const double fv = f(xv);
            if (fv < fm) {
                xm = xv;
                fm = fv;
            }
        }
    }
    return {xm, fm};
}

} // namespace qgfit
