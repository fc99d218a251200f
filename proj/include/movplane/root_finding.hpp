#pragma once

#include <cmath>
#include <utility>

namespace movplane {

/// Golden-section search for a minimum of a unimodal f on [lo, hi].
/// Returns (argmin, f(argmin)).
template <typename F>
std::pair<double, double> golden_section_min(F&& f, double lo, double hi, double xtol,
                                             int max_iter = 200) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
}

/// Illinois (modified regula falsi) root of f on [a, b], given fa = f(a) and
/// fb = f(b) of opposite sign. Falls back to plain bisection when the secant
/// step stalls.
template <typename F>
double illinois_root(F&& f, double a, double b, double fa, double fb, double xtol,
                     int max_iter = 100) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    int side = 0;
    for (int i = 0; i < max_iter && std::abs(b - a) > xtol; ++i) {
        double c = (a * fb - b * fa) / (fb - fa);
        // keep the iterate strictly inside the bracket
        const double lo = std::min(a, b), hi = std::max(a, b);
        if (!(c > lo && c < hi)) c = 0.5 * (a + b);
        const double fc = f(c);
        if (fc == 0.0) return c;
        if ((fc > 0) == (fb > 0)) {
            b = c;
            fb = fc;
            if (side == -1) fa *= 0.5;
            side = -1;
        } else {
            a = c;
            fa = fc;
            if (side == 1) fb *= 0.5;
            side = 1;
        }
    }
    return std::abs(fa) < std::abs(fb) ? a : b;
}

}  // namespace movplane
