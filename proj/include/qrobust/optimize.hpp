// optimize.hpp — small deterministic 1-D search helpers

#pragma once

#include <cmath>

namespace qrobust {

// Golden-section search for a minimizer of f on [a, b]; returns the abscissa.
template <typename F>
double golden_section_min(F&& f, double a, double b, int iterations) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations; ++i) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? c : d;
}

template <typename F>
double golden_section_max(F&& f, double a, double b, int iterations) {
    return golden_section_min([&](double x) { return -f(x); }, a, b, iterations);
}

} // namespace qrobust
