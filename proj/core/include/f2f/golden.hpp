#pragma once

#include <cmath>

namespace f2f {

struct Minimum {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section search for a minimum of a unimodal f on [a, b].
template <typename F>
Minimum golden_section_minimize(F&& f, double a, double b, double tol = 1e-12, int max_iter = 200) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

}  // namespace f2f
