#include "itad/lambertw.hpp"

#include <cmath>
#include <stdexcept>

namespace itad {

double lambert_w0(double x) {
    if (!(x >= 0.0)) throw std::domain_error("lambert_w0 requires x >= 0");
    if (x == 0.0) return 0.0;

    // Seed: w ~ x for small x, w ~ log x - log log x for large x.
    double w;
    if (x < 1.0) {
        w = x * (1.0 - x);
    } else {
        const double l = std::log(x);
        w = l > 1.0 ? l - std::log(l) : l;
        if (w <= 0.0) w = 0.5;
    }

    for (int it = 0; it < 100; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double d1 = ew * (w + 1.0);
        const double d2 = ew * (w + 2.0);
        const double step = f / (d1 - 0.5 * f * d2 / d1);
        w -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
    }
    return w;
}

}  // namespace itad
