#pragma once

#include <functional>
#include <span>
#include <vector>

namespace itad::quad {

// 64-node Gauss-Legendre rule mapped to [lo, hi]: nodes and weights.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

Rule gauss64(double lo, double hi);

// Same rule split piecewise on sorted interior breakpoints (clipped to the
// interval); used for integrands with kinks, e.g. the local kernel.
Rule gauss64_piecewise(double lo, double hi, std::span<const double> breakpoints);

double integrate(const Rule& rule, const std::function<double(double)>& f);

// Adaptive Gauss-Kronrod integration to the given absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double lo,
                          double hi, double tol = 1e-10);

}  // namespace itad::quad
