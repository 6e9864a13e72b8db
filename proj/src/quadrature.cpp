#include "itad/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace itad::quad {

namespace {

using Gauss64 = boost::math::quadrature::gauss<double, 64>;

void append_mapped(Rule& rule, double lo, double hi) {
    // boost stores the positive half of the symmetric rule.
    const auto& xs = Gauss64::abscissa();
    const auto& ws = Gauss64::weights();
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] > 0.0) {
            rule.nodes.push_back(mid - half * xs[i]);
            rule.weights.push_back(half * ws[i]);
        }
        rule.nodes.push_back(mid + half * xs[i]);
        rule.weights.push_back(half * ws[i]);
    }
}

}  // namespace

Rule gauss64(double lo, double hi) {
    Rule rule;
    rule.nodes.reserve(64);
    rule.weights.reserve(64);
    append_mapped(rule, lo, hi);
    return rule;
}

Rule gauss64_piecewise(double lo, double hi, std::span<const double> breakpoints) {
    std::vector<double> cuts{lo};
    for (double b : breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    Rule rule;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) append_mapped(rule, cuts[i], cuts[i + 1]);
    return rule;
}

double integrate(const Rule& rule, const std::function<double(double)>& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(rule.nodes[i]);
    return acc;
}

double integrate_adaptive(const std::function<double(double)>& f, double lo,
                          double hi, double tol) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    return GK::integrate(f, lo, hi, 15, tol);
}

}  // namespace itad::quad
