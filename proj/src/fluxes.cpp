#include "itad/fluxes.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "itad/errors.hpp"
#include "itad/quadrature.hpp"
#include "itad/simd/vmath.hpp"

namespace itad {

Threshold::Threshold(std::int64_t v) : v_(v) {
    if (v < 1) throw ConfigError("threshold must be >= 1 (or infinite)");
}

std::string Threshold::str() const {
    return is_infinite() ? "inf" : std::to_string(v_);
}

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// tail(l) + pmf(l-1) * fxx for the thinned degree law. Clamped: the exact
// value is a probability, so only rounding dust is removed, and the
// discrete-time update P' = q(1-P) + (1-r)P then preserves [0,1] exactly.
double threshold_mass(const CountingLaw& thinned, std::int64_t level,
                      double fxx, bool self_interaction) {
    double val = thinned.tail(level);
    if (self_interaction) val += thinned.pmf(level - 1) * fxx;
    return clamp01(val);
}

double flux_core(const CountingLaw& law, const Kernel& kernel, Threshold t,
                 double x, double thin_fraction, bool self_interaction) {
    if (t.is_infinite()) return 0.0;
    const double a = clamp01(kernel.marginal(x) * thin_fraction);
    const CountingLaw d = law.thinned(a);
    return threshold_mass(d, t.value(), kernel.eval(x, x), self_interaction);
}

}  // namespace

DegreeStats degree_stats(const CountingLaw& law, const Kernel& kernel, double x,
                         double y) {
    const double c = law.mean();
    const double excess = law.variance() - c;  // delta^2 - c
    const double mx = kernel.marginal(x);
    const double my = kernel.marginal(y);

    DegreeStats s;
    s.mean_x = c * mx;
    s.mean_y = c * my;
    s.variance_x = c * mx + excess * mx * mx;
    s.variance_y = c * my + excess * my * my;
    if (x == y) {
        s.covariance = s.variance_x;
    } else {
        s.covariance = c * kernel.product_marginal(x, y) + excess * mx * my;
    }
    if (s.variance_x <= 0.0 || s.variance_y <= 0.0) {
        s.degenerate = true;
        s.correlation = 0.0;
    } else if (x == y) {
        s.correlation = 1.0;
    } else {
        s.correlation = s.covariance / std::sqrt(s.variance_x * s.variance_y);
    }
    return s;
}

double induction_p(const CountingLaw& law, const Kernel& kernel, std::int64_t k,
                   double x, bool self_interaction) {
    if (k < 1) throw ConfigError("induction threshold k must be >= 1");
    return flux_core(law, kernel, Threshold(k), x, 1.0, self_interaction);
}

double flux_q(const CountingLaw& law, const Kernel& kernel, Threshold l,
              double x, double u, bool self_interaction) {
    return flux_core(law, kernel, l, x, u, self_interaction);
}

double flux_r(const CountingLaw& law, const Kernel& kernel, Threshold m,
              double x, double u, bool self_interaction) {
    return flux_core(law, kernel, m, x, 1.0 - u, self_interaction);
}

namespace {

// Batched tail/pmf threshold mass for Poisson degree laws: one vectorized
// exp over the node array, then a fixed-trip-count recurrence. Matches the
// pointwise path to rounding.
void poisson_threshold_batch(double rate, std::int64_t level,
                             std::span<const double> thin,
                             std::span<const double> fxx, bool self_interaction,
                             std::span<double> out) {
    const std::size_t n = thin.size();
    std::vector<double> lambda(n), term(n), cum(n);
    for (std::size_t j = 0; j < n; ++j) lambda[j] = -(rate * thin[j]);
    simd::exp_span(lambda, std::span<double>(term));
    for (std::size_t j = 0; j < n; ++j) {
        lambda[j] = -lambda[j];
        cum[j] = term[j];
    }
    for (std::int64_t i = 1; i < level; ++i) {
        const double inv = 1.0 / double(i);
        for (std::size_t j = 0; j < n; ++j) {
            term[j] *= lambda[j] * inv;
            cum[j] += term[j];
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        double v = 1.0 - cum[j];
        if (self_interaction) v += term[j] * fxx[j];
        out[j] = clamp01(v);
    }
}

void flux_batch_impl(const CountingLaw& law, Threshold t,
                     std::span<const double> nu_fx, std::span<const double> fxx,
                     std::span<const double> u, bool mirror,
                     bool self_interaction, std::span<double> out) {
    const std::size_t n = nu_fx.size();
    if (t.is_infinite()) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    auto u_at = [&](std::size_t j) {
        const double v = u.size() == 1 ? u[0] : u[j];
        return mirror ? 1.0 - v : v;
    };

    if (law.kind() == CountingLaw::Kind::poisson && law.rate() < 700.0) {
        std::vector<double> tf(n);
        for (std::size_t j = 0; j < n; ++j) tf[j] = clamp01(nu_fx[j] * u_at(j));
        poisson_threshold_batch(law.rate(), t.value(), tf, fxx,
                                self_interaction, out);
        return;
    }

    for (std::size_t j = 0; j < n; ++j) {
        const double a = clamp01(nu_fx[j] * u_at(j));
        const CountingLaw d = law.thinned(a);
        out[j] = threshold_mass(d, t.value(), fxx[j], self_interaction);
    }
}

}  // namespace

void flux_q_batch(const CountingLaw& law, Threshold l,
                  std::span<const double> nu_fx, std::span<const double> fxx,
                  std::span<const double> u, bool self_interaction,
                  std::span<double> out) {
    flux_batch_impl(law, l, nu_fx, fxx, u, false, self_interaction, out);
}

void flux_r_batch(const CountingLaw& law, Threshold m,
                  std::span<const double> nu_fx, std::span<const double> fxx,
                  std::span<const double> u, bool self_interaction,
                  std::span<double> out) {
    flux_batch_impl(law, m, nu_fx, fxx, u, true, self_interaction, out);
}

namespace {

double mean_threshold_flux(const CountingLaw& law, const Kernel& kernel,
                           Threshold t, double u, bool mirror,
                           bool self_interaction) {
    if (t.is_infinite()) return 0.0;
    const double uf = mirror ? 1.0 - u : u;
    if (kernel.spatially_constant())
        return flux_core(law, kernel, t, 0.5, uf, self_interaction);

    const auto bps = kernel.marginal_breakpoints();
    const quad::Rule rule = bps.empty()
                                ? quad::gauss64(0.0, 1.0)
                                : quad::gauss64_piecewise(0.0, 1.0, bps);
    const std::size_t n = rule.nodes.size();
    std::vector<double> nu_fx(n), fxx(n), vals(n);
    for (std::size_t j = 0; j < n; ++j) {
        nu_fx[j] = kernel.marginal(rule.nodes[j]);
        fxx[j] = kernel.eval(rule.nodes[j], rule.nodes[j]);
    }
    const double ub[1] = {uf};
    flux_batch_impl(law, t, nu_fx, fxx, std::span<const double>(ub, 1), false,
                    self_interaction, vals);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += rule.weights[j] * vals[j];
    return acc;
}

}  // namespace

double mean_induction(const CountingLaw& law, const Kernel& kernel,
                      std::int64_t k, bool self_interaction) {
    if (k < 1) throw ConfigError("induction threshold k must be >= 1");
    return mean_threshold_flux(law, kernel, Threshold(k), 1.0, false,
                               self_interaction);
}

double mean_flux_q(const CountingLaw& law, const Kernel& kernel, Threshold l,
                   double u, bool self_interaction) {
    return mean_threshold_flux(law, kernel, l, u, false, self_interaction);
}

double mean_flux_r(const CountingLaw& law, const Kernel& kernel, Threshold m,
                   double u, bool self_interaction) {
    return mean_threshold_flux(law, kernel, m, u, true, self_interaction);
}

void validate_flux(const CountingLaw& law, const Kernel& kernel,
                   const FluxSpec& spec) {
    if (spec.k < 1) throw ConfigError("induction threshold k must be >= 1");
    if (spec.a < 0.0 || spec.b < 0.0 || spec.alpha < 0.0 || spec.beta < 0.0)
        throw ConfigError("forcings and overloadings must be non-negative");

    double sup_q = 0.0, sup_r = 0.0;
    for (int ix = 0; ix <= 100; ++ix) {
        const double x = double(ix) / 100.0;
        for (int iu = 0; iu <= 100; ++iu) {
            const double u = double(iu) / 100.0;
            if (!spec.l.is_infinite() || spec.a > 0.0)
                sup_q = std::max(sup_q, spec.alpha * flux_q(law, kernel, spec.l, x, u,
                                                            spec.self_interaction) +
                                            spec.a);
            if (!spec.m.is_infinite() || spec.b > 0.0)
                sup_r = std::max(sup_r, spec.beta * flux_r(law, kernel, spec.m, x, u,
                                                           spec.self_interaction) +
                                            spec.b);
        }
        if (kernel.spatially_constant()) break;  // x-independent
    }
    const double tol = 1e-12;
    if (sup_q > 1.0 + tol)
        throw ConfigError("flux validity violated: sup(alpha*q+a) = " +
                          std::to_string(sup_q) + " > 1");
    if (sup_r > 1.0 + tol)
        throw ConfigError("flux validity violated: sup(beta*r+b) = " +
                          std::to_string(sup_r) + " > 1");
}

double effective_q(const CountingLaw& law, const Kernel& kernel,
                   const FluxSpec& spec, double x, double u) {
    return spec.alpha * flux_q(law, kernel, spec.l, x, u, spec.self_interaction) +
           spec.a;
}

double effective_r(const CountingLaw& law, const Kernel& kernel,
                   const FluxSpec& spec, double x, double u) {
    return spec.beta * flux_r(law, kernel, spec.m, x, u, spec.self_interaction) +
           spec.b;
}

}  // namespace itad
