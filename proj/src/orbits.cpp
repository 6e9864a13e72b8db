#include "itad/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "itad/errors.hpp"
#include "itad/lambertw.hpp"

namespace itad {

namespace {

constexpr double kConvergeTol = 1e-12;

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

struct Rates {
    double gain = 0.0;  // nu(q_l) + s
    double loss = 0.0;  // nu(r_m) + r
};

Rates rates_at(const OrbitConfig& cfg, double u) {
    Rates out;
    double g = mean_flux_q(cfg.law, cfg.kernel, cfg.l, u, cfg.self_interaction);
    if (cfg.s) g += *cfg.s;
    double l = cfg.m ? mean_flux_r(cfg.law, cfg.kernel, *cfg.m, u,
                                   cfg.self_interaction)
                     : 0.0;
    if (cfg.r) l += *cfg.r;
    out.gain = clamp01(g);
    out.loss = clamp01(l);
    return out;
}

// One increment of the mean-field recursion in the [0,1]-exact form.
double step(const OrbitConfig& cfg, double xi, OrbitStep* diag = nullptr) {
    const Rates rt = rates_at(cfg, xi);
    if (diag) {
        diag->gain = rt.gain * (1.0 - xi);
        diag->loss = rt.loss * xi;
    }
    return rt.gain * (1.0 - xi) + (1.0 - rt.loss) * xi;
}

}  // namespace

void OrbitConfig::validate() const {
    if (!(xi0 >= 0.0 && xi0 <= 1.0))
        throw ConfigError("orbit xi0 must lie in [0,1]");
    if (n_steps < 0) throw ConfigError("orbit n_steps must be >= 0");
    if (r && !(*r >= 0.0 && *r <= 1.0))
        throw ConfigError("external deactivation r must lie in [0,1]");
    if (s && !(*s >= 0.0 && *s <= 1.0))
        throw ConfigError("external activation s must lie in [0,1]");
    if (!r && !s) return;
    // Mixed mode: the incremented rates must stay probabilities everywhere.
    double sup_gain = 0.0, sup_loss = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double u = double(i) / 1000.0;
        double g = mean_flux_q(law, kernel, l, u, self_interaction);
        if (s) g += *s;
        double lo = m ? mean_flux_r(law, kernel, *m, u, self_interaction) : 0.0;
        if (r) lo += *r;
        sup_gain = std::max(sup_gain, g);
        sup_loss = std::max(sup_loss, lo);
    }
    if (sup_gain > 1.0 + 1e-12)
        throw ConfigError("orbit validity violated: sup(nu(q)+s) = " +
                          std::to_string(sup_gain) + " > 1");
    if (sup_loss > 1.0 + 1e-12)
        throw ConfigError("orbit validity violated: sup(nu(r)+r) = " +
                          std::to_string(sup_loss) + " > 1");
}

OrbitTrace orbit(const OrbitConfig& cfg) {
    cfg.validate();
    if (cfg.renormalize) return chaotic_orbit(cfg).trace;

    OrbitTrace tr;
    tr.xi.reserve(cfg.n_steps + 1);
    tr.xi.push_back(cfg.xi0);
    double xi = cfg.xi0;
    for (long n = 0; n < cfg.n_steps; ++n) {
        OrbitStep diag;
        const double next = step(cfg, xi, &diag);
        tr.fluxes.push_back(diag);
        if (std::abs(next - xi) < kConvergeTol && !tr.converged) {
            tr.converged = true;
            tr.fixed_point = next;
        }
        xi = next;
        tr.xi.push_back(xi);
    }
    return tr;
}

namespace {

SweepEntry converge(const OrbitConfig& cfg, double xi_start) {
    SweepEntry e;
    double xi = xi_start;
    for (long n = 0; n < cfg.max_steps; ++n) {
        const double next = step(cfg, xi);
        if (std::abs(next - xi) < kConvergeTol) {
            e.fixed_point = next;
            e.converged = true;
            return e;
        }
        xi = next;
    }
    // Cap reached: scan the next 1000 iterates for a short cycle. A
    // "period-1 cycle" is just slow convergence and is reported as such.
    std::vector<double> window;
    window.reserve(1000);
    for (int n = 0; n < 1000; ++n) {
        xi = step(cfg, xi);
        window.push_back(xi);
    }
    e.fixed_point = xi;
    for (int p = 1; p <= 100; ++p) {
        bool cycle = true;
        for (std::size_t i = window.size() - std::size_t(p) - 200;
             i + std::size_t(p) < window.size(); ++i) {
            if (std::abs(window[i + std::size_t(p)] - window[i]) > 1e-10) {
                cycle = false;
                break;
            }
        }
        if (cycle) {
            if (p == 1) {
                e.converged = true;
            } else {
                e.period = p;
            }
            break;
        }
    }
    return e;
}

OrbitConfig with_parameter(const OrbitConfig& base, SweepParameter which,
                           double value) {
    OrbitConfig cfg = base;
    switch (which) {
        case SweepParameter::r: cfg.r = value; break;
        case SweepParameter::s: cfg.s = value; break;
        case SweepParameter::m: cfg.m = Threshold(std::int64_t(value)); break;
        case SweepParameter::l: cfg.l = Threshold(std::int64_t(value)); break;
    }
    return cfg;
}

}  // namespace

std::vector<SweepEntry> fixed_point_sweep(const OrbitConfig& config,
                                          SweepParameter parameter,
                                          const std::vector<double>& values,
                                          bool warm_start) {
    std::vector<SweepEntry> out;
    out.reserve(values.size());
    double seed = config.xi0;
    for (double v : values) {
        const OrbitConfig cfg = with_parameter(config, parameter, v);
        cfg.validate();
        SweepEntry e = converge(cfg, warm_start ? seed : config.xi0);
        e.value = v;
        if (warm_start) seed = e.fixed_point;
        out.push_back(e);
    }
    return out;
}

namespace {

double map_base(const CountingLaw& law, const Kernel& kernel, Threshold l,
                bool self_interaction, double u) {
    return mean_flux_q(law, kernel, l, u, self_interaction) * (1.0 - u);
}

}  // namespace

ChaosFactor chaos_factor(const CountingLaw& law, const Kernel& kernel,
                         Threshold l, bool self_interaction) {
    if (l.is_infinite())
        throw NumericError("chaos factor undefined: activation flux is zero");

    const auto h = [&](double u) {
        return map_base(law, kernel, l, self_interaction, u);
    };

    // Coarse scan, then golden-section refinement around the best node.
    const int kScan = 10'000;
    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i <= kScan; ++i) {
        const double u = double(i) / double(kScan);
        const double v = h(u);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double lo = double(std::max(0, best - 1)) / double(kScan);
    double hi = double(std::min(kScan, best + 1)) / double(kScan);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = h(c), fd = h(d);
    while (hi - lo > 1e-10) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = h(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = h(d);
        }
    }
    const double u_star = 0.5 * (lo + hi);
    const double sup = std::max(best_val, h(u_star));
    if (!(sup > 0.0))
        throw NumericError("chaos factor undefined: activation flux is zero");

    ChaosFactor cf;
    cf.u_star = u_star;
    cf.wp = 1.0 / sup;

    if (law.kind() == CountingLaw::Kind::poisson &&
        kernel.family() == Kernel::Family::decentral && !l.is_infinite() &&
        l.value() == 1 && self_interaction && kernel.p() < 1.0) {
        const double cp = law.rate() * kernel.p();
        const double w = lambert_w0(std::exp(cp + 1.0) / (1.0 - kernel.p()));
        const double closed = cp * w / ((w - 1.0) * (w - 1.0));
        cf.closed_form = closed;
        if (std::abs(closed - cf.wp) > 1e-9)
            throw NumericError(
                "chaos factor mismatch: numeric sup " + std::to_string(cf.wp) +
                " vs product-log form " + std::to_string(closed));
    }
    return cf;
}

ChaoticOrbit chaotic_orbit(const OrbitConfig& cfg) {
    ChaoticOrbit out;
    const ChaosFactor cf =
        chaos_factor(cfg.law, cfg.kernel, cfg.l, cfg.self_interaction);
    out.wp = cf.wp;

    const auto map = [&](double u) {
        return clamp01(cf.wp *
                       map_base(cfg.law, cfg.kernel, cfg.l, cfg.self_interaction, u));
    };

    out.trace.xi.push_back(cfg.xi0);
    double xi = cfg.xi0;
    for (long n = 0; n < cfg.n_steps; ++n) {
        const double next = map(xi);
        out.trace.fluxes.push_back({next, xi});
        xi = next;
        out.trace.xi.push_back(xi);
    }

    out.map.u.reserve(1001);
    out.map.image.reserve(1001);
    for (int i = 0; i <= 1000; ++i) {
        const double u = double(i) / 1000.0;
        out.map.u.push_back(u);
        out.map.image.push_back(map(u));
    }
    return out;
}

std::vector<std::pair<double, long>> iterations_to_tolerance(
    const OrbitConfig& config, double epsilon,
    const std::vector<double>& initial_grid) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ConfigError("tolerance must lie in (0,1)");
    constexpr long kCap = 1'000'000;
    std::vector<std::pair<double, long>> out;
    out.reserve(initial_grid.size());
    for (double xi0 : initial_grid) {
        double xi = xi0;
        long n = 0;
        while (1.0 - xi >= epsilon && n < kCap) {
            xi = step(config, xi);
            ++n;
        }
        out.emplace_back(xi0, (1.0 - xi < epsilon) ? n : -1);
    }
    return out;
}

}  // namespace itad
