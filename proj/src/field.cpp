#include "itad/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "itad/errors.hpp"
#include "itad/simd/vmath.hpp"

namespace itad {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

std::vector<double> uniform_grid(int n) {
    std::vector<double> xs(n);
    for (int j = 0; j < n; ++j) xs[j] = double(j) / double(n - 1);
    return xs;
}

// Per-node kernel data the solvers reuse every stage.
struct NodeData {
    std::vector<double> nu_fx;
    std::vector<double> fxx;
};

NodeData node_data(const Kernel& kernel, const std::vector<double>& xs) {
    NodeData nd;
    nd.nu_fx.reserve(xs.size());
    nd.fxx.reserve(xs.size());
    for (double x : xs) {
        nd.nu_fx.push_back(kernel.marginal(x));
        nd.fxx.push_back(kernel.eval(x, x));
    }
    return nd;
}

// Effective fluxes over all nodes at activation levels u (clamped into
// [0,1] for evaluation; RK4 stages may poke slightly outside).
struct FluxEval {
    const FieldConfig* cfg;
    const NodeData* nd;
    mutable std::vector<double> qv, rv, uc;

    void eval(const std::vector<double>& u) const {
        const std::size_t n = u.size();
        qv.resize(n);
        rv.resize(n);
        uc.resize(n);
        for (std::size_t j = 0; j < n; ++j) uc[j] = clamp01(u[j]);
        flux_q_batch(cfg->law, cfg->flux.l, nd->nu_fx, nd->fxx, uc,
                     cfg->flux.self_interaction, qv);
        flux_r_batch(cfg->law, cfg->flux.m, nd->nu_fx, nd->fxx, uc,
                     cfg->flux.self_interaction, rv);
        for (std::size_t j = 0; j < n; ++j) {
            qv[j] = clamp01(cfg->flux.alpha * qv[j] + cfg->flux.a);
            rv[j] = clamp01(cfg->flux.beta * rv[j] + cfg->flux.b);
        }
    }

    // dP/dt = q_eff (1-P) - r_eff P
    void derivative(const std::vector<double>& u, std::vector<double>& out) const {
        eval(u);
        out.resize(u.size());
        for (std::size_t j = 0; j < u.size(); ++j)
            out[j] = qv[j] * (1.0 - u[j]) - rv[j] * u[j];
    }
};

std::vector<double> initial_condition(const FieldConfig& cfg,
                                      const std::vector<double>& xs) {
    std::vector<double> p0(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j)
        p0[j] = induction_p(cfg.law, cfg.kernel, cfg.flux.k, xs[j],
                            cfg.flux.self_interaction);
    return p0;
}

int auto_stride(long total_steps, int store_every) {
    if (store_every > 0) return store_every;
    return int(std::max<long>(1, (total_steps + 999) / 1000));
}

// Range policy for the reaction-only solvers: dust inside +-1e-9 of [0,1]
// is clamped and counted, anything worse is a flux/integration bug.
void enforce_range(std::vector<double>& u, double t, long& clamp_count) {
    for (double& v : u) {
        if (v < 0.0 || v > 1.0) {
            if (v < -1e-9 || v > 1.0 + 1e-9)
                throw NumericError("field value " + std::to_string(v) +
                                   " escaped [0,1] at t=" + std::to_string(t));
            v = clamp01(v);
            ++clamp_count;
        }
    }
}

}  // namespace

void FieldConfig::validate() const {
    if (grid_points < 2) throw ConfigError("grid_points must be >= 2");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (dt > t_end) throw ConfigError("dt must not exceed t_end");
    if (c1 < 0.0) throw ConfigError("transport velocity c1 must be >= 0");
    if (!(c2 > 0.0 && c3 > 0.0)) throw ConfigError("energy constants must be positive");
    if (c1 > 0.0) {
        const double dx = 1.0 / double(grid_points - 1);
        const double cfl = c1 * dt / dx;
        if (cfl > 1.0 + 1e-12)
            throw ConfigError("CFL ratio c1*dt/dx = " + std::to_string(cfl) +
                              " exceeds 1");
    }
    validate_flux(law, kernel, flux);
}

FieldSolution solve_spatiotemporal(const FieldConfig& cfg) {
    cfg.validate();
    if (cfg.mode == FieldConfig::Mode::discrete) return solve_discrete(cfg);

    FieldSolution sol;
    sol.xs = uniform_grid(cfg.grid_points);
    const NodeData nd = node_data(cfg.kernel, sol.xs);
    const FluxEval fe{&cfg, &nd, {}, {}, {}};

    const long steps = long(std::ceil(cfg.t_end / cfg.dt - 1e-12));
    const int stride = auto_stride(steps, cfg.store_every);
    const std::size_t n = sol.xs.size();

    std::vector<double> u = initial_condition(cfg, sol.xs);
    std::vector<double> k1, k2, k3, k4, tmp(n);

    std::vector<std::vector<double>> rows;
    rows.push_back(u);
    sol.times.push_back(0.0);

    for (long s = 0; s < steps; ++s) {
        const double t = double(s) * cfg.dt;
        fe.derivative(u, k1);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = u[j] + 0.5 * cfg.dt * k1[j];
        fe.derivative(tmp, k2);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = u[j] + 0.5 * cfg.dt * k2[j];
        fe.derivative(tmp, k3);
        for (std::size_t j = 0; j < n; ++j) tmp[j] = u[j] + cfg.dt * k3[j];
        fe.derivative(tmp, k4);
        for (std::size_t j = 0; j < n; ++j)
            u[j] += cfg.dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        enforce_range(u, t + cfg.dt, sol.clamp_count);
        if ((s + 1) % stride == 0 || s + 1 == steps) {
            rows.push_back(u);
            sol.times.push_back(double(s + 1) * cfg.dt);
        }
    }

    sol.p.resize(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), sol.p.row(i));
    return sol;
}

FieldSolution solve_discrete(const FieldConfig& cfg) {
    if (cfg.grid_points < 2) throw ConfigError("grid_points must be >= 2");
    validate_flux(cfg.law, cfg.kernel, cfg.flux);

    FieldSolution sol;
    sol.xs = uniform_grid(cfg.grid_points);
    const NodeData nd = node_data(cfg.kernel, sol.xs);
    const FluxEval fe{&cfg, &nd, {}, {}, {}};

    const long steps = long(cfg.t_end);
    const std::size_t n = sol.xs.size();
    std::vector<double> u = initial_condition(cfg, sol.xs);

    sol.p.resize(std::size_t(steps) + 1, n);
    std::copy(u.begin(), u.end(), sol.p.row(0));
    sol.times.resize(steps + 1);
    for (long s = 0; s <= steps; ++s) sol.times[s] = double(s);

    for (long s = 0; s < steps; ++s) {
        fe.eval(u);
        // q(1-P) + (1-r)P: both addends are in [0, 1-P] and [0, P], so the
        // update cannot leave [0,1] even in floating point.
        for (std::size_t j = 0; j < n; ++j)
            u[j] = fe.qv[j] * (1.0 - u[j]) + (1.0 - fe.rv[j]) * u[j];
        std::copy(u.begin(), u.end(), sol.p.row(s + 1));
    }
    return sol;
}

TemporalSolution solve_temporal(const FieldConfig& cfg) {
    if (cfg.mode == FieldConfig::Mode::continuous) cfg.validate();
    else validate_flux(cfg.law, cfg.kernel, cfg.flux);

    const auto qbar = [&](double u) {
        return clamp01(cfg.flux.alpha *
                           mean_flux_q(cfg.law, cfg.kernel, cfg.flux.l, clamp01(u),
                                       cfg.flux.self_interaction) +
                       cfg.flux.a);
    };
    const auto rbar = [&](double u) {
        return clamp01(cfg.flux.beta *
                           mean_flux_r(cfg.law, cfg.kernel, cfg.flux.m, clamp01(u),
                                       cfg.flux.self_interaction) +
                       cfg.flux.b);
    };
    const auto deriv = [&](double u) { return qbar(u) * (1.0 - u) - rbar(u) * u; };

    TemporalSolution ts;
    double u = mean_induction(cfg.law, cfg.kernel, cfg.flux.k,
                              cfg.flux.self_interaction);
    ts.times.push_back(0.0);
    ts.values.push_back(u);

    if (cfg.mode == FieldConfig::Mode::discrete) {
        const long steps = long(cfg.t_end);
        for (long s = 0; s < steps; ++s) {
            u = qbar(u) * (1.0 - u) + (1.0 - rbar(u)) * u;
            ts.times.push_back(double(s + 1));
            ts.values.push_back(u);
        }
        return ts;
    }

    const long steps = long(std::ceil(cfg.t_end / cfg.dt - 1e-12));
    const int stride = auto_stride(steps, cfg.store_every);
    long clamps = 0;
    for (long s = 0; s < steps; ++s) {
        const double k1 = deriv(u);
        const double k2 = deriv(u + 0.5 * cfg.dt * k1);
        const double k3 = deriv(u + 0.5 * cfg.dt * k2);
        const double k4 = deriv(u + cfg.dt * k3);
        u += cfg.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        std::vector<double> one{u};
        enforce_range(one, double(s + 1) * cfg.dt, clamps);
        u = one[0];
        if ((s + 1) % stride == 0 || s + 1 == steps) {
            ts.times.push_back(double(s + 1) * cfg.dt);
            ts.values.push_back(u);
        }
    }
    return ts;
}

FieldSolution solve_transport(const FieldConfig& cfg) {
    if (cfg.c1 == 0.0) return solve_spatiotemporal(cfg);
    cfg.validate();

    FieldSolution sol;
    sol.xs = uniform_grid(cfg.grid_points);
    const NodeData nd = node_data(cfg.kernel, sol.xs);
    const FluxEval fe{&cfg, &nd, {}, {}, {}};

    const double dx = 1.0 / double(cfg.grid_points - 1);
    const double courant = cfg.c1 * cfg.dt / dx;
    const long steps = long(std::ceil(cfg.t_end / cfg.dt - 1e-12));
    const int stride = auto_stride(steps, cfg.store_every);
    const std::size_t n = sol.xs.size();

    std::vector<double> u = initial_condition(cfg, sol.xs);
    std::vector<double> next(n);

    std::vector<std::vector<double>> rows;
    rows.push_back(u);
    sol.times.push_back(0.0);

    for (long s = 0; s < steps; ++s) {
        fe.eval(u);
        // Inflow boundary: reaction-only node.
        next[0] = u[0] + cfg.dt * (fe.qv[0] * (1.0 - u[0]) - fe.rv[0] * u[0]);
        for (std::size_t j = 1; j < n; ++j) {
            const double reaction = fe.qv[j] * (1.0 - u[j]) - fe.rv[j] * u[j];
            next[j] = u[j] - courant * (u[j] - u[j - 1]) + cfg.dt * reaction;
        }
        u.swap(next);
        for (double v : u) {
            if (!(std::abs(v) <= 2.0)) {
                sol.blew_up = true;
                sol.blowup_time = double(s + 1) * cfg.dt;
                break;
            }
        }
        if ((s + 1) % stride == 0 || s + 1 == steps || sol.blew_up) {
            rows.push_back(u);
            sol.times.push_back(double(s + 1) * cfg.dt);
        }
        if (sol.blew_up) break;
    }

    sol.p.resize(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), sol.p.row(i));
    return sol;
}

void derived_fields(FieldSolution& sol, const FieldConfig& cfg) {
    const std::size_t nt = sol.p.rows;
    const std::size_t nx = sol.p.cols;
    if (nt == 0 || nx < 2) return;
    const double dx = sol.xs[1] - sol.xs[0];

    // dP/dx: central differences, one-sided at the boundaries.
    Grid dpdx;
    dpdx.resize(nt, nx);
    for (std::size_t i = 0; i < nt; ++i) {
        const double* p = sol.p.row(i);
        double* d = dpdx.row(i);
        d[0] = (p[1] - p[0]) / dx;
        for (std::size_t j = 1; j + 1 < nx; ++j)
            d[j] = (p[j + 1] - p[j - 1]) / (2.0 * dx);
        d[nx - 1] = (p[nx - 1] - p[nx - 2]) / dx;
    }

    // Q(t,x) = c1 * int_0^t dP/dx dt', trapezoid over stored rows.
    sol.q.resize(nt, nx);
    for (std::size_t i = 1; i < nt; ++i) {
        const double half_dt = 0.5 * (sol.times[i] - sol.times[i - 1]);
        for (std::size_t j = 0; j < nx; ++j)
            sol.q.at(i, j) = sol.q.at(i - 1, j) +
                             half_dt * cfg.c1 * (dpdx.at(i, j) + dpdx.at(i - 1, j));
    }

    // Energy density: dQ/dt is c1*dP/dx by definition; dQ/dx by differences.
    sol.g.resize(nt, nx);
    Grid ed;
    ed.resize(nt, nx);
    for (std::size_t i = 0; i < nt; ++i) {
        const double* qrow = sol.q.row(i);
        for (std::size_t j = 0; j < nx; ++j) {
            const double qt = cfg.c1 * dpdx.at(i, j);
            double qx;
            if (j == 0)
                qx = (qrow[1] - qrow[0]) / dx;
            else if (j + 1 == nx)
                qx = (qrow[nx - 1] - qrow[nx - 2]) / dx;
            else
                qx = (qrow[j + 1] - qrow[j - 1]) / (2.0 * dx);
            ed.at(i, j) = 0.5 * cfg.c2 * qt * qt + 0.5 * cfg.c3 * qx * qx;
        }
    }
    for (std::size_t i = 1; i < nt; ++i) {
        const double half_dt = 0.5 * (sol.times[i] - sol.times[i - 1]);
        for (std::size_t j = 0; j < nx; ++j)
            sol.g.at(i, j) = sol.g.at(i - 1, j) +
                             half_dt * (ed.at(i, j) + ed.at(i - 1, j));
    }

    // Entropy H = P log(1/P), 0 at P in {0,1}.
    sol.h.resize(nt, nx);
    for (std::size_t i = 0; i < nt; ++i) {
        std::vector<double> row(sol.p.row(i), sol.p.row(i) + nx);
        for (double& v : row) v = clamp01(v);
        simd::entropy_span(row, std::span<double>(sol.h.row(i), nx));
    }

    // Frontier: level set P = 1/2 per stored row.
    sol.frontier.clear();
    for (std::size_t i = 0; i < nt; ++i) {
        const double* p = sol.p.row(i);
        int branch = 0;
        for (std::size_t j = 0; j < nx; ++j) {
            if (p[j] == 0.5) {
                sol.frontier.push_back({sol.times[i], sol.xs[j], branch++});
            } else if (j + 1 < nx) {
                const double a = p[j] - 0.5;
                const double b = p[j + 1] - 0.5;
                if (a * b < 0.0) {
                    const double x =
                        sol.xs[j] + dx * a / (p[j] - p[j + 1]);
                    sol.frontier.push_back({sol.times[i], x, branch++});
                }
            }
        }
    }
}

}  // namespace itad
