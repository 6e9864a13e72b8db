#include "itad/commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "itad/csv.hpp"
#include "itad/errors.hpp"
#include "itad/field.hpp"
#include "itad/graphsim.hpp"
#include "itad/orbits.hpp"
#include "itad/svg.hpp"

namespace itad {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(clock::now() - start_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

fs::path output_dir(const RunConfig& cfg, const CommandOptions& opts) {
    const fs::path dir = opts.out_dir ? *opts.out_dir : cfg.output.directory;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());
    return dir;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const RunConfig& cfg, const json& extra, double wall_s) {
    json doc;
    doc["command"] = command;
    doc["version"] = kVersion;
    doc["wall_time_s"] = wall_s;
    doc["config"] = resolved_config_json(cfg);
    for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = *it;
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw IoError("cannot write manifest.json");
    out << doc.dump(2) << '\n';
    if (out.fail()) throw IoError("failed writing manifest.json");
}

const CountingLaw& need_law(const RunConfig& cfg) {
    if (!cfg.law) throw ConfigError("this command requires a 'law' section");
    return *cfg.law;
}

const Kernel& need_kernel(const RunConfig& cfg) {
    if (cfg.kernels.empty())
        throw ConfigError("this command requires a 'kernel' section");
    if (cfg.kernels.size() != 1)
        throw ConfigError("this command takes exactly one kernel");
    return cfg.kernels[0];
}

FieldConfig make_field_config(const RunConfig& cfg) {
    FieldConfig fc{need_law(cfg), need_kernel(cfg), cfg.flux};
    fc.grid_points = cfg.solver.grid_points;
    fc.t_end = cfg.solver.t_end;
    fc.dt = cfg.solver.dt;
    fc.mode = cfg.solver.mode == "discrete" ? FieldConfig::Mode::discrete
                                            : FieldConfig::Mode::continuous;
    fc.c1 = cfg.solver.c1;
    fc.c2 = cfg.solver.c2;
    fc.c3 = cfg.solver.c3;
    fc.store_every = cfg.solver.store_every;
    return fc;
}

OrbitConfig make_orbit_config(const RunConfig& cfg) {
    OrbitConfig oc{need_law(cfg), need_kernel(cfg)};
    oc.l = cfg.flux.l;
    if (!cfg.flux.m.is_infinite()) oc.m = cfg.flux.m;
    oc.r = cfg.orbit.r;
    oc.s = cfg.orbit.s;
    oc.self_interaction = cfg.flux.self_interaction;
    oc.renormalize = cfg.orbit.renormalize;
    oc.xi0 = cfg.orbit.xi0
                 ? *cfg.orbit.xi0
                 : mean_induction(*cfg.law, cfg.kernels[0], cfg.flux.k,
                                  cfg.flux.self_interaction);
    oc.n_steps = cfg.orbit.n_steps;
    return oc;
}

std::uint64_t resolve_seed(const RunConfig& cfg, const CommandOptions& opts) {
    if (opts.seed) return *opts.seed;
    if (const char* env = std::getenv("ITAD_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw ConfigError("ITAD_SEED must be an unsigned integer");
        return v;
    }
    if (cfg.mc.seed) return *cfg.mc.seed;
    throw ConfigError(
        "no seed given: set mc.seed, --seed, or ITAD_SEED (refusing silent "
        "nondeterminism)");
}

void field_csvs(const fs::path& dir, const FieldSolution& sol) {
    csv::Writer field(dir / "field.csv", {"t", "x", "P", "Q", "G", "H"});
    for (std::size_t i = 0; i < sol.p.rows; ++i) {
        for (std::size_t j = 0; j < sol.p.cols; ++j) {
            field.row({sol.times[i], sol.xs[j], sol.p.at(i, j),
                       sol.q.empty() ? 0.0 : sol.q.at(i, j),
                       sol.g.empty() ? 0.0 : sol.g.at(i, j),
                       sol.h.empty() ? 0.0 : sol.h.at(i, j)});
        }
    }
    field.close();

    csv::Writer frontier(dir / "frontier.csv", {"t", "x_cross", "branch_index"});
    for (const auto& fp : sol.frontier)
        frontier.row({fp.t, fp.x, double(fp.branch)});
    frontier.close();
}

void field_svgs(const fs::path& dir, const FieldSolution& sol) {
    std::vector<std::vector<double>> p(sol.p.rows), h(sol.p.rows);
    for (std::size_t i = 0; i < sol.p.rows; ++i) {
        p[i].assign(sol.p.row(i), sol.p.row(i) + sol.p.cols);
        h[i].assign(sol.h.row(i), sol.h.row(i) + sol.h.cols);
    }
    svg::write_heatmap(dir / "field_p.svg", sol.times, sol.xs, p,
                       "activation P(t,x)");
    svg::write_heatmap(dir / "field_h.svg", sol.times, sol.xs, h,
                       "entropy H(t,x)");
}

}  // namespace

void cmd_field(const RunConfig& cfg, const CommandOptions& opts) {
    Stopwatch sw;
    const fs::path dir = output_dir(cfg, opts);
    const FieldConfig fc = make_field_config(cfg);

    FieldSolution sol;
    if (fc.c1 > 0.0)
        sol = solve_transport(fc);
    else if (fc.mode == FieldConfig::Mode::discrete)
        sol = solve_discrete(fc);
    else
        sol = solve_spatiotemporal(fc);
    derived_fields(sol, fc);

    field_csvs(dir, sol);
    if (cfg.output.svg) field_svgs(dir, sol);

    json extra;
    extra["clamp_count"] = sol.clamp_count;
    extra["blew_up"] = sol.blew_up;
    if (sol.blew_up) extra["blowup_time"] = sol.blowup_time;
    write_manifest(dir, "field", cfg, extra, sw.seconds());
    if (!opts.quiet)
        std::cout << "field: " << sol.p.rows << " stored rows x " << sol.p.cols
                  << " nodes -> " << (dir / "field.csv").string() << "\n";
}

void cmd_orbit(const RunConfig& cfg, const CommandOptions& opts) {
    Stopwatch sw;
    const fs::path dir = output_dir(cfg, opts);
    const OrbitConfig oc = make_orbit_config(cfg);
    const OrbitTrace tr = orbit(oc);

    csv::Writer out(dir / "orbit.csv", {"step", "xi", "gain", "loss"});
    for (std::size_t n = 0; n < tr.xi.size(); ++n) {
        const double gain = n > 0 ? tr.fluxes[n - 1].gain : 0.0;
        const double loss = n > 0 ? tr.fluxes[n - 1].loss : 0.0;
        out.row({double(n), tr.xi[n], gain, loss});
    }
    out.close();

    if (cfg.output.svg) {
        svg::Series s{"xi", {}, {}};
        for (std::size_t n = 0; n < tr.xi.size(); ++n) {
            s.x.push_back(double(n));
            s.y.push_back(tr.xi[n]);
        }
        svg::write_lines(dir / "orbit.svg", {s}, "activation orbit");
    }

    json extra;
    extra["xi0"] = oc.xi0;
    extra["converged"] = tr.converged;
    if (tr.fixed_point) extra["fixed_point"] = *tr.fixed_point;
    write_manifest(dir, "orbit", cfg, extra, sw.seconds());
    if (!opts.quiet)
        std::cout << "orbit: " << tr.xi.size() - 1 << " steps, final xi = "
                  << tr.xi.back() << "\n";
}

void cmd_sweep(const RunConfig& cfg, const CommandOptions& opts) {
    Stopwatch sw;
    const fs::path dir = output_dir(cfg, opts);
    if (!cfg.orbit.sweep)
        throw ConfigError("sweep command requires an orbit.sweep section");
    const SweepSection& sc = *cfg.orbit.sweep;
    const OrbitConfig oc = make_orbit_config(cfg);

    SweepParameter param;
    if (sc.parameter == "r") param = SweepParameter::r;
    else if (sc.parameter == "s") param = SweepParameter::s;
    else if (sc.parameter == "m") param = SweepParameter::m;
    else param = SweepParameter::l;

    const auto up = fixed_point_sweep(oc, param, sc.values, sc.warm_start);

    std::vector<SweepEntry> down;
    if (sc.up_down) {
        std::vector<double> rev(sc.values.rbegin(), sc.values.rend());
        auto d = fixed_point_sweep(oc, param, rev, sc.warm_start);
        down.assign(d.rbegin(), d.rend());
    }

    std::vector<std::string> header{"value", "fp_up", "converged_up", "period_up"};
    if (sc.up_down) {
        header.insert(header.end(), {"fp_down", "converged_down", "period_down"});
    }
    csv::Writer out(dir / "sweep.csv", header);
    for (std::size_t i = 0; i < up.size(); ++i) {
        std::vector<double> row{up[i].value, up[i].fixed_point,
                                double(up[i].converged), double(up[i].period)};
        if (sc.up_down)
            row.insert(row.end(), {down[i].fixed_point, double(down[i].converged),
                                   double(down[i].period)});
        out.row(row);
    }
    out.close();

    if (cfg.output.svg) {
        std::vector<svg::Series> series;
        svg::Series u{"up", {}, {}};
        for (const auto& e : up) {
            u.x.push_back(e.value);
            u.y.push_back(e.fixed_point);
        }
        series.push_back(u);
        if (sc.up_down) {
            svg::Series d{"down", {}, {}};
            for (const auto& e : down) {
                d.x.push_back(e.value);
                d.y.push_back(e.fixed_point);
            }
            series.push_back(d);
        }
        svg::write_lines(dir / "sweep.svg", series, "fixed points vs " + sc.parameter);
    }

    write_manifest(dir, "sweep", cfg, json::object(), sw.seconds());
    if (!opts.quiet)
        std::cout << "sweep: " << up.size() << " values of " << sc.parameter
                  << (sc.up_down ? " (up+down)" : "") << "\n";
}

void cmd_chaos(const RunConfig& cfg, const CommandOptions& opts) {
    Stopwatch sw;
    const fs::path dir = output_dir(cfg, opts);
    OrbitConfig oc = make_orbit_config(cfg);
    oc.renormalize = true;
    const ChaoticOrbit co = chaotic_orbit(oc);

    csv::Writer cob(dir / "cobweb.csv", {"u", "map"});
    for (std::size_t i = 0; i < co.map.u.size(); ++i)
        cob.row({co.map.u[i], co.map.image[i]});
    cob.close();

    csv::Writer orb(dir / "orbit.csv", {"step", "xi", "gain", "loss"});
    for (std::size_t n = 0; n < co.trace.xi.size(); ++n) {
        const double gain = n > 0 ? co.trace.fluxes[n - 1].gain : 0.0;
        const double loss = n > 0 ? co.trace.fluxes[n - 1].loss : 0.0;
        orb.row({double(n), co.trace.xi[n], gain, loss});
    }
    orb.close();

    if (cfg.output.svg)
        svg::write_cobweb(dir / "cobweb.svg", co.map.u, co.map.image, co.trace.xi,
                          "renormalized transduction map");

    const ChaosFactor cf =
        chaos_factor(oc.law, oc.kernel, oc.l, oc.self_interaction);
    json extra;
    extra["wp"] = cf.wp;
    extra["u_star"] = cf.u_star;
    if (cf.closed_form) extra["wp_closed_form"] = *cf.closed_form;
    write_manifest(dir, "chaos", cfg, extra, sw.seconds());
    if (!opts.quiet) std::cout << "chaos: wp = " << cf.wp << "\n";
}

void cmd_graph_mc(const RunConfig& cfg_in, const CommandOptions& opts) {
    Stopwatch sw;
    const fs::path dir = output_dir(cfg_in, opts);
    const CountingLaw& law = need_law(cfg_in);
    if (cfg_in.kernels.empty())
        throw ConfigError("graph-mc requires 'kernel' or 'kernels'");
    const std::uint64_t seed = resolve_seed(cfg_in, opts);
    // The manifest must round-trip: bake the resolved seed into the config.
    RunConfig cfg = cfg_in;
    cfg.mc.seed = seed;

    // "seed" is the per-replicate stream index paired with the master seed.
    csv::Writer reps(dir / "replicates.csv",
                     {"kernel", "seed", "K", "V_k", "iterations", "terminal"});
    json summary = json::array();
    for (std::size_t ki = 0; ki < cfg.kernels.size(); ++ki) {
        const Kernel& kernel = cfg.kernels[ki];
        const auto rows =
            run_replicates(law, kernel, cfg.flux.k, cfg.flux.l,
                           cfg.mc.replicates, seed + ki, cfg.mc.threads);
        for (const auto& r : rows)
            reps.row({double(ki), double(r.replicate), double(r.count),
                      double(r.active), double(r.iterations), double(r.terminal)});
        const ReplicateSummary s = summarize(rows);
        summary.push_back({{"kernel", kernel_json(kernel)},
                           {"mean_active", s.mean_active},
                           {"var_active", s.var_active},
                           {"mean_count", s.mean_count}});
        if (cfg.mc.emit_edges) {
            PointSystem sys = sample_graph(law, kernel, seed + ki, 0);
            csv::Writer edges(
                dir / ("edges_k" + std::to_string(ki) + ".csv"), {"i", "j"});
            for (std::size_t i = 0; i < std::size_t(sys.count); ++i)
                for (std::size_t j = i; j < std::size_t(sys.count); ++j)
                    if (sys.adjacency.get(i, j)) edges.row({double(i), double(j)});
            edges.close();
        }
        if (!opts.quiet) {
            const ReplicateSummary& ss = s;
            std::cout << "graph-mc kernel " << kernel.family_name()
                      << ": mean V_k = " << ss.mean_active
                      << ", var = " << ss.var_active << "\n";
        }
    }
    reps.close();

    std::ofstream sj(dir / "summary.json", std::ios::binary);
    if (!sj) throw IoError("cannot write summary.json");
    sj << summary.dump(2) << '\n';
    if (sj.fail()) throw IoError("failed writing summary.json");

    json extra;
    extra["seed"] = seed;
    write_manifest(dir, "graph-mc", cfg, extra, sw.seconds());
}

void cmd_calibrate(const RunConfig& cfg, const CommandOptions&) {
    if (!cfg.calibration)
        throw ConfigError(
            "calibrate requires a kernel calibration request "
            "({family, fixed, target_mass})");
    if (cfg.kernels.size() != 1)
        throw ConfigError("calibrate takes exactly one kernel");
    const Kernel& k = cfg.kernels[0];
    double value = 0.0;
    switch (k.family()) {
        case Kernel::Family::central:
        case Kernel::Family::central_rational:
        case Kernel::Family::subcentral:
        case Kernel::Family::subcentral_rational: value = k.a(); break;
        case Kernel::Family::decentral: value = k.p(); break;
        case Kernel::Family::local: value = k.r(); break;
    }
    std::printf("%.17g\n", value);
}

void cmd_telegrapher_check(const RunConfig& cfg, const CommandOptions& opts) {
    Stopwatch sw;
    const fs::path dir = output_dir(cfg, opts);
    if (!cfg.flux.l.is_infinite() || !cfg.flux.m.is_infinite())
        throw ConfigError("telegrapher-check requires l = m = inf");
    if (cfg.flux.a != cfg.flux.b || !(cfg.flux.a > 0.0))
        throw ConfigError("telegrapher-check requires equal positive forcings a = b");
    if (!(cfg.solver.c1 > 0.0))
        throw ConfigError("telegrapher-check requires c1 > 0");

    const double a = cfg.flux.a;
    const double v = cfg.solver.c1;

    csv::Writer out(dir / "residual.csv", {"level", "dx", "dt", "max_residual"});
    json levels = json::array();
    for (int level = 0; level < 3; ++level) {
        FieldConfig fc = make_field_config(cfg);
        const int factor = 1 << level;
        fc.grid_points = (cfg.solver.grid_points - 1) * factor + 1;
        fc.dt = cfg.solver.dt / double(factor);
        fc.store_every = 1;
        const FieldSolution sol = solve_transport(fc);
        if (sol.blew_up) throw NumericError("telegrapher run blew up");

        const double dx = sol.xs[1] - sol.xs[0];
        const double dt = sol.times[1] - sol.times[0];
        double max_res = 0.0;
        for (std::size_t i = 1; i + 1 < sol.p.rows; ++i) {
            for (std::size_t j = 1; j + 1 < sol.p.cols; ++j) {
                const double dpdt =
                    (sol.p.at(i + 1, j) - sol.p.at(i - 1, j)) / (2.0 * dt);
                const double dpdx =
                    (sol.p.at(i, j + 1) - sol.p.at(i, j - 1)) / (2.0 * dx);
                const double res =
                    dpdt + a * (2.0 * sol.p.at(i, j) - 1.0) + v * dpdx;
                max_res = std::max(max_res, std::abs(res));
            }
        }
        out.row({double(level), dx, dt, max_res});
        levels.push_back({{"level", level}, {"dx", dx}, {"dt", dt},
                          {"max_residual", max_res}});
        if (!opts.quiet)
            std::cout << "telegrapher level " << level << ": dx = " << dx
                      << ", max residual = " << max_res << "\n";
    }
    out.close();

    json extra;
    extra["levels"] = levels;
    write_manifest(dir, "telegrapher-check", cfg, extra, sw.seconds());
}

void cmd_plot(const std::vector<std::string>& inputs, const CommandOptions& opts) {
    if (inputs.empty()) throw ConfigError("plot needs at least one input CSV");
    for (const std::string& input : inputs) {
        const fs::path in(input);
        const csv::Table t = csv::read(in);
        if (t.rows.empty())
            throw ConfigError("input CSV " + input + " has no data rows");
        const fs::path dir = opts.out_dir ? fs::path(*opts.out_dir)
                                          : in.parent_path();
        if (!dir.empty()) {
            std::error_code ec;
            fs::create_directories(dir, ec);
        }
        const std::string stem = in.stem().string();

        if (t.column("t") >= 0 && t.column("x") >= 0 && t.column("P") >= 0) {
            // Long-format field grid.
            const int ct = t.column("t"), cx = t.column("x"), cp = t.column("P");
            const int ch = t.column("H");
            std::vector<double> ts, xs;
            for (const auto& row : t.rows) {
                if (ts.empty() || row[ct] != ts.back()) ts.push_back(row[ct]);
            }
            const std::size_t nx = t.rows.size() / ts.size();
            for (std::size_t j = 0; j < nx; ++j) xs.push_back(t.rows[j][cx]);
            auto grid = [&](int col) {
                std::vector<std::vector<double>> g(ts.size());
                for (std::size_t i = 0; i < ts.size(); ++i) {
                    g[i].resize(nx);
                    for (std::size_t j = 0; j < nx; ++j)
                        g[i][j] = t.rows[i * nx + j][col];
                }
                return g;
            };
            svg::write_heatmap(dir / (stem + "_p.svg"), ts, xs, grid(cp),
                               "activation P(t,x)");
            if (ch >= 0)
                svg::write_heatmap(dir / (stem + "_h.svg"), ts, xs, grid(ch),
                                   "entropy H(t,x)");
        } else if (t.column("step") >= 0 && t.column("xi") >= 0) {
            const int cs = t.column("step"), cx = t.column("xi");
            svg::Series s{"xi", {}, {}};
            for (const auto& row : t.rows) {
                s.x.push_back(row[cs]);
                s.y.push_back(row[cx]);
            }
            svg::write_lines(dir / (stem + ".svg"), {s}, "activation orbit");
        } else if (t.column("value") >= 0 && t.column("fp_up") >= 0) {
            std::vector<svg::Series> series;
            svg::Series up{"up", {}, {}};
            const int cv = t.column("value"), cu = t.column("fp_up");
            for (const auto& row : t.rows) {
                up.x.push_back(row[cv]);
                up.y.push_back(row[cu]);
            }
            series.push_back(up);
            if (t.column("fp_down") >= 0) {
                svg::Series down{"down", {}, {}};
                const int cd = t.column("fp_down");
                for (const auto& row : t.rows) {
                    down.x.push_back(row[cv]);
                    down.y.push_back(row[cd]);
                }
                series.push_back(down);
            }
            svg::write_lines(dir / (stem + ".svg"), series, "fixed-point sweep");
        } else if (t.column("u") >= 0 && t.column("map") >= 0) {
            const int cu = t.column("u"), cm = t.column("map");
            std::vector<double> u, m;
            for (const auto& row : t.rows) {
                u.push_back(row[cu]);
                m.push_back(row[cm]);
            }
            svg::write_cobweb(dir / (stem + ".svg"), u, m, {},
                              "renormalized transduction map");
        } else {
            throw ConfigError("unrecognized CSV layout in " + input);
        }
        if (!opts.quiet) std::cout << "plot: " << input << " -> svg\n";
    }
}

}  // namespace itad
