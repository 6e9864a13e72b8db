#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "itad/commands.hpp"
#include "itad/errors.hpp"
#include "itad/run_config.hpp"

namespace {

// Machine-readable error report on stderr, exit code per kind:
// 0 ok, 2 config, 3 numeric, 4 I/O.
int fail(const char* kind, int code, const std::string& message) {
    nlohmann::json err;
    err["error"] = {{"kind", kind}, {"message", message}};
    std::cerr << err.dump() << "\n";
    return code;
}

struct Cli {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
    std::vector<std::string> plot_inputs;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"induction-transduction activation-deactivation toolkit"};
    app.require_subcommand(1);

    Cli cli;
    const auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", cli.config_path,
                                    "JSON run configuration (or a manifest)");
        if (needs_config) opt->required();
        sub->add_option("--out", [&cli](const std::vector<std::string>& v) {
            cli.out_dir = v.front();
            return true;
        }, "output directory (overrides output.directory)");
        sub->add_option("--seed", [&cli](const std::vector<std::string>& v) {
            cli.seed = std::stoull(v.front());
            return true;
        }, "master seed (overrides ITAD_SEED and mc.seed)");
        sub->add_flag("--quiet", cli.quiet, "suppress progress output");
    };

    auto* field = app.add_subcommand("field", "solve the activation field equation");
    add_common(field, true);
    auto* orbit = app.add_subcommand("orbit", "iterate the mean-field recursion");
    add_common(orbit, true);
    auto* sweep = app.add_subcommand("sweep", "fixed points along a parameter sweep");
    add_common(sweep, true);
    auto* chaos = app.add_subcommand("chaos", "renormalized chaotic transduction map");
    add_common(chaos, true);
    auto* graph_mc = app.add_subcommand("graph-mc", "Monte-Carlo random graph replicates");
    add_common(graph_mc, true);
    auto* calibrate = app.add_subcommand("calibrate", "solve a kernel parameter for a target mass");
    add_common(calibrate, true);
    auto* telegrapher = app.add_subcommand("telegrapher-check",
                                           "transport reduction residual study");
    add_common(telegrapher, true);
    auto* plot = app.add_subcommand("plot", "render CSV outputs as SVG");
    add_common(plot, false);
    plot->add_option("inputs", cli.plot_inputs, "input CSV files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        itad::CommandOptions opts{cli.out_dir, cli.seed, cli.quiet};
        if (plot->parsed()) {
            itad::cmd_plot(cli.plot_inputs, opts);
            return 0;
        }
        const itad::RunConfig cfg = itad::load_run_config(cli.config_path);
        if (field->parsed()) itad::cmd_field(cfg, opts);
        else if (orbit->parsed()) itad::cmd_orbit(cfg, opts);
        else if (sweep->parsed()) itad::cmd_sweep(cfg, opts);
        else if (chaos->parsed()) itad::cmd_chaos(cfg, opts);
        else if (graph_mc->parsed()) itad::cmd_graph_mc(cfg, opts);
        else if (calibrate->parsed()) itad::cmd_calibrate(cfg, opts);
        else if (telegrapher->parsed()) itad::cmd_telegrapher_check(cfg, opts);
        return 0;
    } catch (const itad::ConfigError& e) {
        return fail("config", 2, e.what());
    } catch (const std::domain_error& e) {
        return fail("config", 2, e.what());
    } catch (const itad::NumericError& e) {
        return fail("numeric", 3, e.what());
    } catch (const itad::IoError& e) {
        return fail("io", 4, e.what());
    } catch (const std::exception& e) {
        return fail("numeric", 3, e.what());
    }
}
