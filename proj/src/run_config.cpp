#include "itad/run_config.hpp"

#include <fstream>
#include <set>

#include "itad/errors.hpp"

namespace itad {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
    if (!obj.is_object())
        throw ConfigError("section '" + where + "' must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in section '" +
                              where + "'");
    }
}

double need_number(const json& obj, const std::string& where,
                   const std::string& key) {
    if (!obj.contains(key))
        throw ConfigError("missing key '" + key + "' in section '" + where + "'");
    if (!obj[key].is_number())
        throw ConfigError("key '" + key + "' in section '" + where +
                          "' must be a number");
    return obj[key].get<double>();
}

double opt_number(const json& obj, const std::string& where,
                  const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw ConfigError("key '" + key + "' in section '" + where +
                          "' must be a number");
    return obj[key].get<double>();
}

bool opt_bool(const json& obj, const std::string& where, const std::string& key,
              bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean())
        throw ConfigError("key '" + key + "' in section '" + where +
                          "' must be a boolean");
    return obj[key].get<bool>();
}

CountingLaw parse_law(const json& obj) {
    reject_unknown(obj, "law", {"family", "n", "p", "c", "r"});
    if (!obj.contains("family") || !obj["family"].is_string())
        throw ConfigError("law needs a string 'family'");
    const std::string fam = obj["family"].get<std::string>();
    if (fam == "dirac") {
        reject_unknown(obj, "law", {"family", "n"});
        return CountingLaw::dirac(std::int64_t(need_number(obj, "law", "n")));
    }
    if (fam == "binomial") {
        reject_unknown(obj, "law", {"family", "n", "p"});
        return CountingLaw::binomial(std::int64_t(need_number(obj, "law", "n")),
                                     need_number(obj, "law", "p"));
    }
    if (fam == "poisson") {
        reject_unknown(obj, "law", {"family", "c"});
        return CountingLaw::poisson(need_number(obj, "law", "c"));
    }
    if (fam == "negative_binomial") {
        reject_unknown(obj, "law", {"family", "r", "p"});
        return CountingLaw::negative_binomial(
            std::int64_t(need_number(obj, "law", "r")),
            need_number(obj, "law", "p"));
    }
    throw ConfigError("unknown law family '" + fam + "'");
}

Kernel kernel_from_params(Kernel::Family fam, const json& params) {
    switch (fam) {
        case Kernel::Family::central:
            reject_unknown(params, "kernel.params", {"a"});
            return Kernel::central(need_number(params, "kernel.params", "a"));
        case Kernel::Family::central_rational:
            reject_unknown(params, "kernel.params", {"a", "d"});
            return Kernel::central_rational(
                need_number(params, "kernel.params", "a"),
                int(opt_number(params, "kernel.params", "d", 2)));
        case Kernel::Family::subcentral:
            reject_unknown(params, "kernel.params", {"a"});
            return Kernel::subcentral(need_number(params, "kernel.params", "a"));
        case Kernel::Family::subcentral_rational:
            reject_unknown(params, "kernel.params", {"a"});
            return Kernel::subcentral_rational(
                need_number(params, "kernel.params", "a"));
        case Kernel::Family::decentral:
            reject_unknown(params, "kernel.params", {"p"});
            return Kernel::decentral(need_number(params, "kernel.params", "p"));
        case Kernel::Family::local:
            reject_unknown(params, "kernel.params", {"q", "r"});
            return Kernel::local(need_number(params, "kernel.params", "q"),
                                 need_number(params, "kernel.params", "r"));
    }
    throw ConfigError("unhandled kernel family");
}

std::pair<Kernel, std::optional<CalibrationRequest>> parse_kernel(const json& obj) {
    reject_unknown(obj, "kernel", {"family", "params", "fixed", "target_mass"});
    if (!obj.contains("family") || !obj["family"].is_string())
        throw ConfigError("kernel needs a string 'family'");
    const Kernel::Family fam =
        Kernel::family_from_name(obj["family"].get<std::string>());

    if (obj.contains("target_mass")) {
        if (obj.contains("params"))
            throw ConfigError("kernel: give either 'params' or a calibration "
                              "('fixed' + 'target_mass'), not both");
        CalibrationRequest req;
        req.family = fam;
        req.target_mass = need_number(obj, "kernel", "target_mass");
        if (obj.contains("fixed")) {
            if (!obj["fixed"].is_object())
                throw ConfigError("kernel.fixed must be an object");
            for (auto it = obj["fixed"].begin(); it != obj["fixed"].end(); ++it) {
                if (!it.value().is_number())
                    throw ConfigError("kernel.fixed values must be numbers");
                req.fixed[it.key()] = it.value().get<double>();
            }
        }
        return {calibrate_kernel(req.family, req.fixed, req.target_mass), req};
    }
    if (!obj.contains("params"))
        throw ConfigError("kernel needs 'params' (or a calibration request)");
    return {kernel_from_params(fam, obj["params"]), std::nullopt};
}

Threshold parse_threshold(const json& obj, const std::string& where,
                          const std::string& key, Threshold fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj[key];
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return Threshold::infinity();
        throw ConfigError("threshold '" + key + "' in '" + where +
                          "' must be a positive integer or \"inf\"");
    }
    if (!v.is_number())
        throw ConfigError("threshold '" + key + "' in '" + where +
                          "' must be a positive integer or \"inf\"");
    return Threshold(v.get<std::int64_t>());
}

FluxSpec parse_flux(const json& obj) {
    reject_unknown(obj, "flux",
                   {"k", "l", "m", "a", "b", "alpha", "beta", "self_interaction"});
    FluxSpec spec;
    spec.k = std::int64_t(opt_number(obj, "flux", "k", 1));
    spec.l = parse_threshold(obj, "flux", "l", Threshold(1));
    spec.m = parse_threshold(obj, "flux", "m", Threshold::infinity());
    spec.a = opt_number(obj, "flux", "a", 0.0);
    spec.b = opt_number(obj, "flux", "b", 0.0);
    spec.alpha = opt_number(obj, "flux", "alpha", 1.0);
    spec.beta = opt_number(obj, "flux", "beta", 1.0);
    spec.self_interaction = opt_bool(obj, "flux", "self_interaction", true);
    return spec;
}

SolverSection parse_solver(const json& obj) {
    reject_unknown(obj, "solver",
                   {"mode", "dt", "t_end", "grid_points", "C1", "C2", "C3",
                    "store_every"});
    SolverSection s;
    if (obj.contains("mode")) {
        if (!obj["mode"].is_string())
            throw ConfigError("solver.mode must be a string");
        s.mode = obj["mode"].get<std::string>();
        if (s.mode != "continuous" && s.mode != "discrete")
            throw ConfigError("solver.mode must be 'continuous' or 'discrete'");
    }
    s.dt = opt_number(obj, "solver", "dt", s.dt);
    s.t_end = opt_number(obj, "solver", "t_end", s.t_end);
    s.grid_points = int(opt_number(obj, "solver", "grid_points", s.grid_points));
    s.c1 = opt_number(obj, "solver", "C1", s.c1);
    s.c2 = opt_number(obj, "solver", "C2", s.c2);
    s.c3 = opt_number(obj, "solver", "C3", s.c3);
    s.store_every = int(opt_number(obj, "solver", "store_every", 0));
    return s;
}

SweepSection parse_sweep(const json& obj) {
    reject_unknown(obj, "orbit.sweep",
                   {"parameter", "values", "from", "to", "count", "warm_start",
                    "up_down"});
    SweepSection sw;
    if (!obj.contains("parameter") || !obj["parameter"].is_string())
        throw ConfigError("orbit.sweep needs a string 'parameter'");
    sw.parameter = obj["parameter"].get<std::string>();
    if (sw.parameter != "r" && sw.parameter != "s" && sw.parameter != "m" &&
        sw.parameter != "l")
        throw ConfigError("orbit.sweep.parameter must be one of r, s, m, l");
    if (obj.contains("values")) {
        if (!obj["values"].is_array())
            throw ConfigError("orbit.sweep.values must be an array");
        for (const auto& v : obj["values"]) {
            if (!v.is_number())
                throw ConfigError("orbit.sweep.values must be numeric");
            sw.values.push_back(v.get<double>());
        }
    } else {
        const double from = need_number(obj, "orbit.sweep", "from");
        const double to = need_number(obj, "orbit.sweep", "to");
        const long count = long(need_number(obj, "orbit.sweep", "count"));
        if (count < 2) throw ConfigError("orbit.sweep.count must be >= 2");
        for (long i = 0; i < count; ++i)
            sw.values.push_back(from + (to - from) * double(i) / double(count - 1));
    }
    if (sw.values.empty()) throw ConfigError("orbit.sweep has no values");
    sw.warm_start = opt_bool(obj, "orbit.sweep", "warm_start", true);
    sw.up_down = opt_bool(obj, "orbit.sweep", "up_down", false);
    return sw;
}

OrbitSection parse_orbit(const json& obj) {
    reject_unknown(obj, "orbit",
                   {"xi0", "n_steps", "r", "s", "renormalize", "sweep"});
    OrbitSection o;
    if (obj.contains("xi0")) o.xi0 = need_number(obj, "orbit", "xi0");
    o.n_steps = long(opt_number(obj, "orbit", "n_steps", o.n_steps));
    if (obj.contains("r")) o.r = need_number(obj, "orbit", "r");
    if (obj.contains("s")) o.s = need_number(obj, "orbit", "s");
    o.renormalize = opt_bool(obj, "orbit", "renormalize", false);
    if (obj.contains("sweep")) o.sweep = parse_sweep(obj["sweep"]);
    return o;
}

McSection parse_mc(const json& obj) {
    reject_unknown(obj, "mc", {"replicates", "seed", "threads", "emit_edges"});
    McSection m;
    m.replicates = long(opt_number(obj, "mc", "replicates", 1));
    if (obj.contains("seed")) {
        if (!obj["seed"].is_number_unsigned() && !obj["seed"].is_number_integer())
            throw ConfigError("mc.seed must be a non-negative integer");
        m.seed = obj["seed"].get<std::uint64_t>();
    }
    m.threads = int(opt_number(obj, "mc", "threads", 0));
    m.emit_edges = opt_bool(obj, "mc", "emit_edges", false);
    return m;
}

OutputSection parse_output(const json& obj) {
    reject_unknown(obj, "output", {"directory", "formats", "svg"});
    OutputSection o;
    if (obj.contains("directory")) {
        if (!obj["directory"].is_string())
            throw ConfigError("output.directory must be a string");
        o.directory = obj["directory"].get<std::string>();
    }
    o.svg = opt_bool(obj, "output", "svg", false);
    if (obj.contains("formats")) {
        if (!obj["formats"].is_array())
            throw ConfigError("output.formats must be an array");
        for (const auto& f : obj["formats"]) {
            if (!f.is_string())
                throw ConfigError("output.formats entries must be strings");
            const std::string name = f.get<std::string>();
            if (name == "svg")
                o.svg = true;
            else if (name != "csv")
                throw ConfigError("unknown output format '" + name + "'");
        }
    }
    return o;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
    const json* root = &doc;
    // A manifest embeds the config it ran with; accept it directly.
    if (doc.is_object() && doc.contains("config") && doc.contains("version"))
        root = &doc.at("config");
    reject_unknown(*root, "config",
                   {"law", "kernel", "kernels", "flux", "solver", "orbit", "mc",
                    "output"});

    RunConfig cfg;
    if (root->contains("law")) cfg.law = parse_law(root->at("law"));
    if (root->contains("kernel") && root->contains("kernels"))
        throw ConfigError("give either 'kernel' or 'kernels', not both");
    if (root->contains("kernel")) {
        auto [k, cal] = parse_kernel(root->at("kernel"));
        cfg.kernels.push_back(k);
        cfg.calibration = cal;
    }
    if (root->contains("kernels")) {
        if (!root->at("kernels").is_array() || root->at("kernels").empty())
            throw ConfigError("'kernels' must be a non-empty array");
        for (const auto& item : root->at("kernels"))
            cfg.kernels.push_back(parse_kernel(item).first);
    }
    if (root->contains("flux")) cfg.flux = parse_flux(root->at("flux"));
    if (root->contains("solver")) cfg.solver = parse_solver(root->at("solver"));
    if (root->contains("orbit")) cfg.orbit = parse_orbit(root->at("orbit"));
    if (root->contains("mc")) cfg.mc = parse_mc(root->at("mc"));
    if (root->contains("output")) cfg.output = parse_output(root->at("output"));
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_run_config(doc);
}

json law_json(const CountingLaw& law) {
    switch (law.kind()) {
        case CountingLaw::Kind::dirac:
            return {{"family", "dirac"}, {"n", law.count_param()}};
        case CountingLaw::Kind::binomial:
            return {{"family", "binomial"},
                    {"n", law.count_param()},
                    {"p", law.success()}};
        case CountingLaw::Kind::poisson:
            return {{"family", "poisson"}, {"c", law.rate()}};
        case CountingLaw::Kind::negative_binomial:
            return {{"family", "negative_binomial"},
                    {"r", law.count_param()},
                    {"p", law.success()}};
    }
    return {};
}

json kernel_json(const Kernel& kernel) {
    json params;
    switch (kernel.family()) {
        case Kernel::Family::central: params = {{"a", kernel.a()}}; break;
        case Kernel::Family::central_rational:
            params = {{"a", kernel.a()}, {"d", kernel.d()}};
            break;
        case Kernel::Family::subcentral: params = {{"a", kernel.a()}}; break;
        case Kernel::Family::subcentral_rational:
            params = {{"a", kernel.a()}};
            break;
        case Kernel::Family::decentral: params = {{"p", kernel.p()}}; break;
        case Kernel::Family::local:
            params = {{"q", kernel.q()}, {"r", kernel.r()}};
            break;
    }
    return {{"family", kernel.family_name()}, {"params", params}};
}

json resolved_config_json(const RunConfig& cfg) {
    json doc = json::object();
    if (cfg.law) doc["law"] = law_json(*cfg.law);
    if (cfg.kernels.size() == 1) {
        doc["kernel"] = kernel_json(cfg.kernels[0]);
    } else if (!cfg.kernels.empty()) {
        doc["kernels"] = json::array();
        for (const auto& k : cfg.kernels) doc["kernels"].push_back(kernel_json(k));
    }
    doc["flux"] = {{"k", cfg.flux.k},
                   {"l", cfg.flux.l.is_infinite() ? json("inf") : json(cfg.flux.l.value())},
                   {"m", cfg.flux.m.is_infinite() ? json("inf") : json(cfg.flux.m.value())},
                   {"a", cfg.flux.a},
                   {"b", cfg.flux.b},
                   {"alpha", cfg.flux.alpha},
                   {"beta", cfg.flux.beta},
                   {"self_interaction", cfg.flux.self_interaction}};
    doc["solver"] = {{"mode", cfg.solver.mode},
                     {"dt", cfg.solver.dt},
                     {"t_end", cfg.solver.t_end},
                     {"grid_points", cfg.solver.grid_points},
                     {"C1", cfg.solver.c1},
                     {"C2", cfg.solver.c2},
                     {"C3", cfg.solver.c3},
                     {"store_every", cfg.solver.store_every}};
    json orbit = {{"n_steps", cfg.orbit.n_steps},
                  {"renormalize", cfg.orbit.renormalize}};
    if (cfg.orbit.xi0) orbit["xi0"] = *cfg.orbit.xi0;
    if (cfg.orbit.r) orbit["r"] = *cfg.orbit.r;
    if (cfg.orbit.s) orbit["s"] = *cfg.orbit.s;
    if (cfg.orbit.sweep) {
        orbit["sweep"] = {{"parameter", cfg.orbit.sweep->parameter},
                          {"values", cfg.orbit.sweep->values},
                          {"warm_start", cfg.orbit.sweep->warm_start},
                          {"up_down", cfg.orbit.sweep->up_down}};
    }
    doc["orbit"] = orbit;
    json mc = {{"replicates", cfg.mc.replicates},
               {"threads", cfg.mc.threads},
               {"emit_edges", cfg.mc.emit_edges}};
    if (cfg.mc.seed) mc["seed"] = *cfg.mc.seed;
    doc["mc"] = mc;
    json formats = json::array({"csv"});
    if (cfg.output.svg) formats.push_back("svg");
    doc["output"] = {{"directory", cfg.output.directory}, {"formats", formats}};
    return doc;
}

}  // namespace itad
