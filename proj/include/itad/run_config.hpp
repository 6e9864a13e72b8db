#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "itad/counting.hpp"
#include "itad/fluxes.hpp"
#include "itad/kernels.hpp"

namespace itad {

inline constexpr const char* kVersion = "1.0.0";

struct SolverSection {
    std::string mode = "continuous";  // or "discrete"
    double dt = 1e-3;
    double t_end = 10.0;
    int grid_points = 201;
    double c1 = 0.0;
    double c2 = 1.0;
    double c3 = 1.0;
    int store_every = 0;  // 0 = auto
};

struct SweepSection {
    std::string parameter;  // r | s | m | l
    std::vector<double> values;
    bool warm_start = true;
    bool up_down = false;
};

struct OrbitSection {
    std::optional<double> xi0;  // absent: induction value nu(g_k)
    long n_steps = 50;
    std::optional<double> r;
    std::optional<double> s;
    bool renormalize = false;
    std::optional<SweepSection> sweep;
};

struct McSection {
    long replicates = 1;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    bool emit_edges = false;
};

struct OutputSection {
    std::string directory = "out";
    bool svg = false;
};

// Calibration request carried verbatim so cmd_calibrate can report it.
struct CalibrationRequest {
    Kernel::Family family;
    std::map<std::string, double> fixed;
    double target_mass = 0.0;
};

struct RunConfig {
    std::optional<CountingLaw> law;
    std::vector<Kernel> kernels;  // one per "kernel"/"kernels" entry
    std::optional<CalibrationRequest> calibration;
    FluxSpec flux;
    SolverSection solver;
    OrbitSection orbit;
    McSection mc;
    OutputSection output;
};

// Parse a config document (or a manifest wrapping one under "config").
// Unknown keys anywhere are rejected.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

// Full config with every default made explicit, for the run manifest.
nlohmann::json resolved_config_json(const RunConfig& cfg);

nlohmann::json law_json(const CountingLaw& law);
nlohmann::json kernel_json(const Kernel& kernel);

}  // namespace itad
