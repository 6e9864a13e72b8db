#pragma once

#include <optional>
#include <vector>

#include "itad/counting.hpp"
#include "itad/fluxes.hpp"
#include "itad/kernels.hpp"

namespace itad {

// Discrete-time mean-field dynamics on the activation probability xi{A}.
// Mode is selected by which pieces are present: activation threshold l
// always; deactivation threshold m (dual model), external deactivation r
// and activation s probabilities optional; renormalize switches to the
// chaotic replace-map.
struct OrbitConfig {
    CountingLaw law;
    Kernel kernel;
    Threshold l = Threshold(1);
    std::optional<Threshold> m = std::nullopt;
    std::optional<double> r = std::nullopt;
    std::optional<double> s = std::nullopt;
    bool self_interaction = true;
    bool renormalize = false;
    double xi0 = 0.0;
    long n_steps = 0;
    long max_steps = 100'000;  // convergence cap for fixed-point runs

    void validate() const;
};

struct OrbitStep {
    double gain = 0.0;  // activation inflow (nu(q)+s)(1-xi)
    double loss = 0.0;  // deactivation outflow (nu(r)+r)xi
};

struct OrbitTrace {
    std::vector<double> xi;
    std::vector<OrbitStep> fluxes;  // one per transition
    bool converged = false;
    std::optional<double> fixed_point;
};

OrbitTrace orbit(const OrbitConfig& config);

enum class SweepParameter { r, s, m, l };

struct SweepEntry {
    double value = 0.0;
    double fixed_point = 0.0;
    bool converged = false;
    int period = 0;  // detected cycle length when not converged, else 0
};

// Iterate each swept configuration to convergence (|dxi| < 1e-12, cap 1e5
// steps). warm_start seeds every run with the previous fixed point, which
// is what exposes hysteresis on up-then-down sweeps; cold start uses
// config.xi0 each time. Non-convergent entries are scanned for a short
// cycle and flagged with its period.
std::vector<SweepEntry> fixed_point_sweep(const OrbitConfig& config,
                                          SweepParameter parameter,
                                          const std::vector<double>& values,
                                          bool warm_start);

struct ChaosFactor {
    double wp = 0.0;      // renormalization factor
    double u_star = 0.0;  // argmax of the one-step map
    std::optional<double> closed_form;  // product-log form when available
};

// wp = 1 / sup_{u in (0,1]} nu(q_l(.,u)) (1-u), by a 10^4-point scan plus
// golden-section refinement. For Poisson + decentral + l=1 the product-log
// closed form is evaluated as well and cross-checked to 1e-9.
ChaosFactor chaos_factor(const CountingLaw& law, const Kernel& kernel,
                         Threshold l, bool self_interaction);

struct CobwebMap {
    std::vector<double> u;      // 1001-point grid
    std::vector<double> image;  // renormalized map values
};

// Chaotic orbit xi_n = wp * nu(q(xi_{n-1})) (1 - xi_{n-1}) plus map samples
// for cobweb plots.
struct ChaoticOrbit {
    OrbitTrace trace;
    CobwebMap map;
    double wp = 0.0;
};
ChaoticOrbit chaotic_orbit(const OrbitConfig& config);

// Smallest n with 1 - xi_n < epsilon per initial point (capped at 1e6;
// capped entries get n = -1).
std::vector<std::pair<double, long>> iterations_to_tolerance(
    const OrbitConfig& config, double epsilon,
    const std::vector<double>& initial_grid);

}  // namespace itad
