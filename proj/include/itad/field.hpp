#pragma once

#include <cstddef>
#include <vector>

#include "itad/counting.hpp"
#include "itad/fluxes.hpp"
#include "itad/kernels.hpp"

namespace itad {

// Dense row-major [time x space] grid.
struct Grid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> v;

    void resize(std::size_t r, std::size_t c) {
        rows = r;
        cols = c;
        v.assign(r * c, 0.0);
    }
    double& at(std::size_t i, std::size_t j) { return v[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
    double* row(std::size_t i) { return v.data() + i * cols; }
    const double* row(std::size_t i) const { return v.data() + i * cols; }
    bool empty() const { return v.empty(); }
};

struct FieldConfig {
    CountingLaw law;
    Kernel kernel;
    FluxSpec flux;
    int grid_points = 201;
    double t_end = 10.0;
    double dt = 1e-3;
    enum class Mode { continuous, discrete } mode = Mode::continuous;
    double c1 = 0.0;  // transport velocity
    double c2 = 1.0;  // energy: mass density
    double c3 = 1.0;  // energy: tension
    // Snapshot stride in steps; 0 = auto (roughly 1000 stored rows).
    int store_every = 0;

    void validate() const;
};

struct FrontierPoint {
    double t = 0.0;
    double x = 0.0;
    int branch = 0;
};

struct FieldSolution {
    std::vector<double> times;
    std::vector<double> xs;
    Grid p;
    Grid q;  // wave field
    Grid g;  // energy field
    Grid h;  // entropy field
    std::vector<FrontierPoint> frontier;
    long clamp_count = 0;
    bool blew_up = false;
    double blowup_time = 0.0;
};

// Reaction-only field equation (c1 = 0), classical RK4 with fixed step,
// independently per grid node. P(0,x) = p_k(x).
FieldSolution solve_spatiotemporal(const FieldConfig& config);

// Discrete-time map P(t+1) = q(1-P) + (1-r)P; preserves [0,1] exactly.
// t_end is interpreted as the iteration count.
FieldSolution solve_discrete(const FieldConfig& config);

// Marginal temporal equation: scalar ODE (or map) on the nu-averaged fluxes.
struct TemporalSolution {
    std::vector<double> times;
    std::vector<double> values;
};
TemporalSolution solve_temporal(const FieldConfig& config);

// Transport variant: first-order upwind in space (wind +x), explicit Euler
// in time, inflow boundary at x=0 held at its reaction-only ODE value.
// c1 = 0 falls back to the reaction-only solver. Aborts with a flagged
// result when |P| exceeds 2 (finite-time blow-up).
FieldSolution solve_transport(const FieldConfig& config);

// Fill q (wave), g (energy), h (entropy) and the P = 1/2 frontier from the
// stored activation grid.
void derived_fields(FieldSolution& sol, const FieldConfig& config);

}  // namespace itad
