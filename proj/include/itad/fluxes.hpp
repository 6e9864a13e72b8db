#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>

#include "itad/counting.hpp"
#include "itad/kernels.hpp"

namespace itad {

// Activation/deactivation threshold: a positive integer or infinity.
// An infinite threshold produces exactly zero flux.
class Threshold {
public:
    Threshold() : v_(kInf) {}
    explicit Threshold(std::int64_t v);
    static Threshold infinity() { return Threshold(); }

    bool is_infinite() const { return v_ == kInf; }
    std::int64_t value() const { return v_; }
    std::string str() const;

    bool operator==(const Threshold&) const = default;

private:
    static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
    std::int64_t v_;
};

// Degree-field moments at a location pair.
struct DegreeStats {
    double mean_x = 0.0;
    double mean_y = 0.0;
    double variance_x = 0.0;
    double variance_y = 0.0;
    double covariance = 0.0;
    double correlation = 0.0;
    bool degenerate = false;  // zero variance; correlation reported as 0
};

DegreeStats degree_stats(const CountingLaw& law, const Kernel& kernel, double x,
                         double y);

// Induction probability p_k(x): degree of a typical point at x reaches k,
// including the self-interaction correction when enabled.
double induction_p(const CountingLaw& law, const Kernel& kernel, std::int64_t k,
                   double x, bool self_interaction);

// Activation flux q_l(x,u): pressure on a deactivated point at x from the
// currently active fraction u. Deactivation flux r_m(x,u) is the mirror
// image driven by the inactive fraction 1-u.
double flux_q(const CountingLaw& law, const Kernel& kernel, Threshold l,
              double x, double u, bool self_interaction);
double flux_r(const CountingLaw& law, const Kernel& kernel, Threshold m,
              double x, double u, bool self_interaction);

// nu-averages over the unit interval (64-node Gauss-Legendre; exact
// pointwise value for the spatially constant kernel).
double mean_induction(const CountingLaw& law, const Kernel& kernel,
                      std::int64_t k, bool self_interaction);
double mean_flux_q(const CountingLaw& law, const Kernel& kernel, Threshold l,
                   double u, bool self_interaction);
double mean_flux_r(const CountingLaw& law, const Kernel& kernel, Threshold m,
                   double u, bool self_interaction);

// Forcing (additive) and overloading (multiplicative) on both fluxes plus
// the threshold triple. Thresholds: k for induction, l for activation,
// m for deactivation.
struct FluxSpec {
    std::int64_t k = 1;
    Threshold l = Threshold(1);
    Threshold m = Threshold::infinity();
    double a = 0.0;
    double b = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
    bool self_interaction = true;
};

// Validity: sup over a 101x101 (x,u) grid of alpha*q_l + a and beta*r_m + b
// must not exceed 1. Throws ConfigError otherwise.
void validate_flux(const CountingLaw& law, const Kernel& kernel,
                   const FluxSpec& spec);

// Effective (forced/overloaded) fluxes used by the solvers.
double effective_q(const CountingLaw& law, const Kernel& kernel,
                   const FluxSpec& spec, double x, double u);
double effective_r(const CountingLaw& law, const Kernel& kernel,
                   const FluxSpec& spec, double x, double u);

// Batched flux over precomputed per-node marginals nu(f_x) and diagonal
// values f(x,x). u may hold one activation level per node or a single
// broadcast value. Poisson runs through the vectorized exp kernel; other
// laws fall back to the pointwise path.
void flux_q_batch(const CountingLaw& law, Threshold l,
                  std::span<const double> nu_fx, std::span<const double> fxx,
                  std::span<const double> u, bool self_interaction,
                  std::span<double> out);
void flux_r_batch(const CountingLaw& law, Threshold m,
                  std::span<const double> nu_fx, std::span<const double> fxx,
                  std::span<const double> u, bool self_interaction,
                  std::span<double> out);

}  // namespace itad
