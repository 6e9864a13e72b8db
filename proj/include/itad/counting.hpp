#pragma once

#include <cstdint>
#include <utility>

namespace itad {

// Counting laws closed under binomial thinning: Dirac, Binomial, Poisson,
// NegativeBinomial. Thinning a law by a factor in [0,1] yields another law
// of the family, which is what makes count probabilities cheap: no pgf
// differentiation, no contour integration.
class CountingLaw {
public:
    enum class Kind { dirac, binomial, poisson, negative_binomial };

    static CountingLaw dirac(std::int64_t n);
    static CountingLaw binomial(std::int64_t n, double p);
    static CountingLaw poisson(double c);
    static CountingLaw negative_binomial(std::int64_t r, double p);

    Kind kind() const { return kind_; }
    std::int64_t count_param() const { return n_; }  // n (dirac/binomial), r (negbin)
    double rate() const { return c_; }               // c (poisson)
    double success() const { return p_; }            // p (binomial/negbin)

    double mean() const;
    double variance() const;

    // Probability generating function psi(z), z in [0,1]; psi(1) = 1.
    double pgf(double z) const;

    // Law of the a-thinned count, a in [0,1]. a = 0 collapses every family
    // to the zero count, represented as Dirac(0).
    CountingLaw thinned(double a) const;

    double pmf(std::int64_t j) const;
    // P(K >= j); tail(0) = 1 exactly.
    double tail(std::int64_t j) const;

    // Gaussian moment pair (mean, variance) of the a-thinned law.
    std::pair<double, double> gaussian_approx(double a) const;

    // Smallest J with P(K <= J) >= 1 - eps (capped at 10^6 terms).
    std::int64_t support_bound(double eps = 1e-14) const;

    // Inverse CDF: smallest k with P(K <= k) > u, u in [0,1).
    std::int64_t quantile(double u) const;

    bool operator==(const CountingLaw&) const = default;

private:
    CountingLaw(Kind k, std::int64_t n, double c, double p)
        : kind_(k), n_(n), c_(c), p_(p) {}

    Kind kind_;
    std::int64_t n_ = 0;  // dirac/binomial n, negbin r
    double c_ = 0.0;      // poisson mean
    double p_ = 0.0;      // binomial/negbin success probability
};

}  // namespace itad
