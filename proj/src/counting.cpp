#include "itad/counting.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "itad/errors.hpp"

namespace itad {

namespace {

constexpr std::int64_t kMaxTerms = 1'000'000;
// Below this seed magnitude the linear recurrences lose the series; switch
// to the log-space recurrence.
constexpr double kLinearSeedFloor = 1e-280;

double lchoose(std::int64_t n, std::int64_t j) {
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(j) + 1.0) -
           std::lgamma(double(n - j) + 1.0);
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// Streaming sum of exp(l_k) kept as exp(offset) * acc to survive terms that
// individually under- or overflow.
class LogSum {
public:
    void add(double lt) {
        if (!started_) {
            off_ = lt;
            acc_ = 1.0;
            started_ = true;
            return;
        }
        if (lt > off_) {
            acc_ = acc_ * std::exp(off_ - lt) + 1.0;
            off_ = lt;
        } else {
            acc_ += std::exp(lt - off_);
        }
    }
    double value() const { return started_ ? std::exp(off_) * acc_ : 0.0; }
    // value() relative to exp(off): used for convergence checks.
    double last_weight(double lt) const { return std::exp(lt - off_); }
    bool started() const { return started_; }
    double off() const { return off_; }
    double acc() const { return acc_; }

private:
    bool started_ = false;
    double off_ = 0.0;
    double acc_ = 0.0;
};

}  // namespace

CountingLaw CountingLaw::dirac(std::int64_t n) {
    if (n < 0) throw ConfigError("dirac law requires n >= 0");
    return CountingLaw(Kind::dirac, n, 0.0, 0.0);
}

CountingLaw CountingLaw::binomial(std::int64_t n, double p) {
    if (n < 1) throw ConfigError("binomial law requires n >= 1");
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("binomial law requires p in (0,1]");
    return CountingLaw(Kind::binomial, n, 0.0, p);
}

CountingLaw CountingLaw::poisson(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("poisson law requires c > 0");
    return CountingLaw(Kind::poisson, 0, c, 0.0);
}

CountingLaw CountingLaw::negative_binomial(std::int64_t r, double p) {
    if (r < 1) throw ConfigError("negative binomial law requires r >= 1");
    // p = 1 is excluded: mean rp/(1-p) must stay finite.
    if (!(p > 0.0 && p < 1.0))
        throw ConfigError("negative binomial law requires p in (0,1)");
    return CountingLaw(Kind::negative_binomial, r, 0.0, p);
}

double CountingLaw::mean() const {
    switch (kind_) {
        case Kind::dirac: return double(n_);
        case Kind::binomial: return double(n_) * p_;
        case Kind::poisson: return c_;
        case Kind::negative_binomial: return double(n_) * p_ / (1.0 - p_);
    }
    return 0.0;
}

double CountingLaw::variance() const {
    switch (kind_) {
        case Kind::dirac: return 0.0;
        case Kind::binomial: return double(n_) * p_ * (1.0 - p_);
        case Kind::poisson: return c_;
        case Kind::negative_binomial: {
            const double q = 1.0 - p_;
            return double(n_) * p_ / (q * q);
        }
    }
    return 0.0;
}

double CountingLaw::pgf(double z) const {
    if (!(z >= 0.0 && z <= 1.0))
        throw std::domain_error("pgf argument must lie in [0,1]");
    switch (kind_) {
        case Kind::dirac: return std::pow(z, double(n_));
        case Kind::binomial: return std::pow(1.0 - p_ + p_ * z, double(n_));
        case Kind::poisson: return std::exp(c_ * (z - 1.0));
        case Kind::negative_binomial:
            return std::pow((1.0 - p_) / (1.0 - p_ * z), double(n_));
    }
    return 0.0;
}

CountingLaw CountingLaw::thinned(double a) const {
    if (!(a >= 0.0 && a <= 1.0))
        throw std::domain_error("thinning factor must lie in [0,1]");
    if (a == 0.0) return dirac(0);
    switch (kind_) {
        case Kind::dirac:
            if (n_ == 0 || a == 1.0) return *this;
            return binomial(n_, a);
        case Kind::binomial:
            return binomial(n_, a * p_);
        case Kind::poisson:
            return poisson(a * c_);
        case Kind::negative_binomial:
            return negative_binomial(n_, a * p_ / (1.0 - (1.0 - a) * p_));
    }
    return dirac(0);
}

double CountingLaw::pmf(std::int64_t j) const {
    if (j < 0) return 0.0;
    switch (kind_) {
        case Kind::dirac:
            return j == n_ ? 1.0 : 0.0;
        case Kind::binomial: {
            if (j > n_) return 0.0;
            if (p_ == 1.0) return j == n_ ? 1.0 : 0.0;
            // Bernoulli exactly: this is the thinned Dirac(1) and downstream
            // reductions rely on pmf(1) == p bit-for-bit.
            if (n_ == 1) return j == 0 ? 1.0 - p_ : p_;
            return std::exp(lchoose(n_, j) + double(j) * std::log(p_) +
                            double(n_ - j) * std::log1p(-p_));
        }
        case Kind::poisson:
            return std::exp(-c_ + double(j) * std::log(c_) -
                            std::lgamma(double(j) + 1.0));
        case Kind::negative_binomial:
            return std::exp(std::lgamma(double(n_) + double(j)) -
                            std::lgamma(double(j) + 1.0) - std::lgamma(double(n_)) +
                            double(j) * std::log(p_) + double(n_) * std::log1p(-p_));
    }
    return 0.0;
}

namespace {

double log_pmf(const CountingLaw& law, std::int64_t j) {
    switch (law.kind()) {
        case CountingLaw::Kind::binomial: {
            const double p = law.success();
            const std::int64_t n = law.count_param();
            return lchoose(n, j) + double(j) * std::log(p) +
                   double(n - j) * std::log1p(-p);
        }
        case CountingLaw::Kind::poisson:
            return -law.rate() + double(j) * std::log(law.rate()) -
                   std::lgamma(double(j) + 1.0);
        case CountingLaw::Kind::negative_binomial: {
            const double r = double(law.count_param());
            return std::lgamma(r + double(j)) - std::lgamma(double(j) + 1.0) -
                   std::lgamma(r) + double(j) * std::log(law.success()) +
                   r * std::log1p(-law.success());
        }
        default:
            return law.pmf(j) > 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
}

// Multiplicative step pmf(i+1)/pmf(i) for the series recurrences.
double pmf_ratio(const CountingLaw& law, std::int64_t i) {
    switch (law.kind()) {
        case CountingLaw::Kind::binomial: {
            const double p = law.success();
            return (double(law.count_param() - i) / double(i + 1)) * (p / (1.0 - p));
        }
        case CountingLaw::Kind::poisson:
            return law.rate() / double(i + 1);
        case CountingLaw::Kind::negative_binomial:
            return law.success() * (double(law.count_param()) + double(i)) /
                   double(i + 1);
        default:
            return 0.0;
    }
}

// Sum pmf over [j, upper_limit], seeded from pmf(j), stopping once the terms
// are decaying and negligible against the accumulated mass.
double upper_series(const CountingLaw& law, std::int64_t j, std::int64_t hard_end) {
    double term = law.pmf(j);
    double acc = term;
    for (std::int64_t i = j; i - j < kMaxTerms; ++i) {
        if (i >= hard_end) break;
        term *= pmf_ratio(law, i);
        acc += term;
        if (term <= acc * 1e-18 && double(i) >= law.mean()) break;
    }
    return acc;
}

// Sum pmf over [0, j-1].
double lower_series(const CountingLaw& law, std::int64_t j) {
    const double seed = law.pmf(0);
    if (seed >= kLinearSeedFloor) {
        double term = seed;
        double acc = term;
        for (std::int64_t i = 0; i < j - 1; ++i) {
            term *= pmf_ratio(law, i);
            acc += term;
        }
        return acc;
    }
    // Seed underflows in linear space (large parameters): accumulate the
    // same recurrence on log terms.
    LogSum sum;
    double lt = log_pmf(law, 0);
    sum.add(lt);
    for (std::int64_t i = 0; i < j - 1; ++i) {
        lt += std::log(pmf_ratio(law, i));
        sum.add(lt);
    }
    return sum.value();
}

}  // namespace

double CountingLaw::tail(std::int64_t j) const {
    if (j <= 0) return 1.0;
    switch (kind_) {
        case Kind::dirac:
            return j <= n_ ? 1.0 : 0.0;
        case Kind::binomial: {
            if (j > n_) return 0.0;
            if (p_ == 1.0) return 1.0;
            if (n_ - j + 1 <= j) return clamp01(upper_series(*this, j, n_));
            return clamp01(1.0 - lower_series(*this, j));
        }
        case Kind::poisson:
        case Kind::negative_binomial: {
            if (double(j) > mean())
                return clamp01(upper_series(*this, j, j + kMaxTerms));
            return clamp01(1.0 - lower_series(*this, j));
        }
    }
    return 0.0;
}

std::pair<double, double> CountingLaw::gaussian_approx(double a) const {
    if (!(a >= 0.0 && a <= 1.0))
        throw std::domain_error("thinning factor must lie in [0,1]");
    // Moment table of the thinned law, arranged so mean == a * mean() holds
    // bit-for-bit.
    const double m = a * mean();
    switch (kind_) {
        case Kind::dirac: return {m, m * (1.0 - a)};
        case Kind::binomial: return {m, m * (1.0 - a * p_)};
        case Kind::poisson: return {m, m};
        case Kind::negative_binomial:
            return {m, m * (1.0 - (1.0 - a) * p_) / (1.0 - p_)};
    }
    return {m, 0.0};
}

std::int64_t CountingLaw::quantile(double u) const {
    if (!(u >= 0.0 && u < 1.0))
        throw std::domain_error("quantile argument must lie in [0,1)");
    if (kind_ == Kind::dirac) return n_;
    const double seed = pmf(0);
    if (seed >= kLinearSeedFloor) {
        double term = seed;
        double acc = term;
        std::int64_t k = 0;
        while (acc <= u && k < kMaxTerms) {
            if (kind_ == Kind::binomial && k >= n_) break;
            term *= pmf_ratio(*this, k);
            acc += term;
            ++k;
        }
        return k;
    }
    // Large parameters: bisect on the tail, P(K <= k) = 1 - tail(k+1).
    std::int64_t lo = 0, hi = kMaxTerms;
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (1.0 - tail(mid + 1) > u)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

std::int64_t CountingLaw::support_bound(double eps) const {
    if (kind_ == Kind::dirac) return n_;
    if (kind_ == Kind::binomial) return n_;
    if (pmf(0) >= kLinearSeedFloor) {
        double term = pmf(0);
        double acc = term;
        for (std::int64_t i = 0; i < kMaxTerms; ++i) {
            if (acc >= 1.0 - eps) return i;
            term *= pmf_ratio(*this, i);
            acc += term;
        }
        return kMaxTerms;
    }
    // Large-parameter laws: bisect on the tail instead.
    std::int64_t lo = std::int64_t(mean());
    std::int64_t hi = kMaxTerms;
    if (tail(hi + 1) > eps) return kMaxTerms;
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (tail(mid + 1) <= eps)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

}  // namespace itad
