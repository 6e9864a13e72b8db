#include "itad/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "itad/errors.hpp"
#include "itad/quadrature.hpp"

namespace itad {

double phi_u(double alpha) {
    if (alpha < 0.0) throw std::domain_error("phi_u requires alpha >= 0");
    if (alpha < 1e-4) {
        // Alternating series 1 - a/2 + a^2/6 - a^3/24 + a^4/120; the next
        // term is below 1e-23 on this branch.
        return 1.0 + alpha * (-1.0 / 2.0 +
                     alpha * (1.0 / 6.0 +
                     alpha * (-1.0 / 24.0 + alpha * (1.0 / 120.0))));
    }
    return -std::expm1(-alpha) / alpha;
}

namespace {

void check_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::domain_error(std::string(what) + " must lie in [0,1]");
    }
}

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

Kernel Kernel::central(double a) {
    if (!(a >= 0.0)) throw ConfigError("central kernel requires a >= 0");
    return Kernel(Family::central, a, 0, 0.0, 0.0);
}

Kernel Kernel::central_rational(double a, int d) {
    if (!(a >= 0.0)) throw ConfigError("central_rational kernel requires a >= 0");
    if (d < 1) throw ConfigError("central_rational kernel requires d >= 1");
    return Kernel(Family::central_rational, a, d, 0.0, 0.0);
}

Kernel Kernel::subcentral(double a) {
    if (!(a >= 0.0)) throw ConfigError("subcentral kernel requires a >= 0");
    return Kernel(Family::subcentral, a, 0, 0.0, 0.0);
}

Kernel Kernel::subcentral_rational(double a) {
    if (!(a >= 0.0)) throw ConfigError("subcentral_rational kernel requires a >= 0");
    return Kernel(Family::subcentral_rational, a, 0, 0.0, 0.0);
}

Kernel Kernel::decentral(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("decentral kernel requires p in [0,1]");
    return Kernel(Family::decentral, 0.0, 0, p, 0.0);
}

Kernel Kernel::local(double q, double r) {
    if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("local kernel requires q in [0,1]");
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("local kernel requires r in [0,1]");
    return Kernel(Family::local, 0.0, 0, q, r);
}

double Kernel::eval(double x, double y) const {
    check_unit(x, "kernel location x");
    check_unit(y, "kernel location y");
    switch (family_) {
        // products grouped as a*(x*y) etc. so eval(x,y) == eval(y,x) exactly
        case Family::central: return std::exp(-a_ * (x * y));
        case Family::central_rational:
            return std::pow(1.0 + a_ * (x * y), -double(d_));
        case Family::subcentral: return std::exp(-a_ * (x + y));
        case Family::subcentral_rational: {
            const double u = 1.0 + a_ * x;
            const double v = 1.0 + a_ * y;
            return 1.0 / ((u * u) * (v * v));
        }
        case Family::decentral: return p_;
        case Family::local: return std::abs(x - y) <= r_ ? p_ : 0.0;
    }
    return 0.0;
}

double Kernel::marginal(double x) const {
    check_unit(x, "kernel location x");
    switch (family_) {
        case Family::central: return phi_u(a_ * x);
        case Family::central_rational: {
            const double t = a_ * x;
            if (d_ == 1) {
                if (t < 1e-8) return 1.0 - t / 2.0;
                return std::log1p(t) / t;
            }
            if (d_ == 2) return 1.0 / (1.0 + t);
            if (t < 1e-8) return 1.0 - double(d_) * t / 2.0;
            return (1.0 - std::pow(1.0 + t, 1.0 - double(d_))) /
                   (double(d_ - 1) * t);
        }
        case Family::subcentral: return std::exp(-a_ * x) * phi_u(a_);
        case Family::subcentral_rational: {
            const double u = 1.0 + a_ * x;
            return 1.0 / ((1.0 + a_) * u * u);
        }
        case Family::decentral: return p_;
        case Family::local:
            return p_ * (std::min(1.0, x + r_) - std::max(0.0, x - r_));
    }
    return 0.0;
}

double Kernel::product_marginal(double x, double y) const {
    check_unit(x, "kernel location x");
    check_unit(y, "kernel location y");
    switch (family_) {
        case Family::central: return phi_u(a_ * (x + y));
        case Family::subcentral: return std::exp(-a_ * (x + y)) * phi_u(2.0 * a_);
        case Family::decentral: return p_ * p_;
        case Family::local: {
            const double lo = std::max({x - r_, y - r_, 0.0});
            const double hi = std::min({x + r_, y + r_, 1.0});
            return p_ * p_ * std::max(0.0, hi - lo);
        }
        case Family::central_rational:
        case Family::subcentral_rational:
            return quad::integrate_adaptive(
                [&](double z) { return eval(x, clip01(z)) * eval(y, clip01(z)); },
                0.0, 1.0, 1e-10);
    }
    return 0.0;
}

double Kernel::total_mass() const {
    switch (family_) {
        case Family::subcentral: {
            const double m = phi_u(a_);
            return m * m;
        }
        case Family::decentral: return p_;
        case Family::local: return p_ * (2.0 * r_ - r_ * r_);
        case Family::central:
        case Family::central_rational:
        case Family::subcentral_rational:
            return quad::integrate_adaptive(
                [&](double x) { return marginal(clip01(x)); }, 0.0, 1.0, 1e-12);
    }
    return 0.0;
}

std::vector<double> Kernel::marginal_breakpoints() const {
    if (family_ != Family::local) return {};
    std::vector<double> bps;
    for (double b : {r_, 1.0 - r_})
        if (b > 0.0 && b < 1.0) bps.push_back(b);
    std::sort(bps.begin(), bps.end());
    return bps;
}

std::string Kernel::family_name() const {
    switch (family_) {
        case Family::central: return "central";
        case Family::central_rational: return "central_rational";
        case Family::subcentral: return "subcentral";
        case Family::subcentral_rational: return "subcentral_rational";
        case Family::decentral: return "decentral";
        case Family::local: return "local";
    }
    return "?";
}

Kernel::Family Kernel::family_from_name(const std::string& name) {
    if (name == "central") return Family::central;
    if (name == "central_rational") return Family::central_rational;
    if (name == "subcentral") return Family::subcentral;
    if (name == "subcentral_rational") return Family::subcentral_rational;
    if (name == "decentral") return Family::decentral;
    if (name == "local") return Family::local;
    throw ConfigError("unknown kernel family: " + name);
}

namespace {

double fixed_param(const std::map<std::string, double>& fixed,
                   const std::string& name, double fallback,
                   bool required) {
    auto it = fixed.find(name);
    if (it == fixed.end()) {
        if (required)
            throw ConfigError("calibration needs fixed parameter '" + name + "'");
        return fallback;
    }
    return it->second;
}

}  // namespace

Kernel calibrate_kernel(Kernel::Family family,
                        const std::map<std::string, double>& fixed,
                        double target_mass) {
    std::function<Kernel(double)> make;
    double lo = 1e-8, hi = 1e6;
    switch (family) {
        case Kernel::Family::central:
            make = [](double a) { return Kernel::central(a); };
            break;
        case Kernel::Family::central_rational: {
            const int d = int(fixed_param(fixed, "d", 2.0, false));
            make = [d](double a) { return Kernel::central_rational(a, d); };
            break;
        }
        case Kernel::Family::subcentral:
            make = [](double a) { return Kernel::subcentral(a); };
            break;
        case Kernel::Family::subcentral_rational:
            make = [](double a) { return Kernel::subcentral_rational(a); };
            break;
        case Kernel::Family::decentral:
            make = [](double p) { return Kernel::decentral(p); };
            lo = 0.0;
            hi = 1.0;
            break;
        case Kernel::Family::local: {
            const double q = fixed_param(fixed, "q", 0.0, true);
            make = [q](double r) { return Kernel::local(q, r); };
            lo = 0.0;
            hi = 1.0;
            break;
        }
    }

    double mass_lo = make(lo).total_mass();
    double mass_hi = make(hi).total_mass();
    const double attainable_min = std::min(mass_lo, mass_hi);
    const double attainable_max = std::max(mass_lo, mass_hi);
    if (!(target_mass >= attainable_min && target_mass <= attainable_max)) {
        throw ConfigError("calibration target " + std::to_string(target_mass) +
                          " outside attainable mass range [" +
                          std::to_string(attainable_min) + ", " +
                          std::to_string(attainable_max) + "]");
    }

    const bool increasing = mass_hi >= mass_lo;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double mass = make(mid).total_mass();
        if (std::abs(mass - target_mass) <= 1e-12) break;
        const bool below = increasing ? (mass < target_mass) : (mass > target_mass);
        if (below)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * std::max(1.0, std::abs(mid))) {
            mid = 0.5 * (lo + hi);
            break;
        }
    }
    return make(mid);
}

}  // namespace itad
