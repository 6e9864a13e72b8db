#pragma once

#include <map>
#include <string>
#include <vector>

namespace itad {

// Laplace transform of Uniform[0,1]: (1 - e^{-alpha})/alpha, phi_u(0) = 1.
// Continuous and strictly decreasing on [0, inf).
double phi_u(double alpha);

// Symmetric density kernels on the unit square with Lebesgue reference
// measure: the Bernoulli edge probability between two locations. Marginals
// nu(f_x), product integrals nu(f_x f_y) and total mass (nu x nu)f are
// closed-form where available, adaptive quadrature otherwise.
class Kernel {
public:
    enum class Family {
        central,              // e^{-a x y}
        central_rational,     // (1 + a x y)^{-d}
        subcentral,           // e^{-a (x + y)}
        subcentral_rational,  // (1 + a x)^{-2} (1 + a y)^{-2}
        decentral,            // constant p
        local,                // q * 1(|x - y| <= r)
    };

    static Kernel central(double a);
    static Kernel central_rational(double a, int d);
    static Kernel subcentral(double a);
    static Kernel subcentral_rational(double a);
    static Kernel decentral(double p);
    static Kernel local(double q, double r);

    Family family() const { return family_; }
    double a() const { return a_; }
    int d() const { return d_; }
    double p() const { return p_; }
    double q() const { return p_; }
    double r() const { return r_; }

    // f(x,y); symmetric, in [0,1]; domain error outside the unit square.
    double eval(double x, double y) const;

    // nu(f_x) = int_0^1 f(x,y) dy, closed form per family.
    double marginal(double x) const;

    // nu(f_x f_y) = int_0^1 f(x,z) f(y,z) dz.
    double product_marginal(double x, double y) const;

    // (nu x nu) f.
    double total_mass() const;

    // True when f does not depend on location (decentral).
    bool spatially_constant() const { return family_ == Family::decentral; }

    // x-locations where the marginal has kinks (local kernel); empty else.
    std::vector<double> marginal_breakpoints() const;

    std::string family_name() const;
    static Family family_from_name(const std::string& name);

private:
    Kernel(Family f, double a, int d, double p, double r)
        : family_(f), a_(a), d_(d), p_(p), r_(r) {}

    Family family_;
    double a_ = 0.0;
    int d_ = 0;
    double p_ = 0.0;  // decentral p / local q
    double r_ = 0.0;  // local radius
};

// Solve for the family's free parameter (a, or r for local, or p itself for
// decentral) so that total_mass() hits target_mass to 1e-9, by bisection.
// `fixed` carries the family's fixed secondary parameters (`d` for
// central_rational, `q` for local). Throws ConfigError when the target is
// outside the attainable range, naming that range.
Kernel calibrate_kernel(Kernel::Family family,
                        const std::map<std::string, double>& fixed,
                        double target_mass);

}  // namespace itad
