#pragma once

#include <array>
#include <complex>
#include <string>

#include "rodrigues/rational.hpp"
#include "rodrigues/rootfind.hpp"

namespace rodrigues {

// Limit law of the descendants of (z^2 - 1)^n with m ~ alpha n.
struct QuadraticLaw {
    double alpha = 1.0;
    double b_plus = 1.0;      // sqrt(alpha (2 - alpha))
    double atom_mass = 0.0;   // at each of +1 and -1

    // Continuous part on [-b, b], zero outside.
    double density(double x) const;
    // Continuous mass on [-b, x].
    double continuous_cdf(double x) const;
    double continuous_mass() const { return continuous_cdf(b_plus); }
};

QuadraticLaw quadratic_law(double alpha);
QuadraticLaw quadratic_law(const BigRational& alpha);

// Cauchy transform of the limit law off the segment [-b, b], the root of the
// symbol curve with C ~ 1/z at infinity.
cplx quadratic_cauchy(double alpha, cplx z);
// The saddle branch that tends to infinity with z.
cplx quadratic_u_plus(double alpha, cplx z);
cplx quadratic_u_minus(double alpha, cplx z);

struct QuadraticReport {
    double alpha = 0.0;
    std::size_t roots = 0;
    double ks_distance = 0.0;
    std::array<double, 2> atom_fractions{0.0, 0.0};  // near -1, near +1
    double max_imag = 0.0;
    double support_min = 0.0;  // extent of the roots not counted as atoms
    double support_max = 0.0;
    double expected_atom = 0.0;
    double b_plus = 0.0;

    std::string to_json() const;
};

// Atom window eps around +-1; roots inside it are removed from the KS
// comparison when the law has atoms.
QuadraticReport compare_empirical(const ComplexRootSet& roots, double alpha, double atom_window = 0.05);

} // namespace rodrigues
