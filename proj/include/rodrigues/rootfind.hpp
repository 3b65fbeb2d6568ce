#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <mpfr.h>

#include "rodrigues/exactpoly.hpp"

namespace rodrigues {

using cplx = std::complex<double>;

struct ComplexRootSet {
    std::vector<cplx> roots;
    // Largest certified Newton correction max(|p|, rounding bound)/|p'| over all roots.
    double residual_bound = 0.0;
    int source_degree = 0;
    // Highest working precision used, in bits.
    long precision_bits = 0;
};

struct RootFindOptions {
    double target_precision = 1e-12;
    std::uint64_t seed = 0x5eed;
    mpfr_prec_t start_bits = 64;
    mpfr_prec_t max_bits = 16384;
    unsigned max_sweeps = 600;
    // Exact factors to divide out (with multiplicity) before iterating,
    // e.g. the squarefree part of P for descendants of P^n.
    std::vector<ExactPoly> known_factors;
};

// All roots of p with multiplicity. A root is accepted once its certified
// Newton correction is below the target (or below 8 ulps of the root, the
// resolution of a double). Throws NoConvergence when the precision ceiling is
// reached without every root meeting that test.
ComplexRootSet find_roots(const ExactPoly& p, const RootFindOptions& options);
ComplexRootSet find_roots(const ExactPoly& p, double target_precision);

struct Atom {
    cplx location;
    double mass;
};

struct EmpiricalMeasure {
    std::vector<Atom> atoms;
    double total_mass = 0.0;
};

EmpiricalMeasure empirical_measure(const ComplexRootSet& r);

// P'(z) / (deg P * P(z)), evaluated from the exact coefficients in MPFR.
cplx empirical_cauchy(const ExactPoly& p, cplx z);

// Convex hull, counterclockwise, without collinear points.
std::vector<cplx> convex_hull(std::vector<cplx> points);
double distance_to_hull(const std::vector<cplx>& hull, cplx z);
// Every root lies within tol of the convex hull of the roots of p.
bool hull_containment(const ComplexRootSet& roots, const ExactPoly& p, double tol);
bool hull_containment(const ComplexRootSet& roots, const std::vector<cplx>& base_roots, double tol);

// Roots of a polynomial with double complex coefficients (lowest first), by
// Aberth iteration followed by Newton polishing. Meant for small degrees.
std::vector<cplx> solve_cpoly(const std::vector<cplx>& coeffs);
cplx eval_cpoly(const std::vector<cplx>& coeffs, cplx z);

std::string roots_csv(const std::vector<cplx>& roots);
std::string measure_json(const EmpiricalMeasure& m);

} // namespace rodrigues
