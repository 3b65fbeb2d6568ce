#pragma once

#include <string>
#include <vector>

#include "rodrigues/curves.hpp"
#include "rodrigues/exactpoly.hpp"

namespace rodrigues {

struct ResidueEntry {
    std::string label;
    bool at_infinity = false;
    cplx location;       // z of the pole; unused at infinity
    cplx fibre_point;    // u = z at a root, the critical point at infinity, or infinity itself
    cplx computed;
    double expected = 0.0;
    double abs_error = 0.0;
    int turns = 1;       // sheets permuted by the loop around the pole
    double spread = 0.0; // largest change across the radii
};

struct ResidueReport {
    std::vector<ResidueEntry> entries;
    cplx sum;

    double max_imag() const;
    double max_error() const;
    // Real residues, zero sum and agreement with the closed forms.
    bool passes(double reality_tol = 1e-9, double sum_tol = 1e-9, double value_tol = 1e-7) const;
    std::string to_json() const;
};

// Residues of W dz on the scaled symbol curve, W = 1/(u - z) in terms of the
// saddle fibre: (1 - alpha)/alpha at each root of P, 1 on the d - 1 slope -1
// branches at infinity and (alpha - d)/alpha on the remaining one.
ResidueReport residues_scaled_curve(const ExactPoly& p, const BigRational& alpha);

// Residues of alpha dz / ((d - alpha)(u - z)) on the saddle curve:
// (1 - alpha)/(d - alpha) at (z_j, z_j), alpha/(d - alpha) at (inf, q) with
// P'(q) = 0, and -1 at (inf, inf).
ResidueReport residues_saddle_curve(const ExactPoly& p, const BigRational& alpha);

// A closed polygon in z (last vertex joins the first) and the saddle at the
// first vertex that picks the sheet.
struct FibreLoop {
    std::vector<cplx> vertices;
    cplx start_saddle;
};

struct PeriodCheck {
    std::vector<cplx> periods;  // integral of W dz along each lifted loop
    std::vector<int> turns;     // traversals needed to close the lift
    double max_real = 0.0;      // periods are 2 pi i times real residue sums
};

PeriodCheck period_reality_check(const ExactPoly& p, const BigRational& alpha, const std::vector<FibreLoop>& loops);

} // namespace rodrigues
