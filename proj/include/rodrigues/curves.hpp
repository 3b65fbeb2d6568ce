#pragma once

#include <complex>
#include <string>
#include <vector>

#include "rodrigues/exactpoly.hpp"

namespace rodrigues {

using cplx = std::complex<double>;

enum class CurveVariable { C, W, U };

// A polynomial in z and one fibre variable (C, W or U).
// coeffs_by_power[j] multiplies the j-th power of the fibre variable.
struct BivariateCurve {
    std::vector<ExactPoly> coeffs_by_power;
    CurveVariable variable = CurveVariable::C;
    BigRational alpha;
    int base_degree = 0;

    int degree() const { return static_cast<int>(coeffs_by_power.size()) - 1; }
    // Coefficients of the fibre polynomial at z, lowest power first.
    std::vector<cplx> fibre_coeffs(cplx z) const;
    std::vector<cplx> fibre(cplx z) const;
    cplx evaluate(cplx z, cplx v) const;
    // Derivative of the defining polynomial in the fibre variable.
    BivariateCurve fibre_derivative() const;
    std::string to_json() const;

    friend bool operator==(const BivariateCurve& a, const BivariateCurve& b) {
        return a.coeffs_by_power == b.coeffs_by_power && a.variable == b.variable && a.alpha == b.alpha &&
               a.base_degree == b.base_degree;
    }
};

// sum_k alpha^{k-1} (alpha-k) (d-alpha)^{d-k} / k! P^{(k)} C^{d-k}
BivariateCurve symbol_curve(const ExactPoly& p, const BigRational& alpha);
// sum_k (alpha-k)/k! P^{(k)} W^{d-k}, with W = (d-alpha)/alpha C
BivariateCurve scaled_symbol_curve(const ExactPoly& p, const BigRational& alpha);
// P'(u)(u - z) - alpha P(u)
BivariateCurve saddle_curve(const ExactPoly& p, const BigRational& alpha);

struct SlopeData {
    BigRational essential_slope;
    BigRational other_slope;
    int other_multiplicity = 0;
};

SlopeData slopes_at_infinity(int d, const BigRational& alpha);

// C = alpha / ((d - alpha)(u - z)) and back.
cplx symbol_from_saddle(cplx z, cplx u, double alpha, int d);
cplx saddle_from_symbol(cplx z, cplx c, double alpha, int d);

// Resultant in the fibre variable of two curves, a polynomial in z.
ExactPoly resultant_in_fibre(const std::vector<ExactPoly>& a, const std::vector<ExactPoly>& b);
// Res_u(F, dF/du) for the saddle curve.
ExactPoly saddle_discriminant(const ExactPoly& p, const BigRational& alpha);
// Distinct z-roots of the discriminant.
std::vector<cplx> branch_points(const ExactPoly& p, const BigRational& alpha);

// P and P' both have simple roots.
bool strongly_generic(const ExactPoly& p);

void require_alpha_in_range(const BigRational& alpha, int d);

} // namespace rodrigues
