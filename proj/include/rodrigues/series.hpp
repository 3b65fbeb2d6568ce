#pragma once

#include <vector>

#include "rodrigues/exactpoly.hpp"

namespace rodrigues {

// First `order` Taylor coefficients of a function at `center`.
struct TruncatedSeries {
    ExactComplex center;
    std::vector<ExactComplex> coeffs;

    std::size_t order() const { return coeffs.size(); }
};

namespace series {

using Coeffs = std::vector<ExactComplex>;

Coeffs mul(const Coeffs& a, const Coeffs& b, std::size_t order);
// 1/a; a[0] must be nonzero.
Coeffs inverse(const Coeffs& a, std::size_t order);
// exp(a) for a series with a[0] = 0.
Coeffs exp(const Coeffs& a, std::size_t order);
Coeffs pow(const Coeffs& a, unsigned n, std::size_t order);
// k-th derivative; loses k coefficients.
Coeffs differentiate(const Coeffs& a, unsigned k);
// Expansion of p at center, truncated or zero padded to `order`.
Coeffs expand(const ExactPoly& p, const ExactComplex& center, std::size_t order);

} // namespace series

// Taylor expansion of d^m/dz^m (P e^T / Q)^n at `center`.
// The constant exp(n T(center)) is divided out so everything stays rational;
// linear homogeneous identities are unaffected by the constant factor.
TruncatedSeries series_descendant(const ExactPoly& p, const ExactPoly& q, const ExactPoly& t, unsigned n,
                                  unsigned m, const ExactComplex& center, std::size_t order);

} // namespace rodrigues
