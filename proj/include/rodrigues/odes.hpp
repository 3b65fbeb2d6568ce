#pragma once

#include <map>
#include <utility>
#include <vector>

#include "rodrigues/curves.hpp"
#include "rodrigues/exactpoly.hpp"
#include "rodrigues/series.hpp"

namespace rodrigues {

// sum_i coeffs[i] * y^{(order - i)}
struct LinearODE {
    int order = 0;
    std::vector<ExactPoly> coeffs;

    ExactPoly apply(const ExactPoly& y) const;
    ExactRatFun apply(const ExactRatFun& y) const;
};

struct OdeCheck {
    bool exact = false;
    // Largest |coefficient| of L[y] (0 when exact).
    double residual = 0.0;
};

OdeCheck verify_ode(const LinearODE& ode, const ExactPoly& y);
OdeCheck verify_ode(const LinearODE& ode, const ExactRatFun& y);
// Series input needs at least order + margin coefficients; L[y] is checked on
// the coefficients it determines.
OdeCheck verify_ode(const LinearODE& ode, const TruncatedSeries& y, unsigned margin = 1);

// Operator annihilating d^m/dz^m (P e^T / Q)^n, of order deg P + deg Q + deg T,
// multiplied through by (m + d - 1)!.
LinearODE build_ode_general(const ExactPoly& p, const ExactPoly& q, const ExactPoly& t, unsigned n, unsigned m);
// Special case Q = 1, T = 0, built from its own closed form.
LinearODE build_ode_poly(const ExactPoly& p, unsigned n, unsigned m);
// Special case T = 0.
LinearODE build_ode_rational(const ExactPoly& p, const ExactPoly& q, unsigned n, unsigned m);

// Polynomial in the formal symbols n and m with rational coefficients.
class NMPoly {
public:
    NMPoly() = default;
    static NMPoly constant(const BigRational& c);
    static NMPoly n_symbol();
    static NMPoly m_symbol();

    BigRational eval(const BigRational& n, const BigRational& m) const;
    // Substitute m = alpha n, giving a polynomial in n.
    ExactPoly along_ray(const BigRational& alpha) const;
    bool is_zero() const { return terms_.empty(); }

    NMPoly& operator+=(const NMPoly& o);
    friend NMPoly operator+(NMPoly a, const NMPoly& b) { return a += b; }
    friend NMPoly operator*(const NMPoly& a, const NMPoly& b);
    friend NMPoly operator*(const BigRational& c, const NMPoly& a);

private:
    void prune();
    std::map<std::pair<unsigned, unsigned>, BigRational> terms_;  // (deg n, deg m) -> coefficient
};

// The polynomial-case operator with n and m left symbolic: the coefficient of
// y^{(d-i)} is scalars[i](n, m) * P^{(i)}.
struct SymbolicODEFamily {
    int order = 0;
    std::vector<NMPoly> scalars;
    std::vector<ExactPoly> z_factors;

    LinearODE specialize(unsigned n, unsigned m) const;
};

SymbolicODEFamily symbolic_ode_poly(const ExactPoly& p);

// Formal n -> infinity limit of the symbolic operator along m = alpha n.
BivariateCurve limit_symbol(const ExactPoly& p, const BigRational& alpha);

// |integral of z^k d^n/dz^n (P^n) along the segment root_i -> root_j|, divided
// by the segment length times the largest integrand modulus on it.
double verify_multiple_orthogonality(const ExactPoly& p, unsigned n, unsigned k, std::size_t i, std::size_t j);

} // namespace rodrigues
