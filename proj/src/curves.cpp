#include "rodrigues/curves.hpp"

#include "rodrigues/errors.hpp"
#include "rodrigues/rootfind.hpp"

namespace rodrigues {

namespace {

BigRational rat_pow(const BigRational& q, long e) {
    BigRational r = 1;
    BigRational b = e >= 0 ? q : BigRational(1 / q);
    for (long k = 0; k < (e >= 0 ? e : -e); ++k) r *= b;
    return r;
}

ExactPoly exact_quotient(const ExactPoly& a, const ExactPoly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw Error("internal: inexact division in subresultant sequence");
    return q;
}

using UPoly = std::vector<ExactPoly>;  // polynomial in the fibre variable over Q[z]

void trim(UPoly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

int udeg(const UPoly& a) { return static_cast<int>(a.size()) - 1; }

// lc(b)^(deg a - deg b + 1) a = q b + r
UPoly pseudo_remainder(UPoly a, const UPoly& b) {
    const int db = udeg(b);
    const ExactPoly& lb = b.back();
    int steps = udeg(a) - db + 1;
    while (udeg(a) >= db && !a.empty()) {
        ExactPoly la = a.back();
        int shift = udeg(a) - db;
        for (auto& c : a) c = c * lb;
        for (int j = 0; j <= db; ++j) a[static_cast<std::size_t>(j + shift)] -= la * b[static_cast<std::size_t>(j)];
        trim(a);
        --steps;
    }
    if (steps > 0) {
        ExactPoly f = poly_pow(lb, static_cast<unsigned>(steps));
        for (auto& c : a) c = c * f;
    }
    return a;
}

} // namespace

void require_alpha_in_range(const BigRational& alpha, int d) {
    if (sgn(alpha) <= 0 || alpha >= d)
        throw AlphaOutOfRange("alpha = " + to_string(alpha) + " must lie strictly between 0 and " + std::to_string(d));
}

std::vector<cplx> BivariateCurve::fibre_coeffs(cplx z) const {
    std::vector<cplx> out(coeffs_by_power.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        cplx acc = 0.0;
        const auto& c = coeffs_by_power[j].coeffs();
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + to_double(*it);
        out[j] = acc;
    }
    return out;
}

std::vector<cplx> BivariateCurve::fibre(cplx z) const { return solve_cpoly(fibre_coeffs(z)); }

cplx BivariateCurve::evaluate(cplx z, cplx v) const { return eval_cpoly(fibre_coeffs(z), v); }

BivariateCurve BivariateCurve::fibre_derivative() const {
    BivariateCurve out = *this;
    out.coeffs_by_power.clear();
    for (std::size_t j = 1; j < coeffs_by_power.size(); ++j)
        out.coeffs_by_power.push_back(coeffs_by_power[j] * BigRational(static_cast<long>(j)));
    return out;
}

std::string BivariateCurve::to_json() const {
    const char* tag = variable == CurveVariable::C ? "C" : variable == CurveVariable::W ? "W" : "U";
    std::string out = "{\"alpha\":\"" + to_string(alpha) + "\",\"variable\":\"" + tag + "\",\"degree\":" +
                      std::to_string(base_degree) + ",\"coeffs\":[";
    for (std::size_t j = 0; j < coeffs_by_power.size(); ++j) {
        if (j) out += ",";
        out += "[";
        const auto& c = coeffs_by_power[j].coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) out += (i ? ",\"" : "\"") + to_string(c[i]) + "\"";
        out += "]";
    }
    return out + "]}";
}

BivariateCurve symbol_curve(const ExactPoly& p, const BigRational& alpha) {
    const int d = p.degree();
    require_alpha_in_range(alpha, d);
    BivariateCurve c;
    c.variable = CurveVariable::C;
    c.alpha = alpha;
    c.base_degree = d;
    c.coeffs_by_power.resize(static_cast<std::size_t>(d) + 1);
    BigRational gap = d - alpha;
    for (int k = 0; k <= d; ++k) {
        BigRational s = rat_pow(alpha, k - 1) * (alpha - k) * rat_pow(gap, d - k) / BigRational(factorial(k));
        c.coeffs_by_power[static_cast<std::size_t>(d - k)] = p.derivative(static_cast<unsigned>(k)) * s;
    }
    return c;
}

BivariateCurve scaled_symbol_curve(const ExactPoly& p, const BigRational& alpha) {
    const int d = p.degree();
    require_alpha_in_range(alpha, d);
    BivariateCurve c;
    c.variable = CurveVariable::W;
    c.alpha = alpha;
    c.base_degree = d;
    c.coeffs_by_power.resize(static_cast<std::size_t>(d) + 1);
    for (int k = 0; k <= d; ++k) {
        BigRational s = (alpha - k) / BigRational(factorial(k));
        c.coeffs_by_power[static_cast<std::size_t>(d - k)] = p.derivative(static_cast<unsigned>(k)) * s;
    }
    return c;
}

BivariateCurve saddle_curve(const ExactPoly& p, const BigRational& alpha) {
    const int d = p.degree();
    require_alpha_in_range(alpha, d);
    BivariateCurve c;
    c.variable = CurveVariable::U;
    c.alpha = alpha;
    c.base_degree = d;
    for (int j = 0; j <= d; ++j) {
        BigRational a = (j - alpha) * p.coeff(static_cast<std::size_t>(j));
        BigRational b = -BigRational(j + 1) * p.coeff(static_cast<std::size_t>(j + 1));
        c.coeffs_by_power.push_back(ExactPoly(std::vector<BigRational>{a, b}));
    }
    return c;
}

SlopeData slopes_at_infinity(int d, const BigRational& alpha) {
    require_alpha_in_range(alpha, d);
    return {BigRational(d / alpha - 1), BigRational(-1), d - 1};
}

cplx symbol_from_saddle(cplx z, cplx u, double alpha, int d) {
    if (u == z) throw DegenerateInput("u = z has no image in symbol coordinates");
    return alpha / ((d - alpha) * (u - z));
}

cplx saddle_from_symbol(cplx z, cplx c, double alpha, int d) {
    if (c == cplx(0.0)) throw DegenerateInput("C = 0 has no image in saddle coordinates");
    return z + alpha / ((d - alpha) * c);
}

// Subresultant pseudo-remainder sequence over Q[z], contents not removed.
ExactPoly resultant_in_fibre(const std::vector<ExactPoly>& a_in, const std::vector<ExactPoly>& b_in) {
    UPoly a = a_in, b = b_in;
    trim(a);
    trim(b);
    if (a.empty() || b.empty()) return {};
    ExactPoly sign{1};
    if (udeg(a) < udeg(b)) {
        std::swap(a, b);
        if (udeg(a) % 2 == 1 && udeg(b) % 2 == 1) sign = -sign;
    }
    if (udeg(b) == 0) return sign * poly_pow(b[0], static_cast<unsigned>(udeg(a)));
    ExactPoly g{1}, h{1};
    for (;;) {
        int delta = udeg(a) - udeg(b);
        if (udeg(a) % 2 == 1 && udeg(b) % 2 == 1) sign = -sign;
        UPoly r = pseudo_remainder(a, b);
        a = b;
        ExactPoly div = g * poly_pow(h, static_cast<unsigned>(delta));
        for (auto& c : r) c = exact_quotient(c, div);
        b = std::move(r);
        g = a.back();
        if (delta == 0) {
        } else if (delta == 1) {
            h = g;
        } else {
            h = exact_quotient(poly_pow(g, static_cast<unsigned>(delta)), poly_pow(h, static_cast<unsigned>(delta - 1)));
        }
        if (b.empty()) return {};
        if (udeg(b) == 0) break;
    }
    int da = udeg(a);
    // h^(1 - deg a) lc(b)^(deg a)
    ExactPoly num = poly_pow(b.back(), static_cast<unsigned>(da));
    ExactPoly res = da >= 1 ? exact_quotient(num, poly_pow(h, static_cast<unsigned>(da - 1)))
                            : num * poly_pow(h, 1);
    return sign * res;
}

ExactPoly saddle_discriminant(const ExactPoly& p, const BigRational& alpha) {
    BivariateCurve f = saddle_curve(p, alpha);
    return resultant_in_fibre(f.coeffs_by_power, f.fibre_derivative().coeffs_by_power);
}

std::vector<cplx> branch_points(const ExactPoly& p, const BigRational& alpha) {
    ExactPoly disc = saddle_discriminant(p, alpha);
    ExactPoly sf = squarefree_part(disc);
    if (sf.degree() < 1) return {};
    return find_roots(sf, 1e-15).roots;
}

bool strongly_generic(const ExactPoly& p) {
    if (p.degree() < 2) return false;
    ExactPoly d1 = p.derivative(), d2 = d1.derivative();
    return gcd(p, d1).degree() == 0 && gcd(d1, d2).degree() == 0;
}

} // namespace rodrigues
