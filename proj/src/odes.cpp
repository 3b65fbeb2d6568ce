#include "rodrigues/odes.hpp"

#include <algorithm>
#include <cmath>

#include "rodrigues/errors.hpp"
#include "rodrigues/mpeval.hpp"
#include "rodrigues/quadrature.hpp"
#include "rodrigues/rootfind.hpp"

namespace rodrigues {

namespace {

double max_abs(const ExactPoly& p) {
    double m = 0.0;
    for (const auto& c : p.coeffs()) m = std::max(m, std::abs(to_double(c)));
    return m;
}

// (m + d - 1)! / (m + d - i)!, the factor that clears the factorials.
BigRational clearing_factor(long md, int i) {
    if (i == 0) return md > 0 ? BigRational(1, md) : BigRational(1);
    return BigRational(falling_factorial(md - 1, static_cast<unsigned long>(i - 1)));
}

std::vector<ExactPoly> derivatives(const ExactPoly& p, int count) {
    std::vector<ExactPoly> out{p};
    for (int k = 1; k <= count; ++k) out.push_back(out.back().derivative());
    return out;
}

} // namespace

ExactPoly LinearODE::apply(const ExactPoly& y) const {
    ExactPoly acc;
    for (int i = 0; i <= order; ++i) acc += coeffs[static_cast<std::size_t>(i)] * y.derivative(static_cast<unsigned>(order - i));
    return acc;
}

ExactRatFun LinearODE::apply(const ExactRatFun& y) const {
    std::vector<ExactRatFun> dy{y};
    for (int k = 1; k <= order; ++k) dy.push_back(dy.back().derivative());
    ExactRatFun acc(ExactPoly{});
    for (int i = 0; i <= order; ++i)
        acc = acc + ExactRatFun(coeffs[static_cast<std::size_t>(i)]) * dy[static_cast<std::size_t>(order - i)];
    return acc;
}

OdeCheck verify_ode(const LinearODE& ode, const ExactPoly& y) {
    ExactPoly r = ode.apply(y);
    return {r.is_zero(), max_abs(r)};
}

OdeCheck verify_ode(const LinearODE& ode, const ExactRatFun& y) {
    ExactRatFun r = ode.apply(y);
    return {r.num().is_zero(), max_abs(r.num())};
}

OdeCheck verify_ode(const LinearODE& ode, const TruncatedSeries& y, unsigned margin) {
    const std::size_t d = static_cast<std::size_t>(ode.order);
    if (y.order() < d + margin)
        throw InsufficientOrder("series of order " + std::to_string(y.order()) + " cannot check an operator of order " +
                                std::to_string(d) + " (need " + std::to_string(d + margin) + ")");
    const std::size_t len = y.order() - d;
    series::Coeffs acc(len);
    for (std::size_t i = 0; i <= d; ++i) {
        series::Coeffs c = series::expand(ode.coeffs[i], y.center, len);
        series::Coeffs dy = series::differentiate(y.coeffs, static_cast<unsigned>(d - i));
        series::Coeffs prod = series::mul(c, dy, len);
        for (std::size_t k = 0; k < len; ++k) acc[k] += prod[k];
    }
    OdeCheck out{true, 0.0};
    for (const auto& c : acc) {
        if (!c.is_zero()) {
            out.exact = false;
            out.residual = std::max(out.residual, std::abs(c.to_complex()));
        }
    }
    return out;
}

LinearODE build_ode_general(const ExactPoly& p, const ExactPoly& q, const ExactPoly& t, unsigned n, unsigned m) {
    if (p.is_zero() || q.is_zero()) throw InvalidArgument("P and Q must be nonzero");
    if (gcd(p, q).degree() > 0) throw InvalidArgument("P and Q must be coprime");
    const int d = p.degree() + q.degree() + std::max(t.degree(), 0);
    const long md = static_cast<long>(m) + d;
    const BigRational nn(static_cast<long>(n));
    auto pd = derivatives(p, d), qd = derivatives(q, d), td = derivatives(t, d);

    LinearODE ode;
    ode.order = d;
    for (int i = 0; i <= d; ++i) {
        ExactPoly acc;
        for (int j = 0; j <= i; ++j) {
            for (int k = 0; k <= j; ++k) {
                BigRational denom(factorial(static_cast<unsigned long>(i - j)) * factorial(static_cast<unsigned long>(j - k)) *
                                  factorial(static_cast<unsigned long>(k)));
                ExactPoly term = pd[static_cast<std::size_t>(i - j)] * qd[static_cast<std::size_t>(j - k)];
                if (k == 0) {
                    BigRational num = BigRational(md - i) + nn * (2 * j - i);
                    acc += term * BigRational(num / denom);
                } else {
                    BigRational num = -nn * k;
                    acc += term * td[static_cast<std::size_t>(k)] * BigRational(num / denom);
                }
            }
        }
        ode.coeffs.push_back(acc * clearing_factor(md, i));
    }
    return ode;
}

LinearODE build_ode_poly(const ExactPoly& p, unsigned n, unsigned m) {
    const int d = p.degree();
    if (d < 1) throw InvalidArgument("build_ode_poly needs deg P >= 1");
    const long md = static_cast<long>(m) + d;
    LinearODE ode;
    ode.order = d;
    for (int i = 0; i <= d; ++i) {
        // (m - n d) - (i - d)(n + 1) = m + d - i - n i
        BigRational num(md - i - static_cast<long>(n) * i);
        BigRational s = num / BigRational(factorial(static_cast<unsigned long>(i))) * clearing_factor(md, i);
        ode.coeffs.push_back(p.derivative(static_cast<unsigned>(i)) * s);
    }
    return ode;
}

LinearODE build_ode_rational(const ExactPoly& p, const ExactPoly& q, unsigned n, unsigned m) {
    return build_ode_general(p, q, ExactPoly{}, n, m);
}

NMPoly NMPoly::constant(const BigRational& c) {
    NMPoly r;
    r.terms_[{0, 0}] = c;
    r.prune();
    return r;
}

NMPoly NMPoly::n_symbol() {
    NMPoly r;
    r.terms_[{1, 0}] = 1;
    return r;
}

NMPoly NMPoly::m_symbol() {
    NMPoly r;
    r.terms_[{0, 1}] = 1;
    return r;
}

void NMPoly::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (sgn(it->second) == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

BigRational NMPoly::eval(const BigRational& n, const BigRational& m) const {
    BigRational acc = 0;
    for (const auto& [deg, c] : terms_) {
        BigRational t = c;
        for (unsigned a = 0; a < deg.first; ++a) t *= n;
        for (unsigned b = 0; b < deg.second; ++b) t *= m;
        acc += t;
    }
    return acc;
}

ExactPoly NMPoly::along_ray(const BigRational& alpha) const {
    ExactPoly acc;
    for (const auto& [deg, c] : terms_) {
        BigRational t = c;
        for (unsigned b = 0; b < deg.second; ++b) t *= alpha;
        acc += ExactPoly::monomial(t, deg.first + deg.second);
    }
    return acc;
}

NMPoly& NMPoly::operator+=(const NMPoly& o) {
    for (const auto& [deg, c] : o.terms_) terms_[deg] += c;
    prune();
    return *this;
}

NMPoly operator*(const NMPoly& a, const NMPoly& b) {
    NMPoly r;
    for (const auto& [da, ca] : a.terms_)
        for (const auto& [db, cb] : b.terms_) r.terms_[{da.first + db.first, da.second + db.second}] += ca * cb;
    r.prune();
    return r;
}

NMPoly operator*(const BigRational& c, const NMPoly& a) { return NMPoly::constant(c) * a; }

LinearODE SymbolicODEFamily::specialize(unsigned n, unsigned m) const {
    LinearODE ode;
    ode.order = order;
    BigRational nn(static_cast<long>(n)), mm(static_cast<long>(m));
    for (std::size_t i = 0; i < scalars.size(); ++i) ode.coeffs.push_back(z_factors[i] * scalars[i].eval(nn, mm));
    return ode;
}

SymbolicODEFamily symbolic_ode_poly(const ExactPoly& p) {
    const int d = p.degree();
    if (d < 1) throw InvalidArgument("symbolic_ode_poly needs deg P >= 1");
    SymbolicODEFamily fam;
    fam.order = d;
    const NMPoly n = NMPoly::n_symbol(), m = NMPoly::m_symbol();
    for (int i = 0; i <= d; ++i) {
        fam.z_factors.push_back(p.derivative(static_cast<unsigned>(i)));
        if (i == 0) {
            // (m + d) (m + d - 1)! / (m + d)! = 1
            fam.scalars.push_back(NMPoly::constant(1));
            continue;
        }
        NMPoly s = m + NMPoly::constant(d - i) + BigRational(-i) * n;
        for (int t = 1; t <= i - 1; ++t) s = s * (m + NMPoly::constant(d - t));
        fam.scalars.push_back(BigRational(1, factorial(static_cast<unsigned long>(i))) * s);
    }
    return fam;
}

BivariateCurve limit_symbol(const ExactPoly& p, const BigRational& alpha) {
    const int d = p.degree();
    require_alpha_in_range(alpha, d);
    SymbolicODEFamily fam = symbolic_ode_poly(p);
    BivariateCurve curve;
    curve.variable = CurveVariable::C;
    curve.alpha = alpha;
    curve.base_degree = d;
    curve.coeffs_by_power.resize(static_cast<std::size_t>(d) + 1);
    BigRational gap = d - alpha;
    for (int i = 0; i <= d; ++i) {
        // y^{(d-i)}/y -> (n (d - alpha) C)^{d-i}
        BigRational g = 1;
        for (int k = 0; k < d - i; ++k) g *= gap;
        ExactPoly in_n = fam.scalars[static_cast<std::size_t>(i)].along_ray(alpha) *
                         ExactPoly::monomial(g, static_cast<std::size_t>(d - i));
        if (in_n.degree() > d) throw Error("internal: symbolic coefficient grows faster than n^d");
        curve.coeffs_by_power[static_cast<std::size_t>(d - i)] =
            fam.z_factors[static_cast<std::size_t>(i)] * in_n.coeff(static_cast<std::size_t>(d));
    }
    return curve;
}

double verify_multiple_orthogonality(const ExactPoly& p, unsigned n, unsigned k, std::size_t i, std::size_t j) {
    if (p.degree() < 1 || gcd(p, p.derivative()).degree() > 0) throw RepeatedRoots("P must have simple roots");
    if (n == 0 || k >= n) throw InvalidArgument("need 0 <= k <= n - 1");
    std::vector<cplx> roots = find_roots(p, 1e-15).roots;
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    if (i >= roots.size() || j >= roots.size()) throw InvalidArgument("root index out of range");
    const cplx a = roots[i], b = roots[j];
    if (a == b) return 0.0;

    MpPolyEvaluator ev(rodrigues_descendant(p, n, n) * ExactPoly::monomial(1, k), 256);
    const cplx half = (b - a) / 2.0;
    auto integrate = [&](int nodes, double& fmax) {
        GaussRule rule = gauss_legendre(nodes);
        cplx sum = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            cplx f = ev.value(a + half * (rule.nodes[q] + 1.0));
            fmax = std::max(fmax, std::abs(f));
            sum += rule.weights[q] * f;
        }
        return sum * half;
    };
    double fmax = 0.0;
    cplx prev = integrate(64, fmax);
    cplx cur = prev;
    for (int nodes = 128; nodes <= 4096; nodes *= 2) {
        cur = integrate(nodes, fmax);
        double scale = fmax * std::abs(b - a);
        if (std::abs(cur - prev) <= 1e-12 * scale) break;
        prev = cur;
    }
    double scale = fmax * std::abs(b - a);
    return scale > 0.0 ? std::abs(cur) / scale : 0.0;
}

} // namespace rodrigues
