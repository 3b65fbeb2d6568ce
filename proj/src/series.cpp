#include "rodrigues/series.hpp"

#include <algorithm>

#include "rodrigues/errors.hpp"

namespace rodrigues {
namespace series {

Coeffs mul(const Coeffs& a, const Coeffs& b, std::size_t order) {
    Coeffs out(order);
    for (std::size_t i = 0; i < std::min(a.size(), order); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && i + j < order; ++j)
            if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
    }
    return out;
}

Coeffs inverse(const Coeffs& a, std::size_t order) {
    if (a.empty() || a[0].is_zero()) throw std::domain_error("series inverse needs a nonzero constant term");
    Coeffs out(order);
    if (order == 0) return out;
    ExactComplex inv0 = a[0].inverse();
    out[0] = inv0;
    for (std::size_t k = 1; k < order; ++k) {
        ExactComplex acc;
        for (std::size_t j = 1; j <= k && j < a.size(); ++j) acc += a[j] * out[k - j];
        out[k] = -(acc * inv0);
    }
    return out;
}

Coeffs exp(const Coeffs& a, std::size_t order) {
    if (!a.empty() && !a[0].is_zero()) throw std::domain_error("series exp needs a zero constant term");
    // E' = A'E, i.e. k E_k = sum_j j A_j E_{k-j}.
    Coeffs out(order);
    if (order == 0) return out;
    out[0] = ExactComplex(1);
    for (std::size_t k = 1; k < order; ++k) {
        ExactComplex acc;
        for (std::size_t j = 1; j <= k && j < a.size(); ++j)
            if (!a[j].is_zero()) acc += a[j] * out[k - j] * ExactComplex(BigRational(static_cast<long>(j)));
        out[k] = acc * ExactComplex(BigRational(1, static_cast<long>(k)));
    }
    return out;
}

Coeffs pow(const Coeffs& a, unsigned n, std::size_t order) {
    Coeffs result(order);
    if (order == 0) return result;
    result[0] = ExactComplex(1);
    Coeffs base(a.begin(), a.begin() + static_cast<long>(std::min(a.size(), order)));
    while (n > 0) {
        if (n & 1u) result = mul(result, base, order);
        n >>= 1;
        if (n > 0) base = mul(base, base, order);
    }
    return result;
}

Coeffs differentiate(const Coeffs& a, unsigned k) {
    if (a.size() <= k) return {};
    Coeffs out(a.size() - k);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a[i + k] * ExactComplex(BigRational(falling_factorial(static_cast<long>(i + k), k)));
    return out;
}

Coeffs expand(const ExactPoly& p, const ExactComplex& center, std::size_t order) {
    Coeffs c = p.taylor_shift(center);
    c.resize(order);
    return c;
}

} // namespace series

TruncatedSeries series_descendant(const ExactPoly& p, const ExactPoly& q, const ExactPoly& t, unsigned n,
                                  unsigned m, const ExactComplex& center, std::size_t order) {
    if (q(center).is_zero()) throw CenterIsPole("Q vanishes at the expansion center " + to_string(center));
    if (order == 0) throw InvalidArgument("series order must be positive");
    const std::size_t work = order + m;

    series::Coeffs base = series::expand(p, center, work);
    base = series::mul(base, series::inverse(series::expand(q, center, work), work), work);
    series::Coeffs f = series::pow(base, n, work);

    series::Coeffs tc = series::expand(t, center, work);
    if (!tc.empty()) tc[0] = ExactComplex();
    for (auto& c : tc) c *= ExactComplex(BigRational(static_cast<long>(n)));
    f = series::mul(f, series::exp(tc, work), work);

    return {center, series::differentiate(f, m)};
}

} // namespace rodrigues
