#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rodrigues/curves.hpp"
#include "rodrigues/errors.hpp"

using namespace rodrigues;

namespace {

BigRational q(long a, long b = 1) {
    BigRational r(a, b);
    r.canonicalize();
    return r;
}

ExactPoly random_poly(std::mt19937_64& rng, int degree) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
    std::vector<BigRational> c(static_cast<std::size_t>(degree) + 1);
    for (auto& x : c) x = q(num(rng), den(rng));
    c.back() = q(1 + std::abs(num(rng)), den(rng));
    return ExactPoly(c);
}

BigRational random_alpha(std::mt19937_64& rng, int d) {
    std::uniform_int_distribution<int> num(1, 8 * d - 1);
    return q(num(rng), 8);
}

// Exact value of sum_j c_j(z) v^j at rational z, v.
BigRational eval_exact(const BivariateCurve& c, const BigRational& z, const BigRational& v) {
    BigRational acc = 0, pw = 1;
    for (const auto& cj : c.coeffs_by_power) {
        acc += cj(z) * pw;
        pw *= v;
    }
    return acc;
}

// Determinant by fraction-exact Gaussian elimination.
BigRational determinant(std::vector<std::vector<BigRational>> m) {
    const std::size_t n = m.size();
    BigRational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && sgn(m[piv][c]) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            BigRational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

// Sylvester resultant of two univariate polynomials given low to high.
BigRational sylvester(const std::vector<BigRational>& a, const std::vector<BigRational>& b) {
    const std::size_t da = a.size() - 1, db = b.size() - 1, n = da + db;
    std::vector<std::vector<BigRational>> m(n, std::vector<BigRational>(n));
    for (std::size_t r = 0; r < db; ++r)
        for (std::size_t k = 0; k <= da; ++k) m[r][r + k] = a[da - k];
    for (std::size_t r = 0; r < da; ++r)
        for (std::size_t k = 0; k <= db; ++k) m[db + r][r + k] = b[db - k];
    return determinant(m);
}

} // namespace

TEST_CASE("symbol curve of a quadratic matches the displayed form") {
    ExactPoly p{-1, 0, 1};
    auto c = symbol_curve(p, 1);
    CHECK(c.coeffs_by_power[2] == p);
    CHECK(c.coeffs_by_power[1].is_zero());
    CHECK(c.coeffs_by_power[0] == ExactPoly{-1});

    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
        ExactPoly pq = random_poly(rng, 2).monic();
        BigRational a = random_alpha(rng, 2);
        auto curve = symbol_curve(pq, a);
        BigRational gap = 2 - a;
        // (2-a) P C^2 + (a-1) P' C - a, times (2-a)
        CHECK(curve.coeffs_by_power[2] == pq * BigRational(gap * gap));
        CHECK(curve.coeffs_by_power[1] == pq.derivative() * BigRational((a - 1) * gap));
        CHECK(curve.coeffs_by_power[0] == ExactPoly::constant(BigRational(-a * gap)));
    }
}

TEST_CASE("symbol curve of a cubic matches the displayed form") {
    auto c = symbol_curve(ExactPoly{0, 0, 0, 1}, 1);
    // Divided by (d - alpha) = 2: 4 z^3 C^3 - 3 z C - 1.
    CHECK(c.coeffs_by_power[3] * q(1, 2) == ExactPoly{0, 0, 0, 4});
    CHECK(c.coeffs_by_power[2].is_zero());
    CHECK(c.coeffs_by_power[1] * q(1, 2) == ExactPoly{0, -3});
    CHECK(c.coeffs_by_power[0] * q(1, 2) == ExactPoly{-1});

    std::mt19937_64 rng(2);
    for (int t = 0; t < 10; ++t) {
        ExactPoly p = random_poly(rng, 3).monic();
        BigRational a = random_alpha(rng, 3);
        auto curve = symbol_curve(p, a);
        BigRational gap = 3 - a;
        CHECK(curve.coeffs_by_power[3] == p * BigRational(gap * gap * gap));
        CHECK(curve.coeffs_by_power[2] == p.derivative() * BigRational((a - 1) * gap * gap));
        ExactPoly lin(std::vector<BigRational>{p.coeff(2), 3});  // 3z + a
        CHECK(curve.coeffs_by_power[1] == lin * BigRational(a * (a - 2) * gap));
        CHECK(curve.coeffs_by_power[0] == ExactPoly::constant(BigRational(-a * a * gap)));
    }
}

TEST_CASE("top coefficient is a multiple of P") {
    ExactPoly p = parse_poly("z^4 - 2z + 1/2");
    auto c = symbol_curve(p, q(3, 2));
    CHECK(divmod(c.coeffs_by_power[4], p).second.is_zero());
    CHECK_THROWS_AS(symbol_curve(p, 0), AlphaOutOfRange);
    CHECK_THROWS_AS(symbol_curve(p, 4), AlphaOutOfRange);
    CHECK_THROWS_AS(scaled_symbol_curve(p, 5), AlphaOutOfRange);
}

TEST_CASE("scaled curve reproduces the symbol curve") {
    auto w = scaled_symbol_curve(ExactPoly{-1, 0, 1}, 1);
    CHECK(w.coeffs_by_power[2] == ExactPoly{-1, 0, 1});
    CHECK(w.coeffs_by_power[1].is_zero());
    CHECK(w.coeffs_by_power[0] == ExactPoly{-1});

    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        int d = 2 + t % 4;
        ExactPoly p = random_poly(rng, d);
        BigRational a = random_alpha(rng, d);
        auto sc = scaled_symbol_curve(p, a), c = symbol_curve(p, a);
        CHECK(sc.coeffs_by_power[0] == ExactPoly::constant(BigRational((a - d) * p.leading())));
        // W = (d-a)/a C, then multiply through by a^{d-1}.
        BigRational ratio = (d - a) / a, apow = 1;
        for (int k = 0; k < d - 1; ++k) apow *= a;
        for (int j = 0; j <= d; ++j) {
            BigRational f = apow;
            for (int k = 0; k < j; ++k) f *= ratio;
            CHECK(sc.coeffs_by_power[static_cast<std::size_t>(j)] * f == c.coeffs_by_power[static_cast<std::size_t>(j)]);
        }
    }
}

TEST_CASE("saddle curve") {
    BigRational a = q(2, 5);
    auto f = saddle_curve(ExactPoly{-1, 0, 1}, a);
    REQUIRE(f.coeffs_by_power.size() == 3);
    CHECK(f.coeffs_by_power[0] == ExactPoly::constant(a));
    CHECK(f.coeffs_by_power[1] == ExactPoly{0, -2});
    CHECK(f.coeffs_by_power[2] == ExactPoly::constant(BigRational(2 - a)));

    std::mt19937_64 rng(4);
    for (int t = 0; t < 10; ++t) {
        int d = 2 + t % 3;
        ExactPoly p = random_poly(rng, d);
        BigRational al = random_alpha(rng, d);
        auto s = saddle_curve(p, al);
        CHECK(s.coeffs_by_power.back() == ExactPoly::constant(BigRational((d - al) * p.leading())));
        for (long zz : {-3L, 0L, 2L, 7L}) {
            BigRational z = q(zz, 3);
            CHECK(eval_exact(s, z, z) == -al * p(z));
            // Direct definition at an off-diagonal point.
            BigRational u = z + q(5, 7);
            CHECK(eval_exact(s, z, u) == p.derivative()(u) * (u - z) - al * p(u));
        }
    }
}

TEST_CASE("coordinate change between saddle and symbol curves") {
    cplx c = symbol_from_saddle(2.0, 2.0 + std::sqrt(3.0), 1.0, 2);
    CHECK(std::abs(c - 1.0 / std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(saddle_from_symbol(0.0, 1.0, 1.0, 2) - 1.0) < 1e-15);
    CHECK_THROWS_AS(symbol_from_saddle(1.0, 1.0, 1.0, 2), DegenerateInput);
    CHECK_THROWS_AS(saddle_from_symbol(1.0, 0.0, 1.0, 2), DegenerateInput);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 100; ++t) {
        cplx z(u(rng), u(rng)), w(u(rng), u(rng));
        cplx back = symbol_from_saddle(z, saddle_from_symbol(z, w, 0.7, 3), 0.7, 3);
        CHECK(std::abs(back - w) <= 1e-14 * (1 + std::abs(w)));
    }

    // Fibres of the saddle curve land on the symbol curve.
    for (int t = 0; t < 12; ++t) {
        int d = 2 + t % 3;
        ExactPoly p = random_poly(rng, d);
        BigRational al = random_alpha(rng, d);
        auto s = saddle_curve(p, al);
        auto g = symbol_curve(p, al);
        double ad = to_double(al);
        for (int k = 0; k < 5; ++k) {
            cplx z(u(rng), u(rng));
            for (cplx uu : s.fibre(z)) {
                cplx cc = symbol_from_saddle(z, uu, ad, d);
                double scale = 0.0;
                auto co = g.fibre_coeffs(z);
                for (std::size_t j = 0; j < co.size(); ++j) scale += std::abs(co[j]) * std::pow(std::abs(cc), j);
                CHECK(std::abs(g.evaluate(z, cc)) <= 1e-10 * scale);
            }
        }
    }
}

TEST_CASE("resultant agrees with Sylvester determinants") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 6; ++t) {
        int d = 2 + t % 3;
        ExactPoly p = random_poly(rng, d);
        BigRational al = random_alpha(rng, d);
        auto f = saddle_curve(p, al);
        auto fu = f.fibre_derivative();
        ExactPoly res = saddle_discriminant(p, al);
        CHECK(res.degree() <= 2 * d - 2);
        for (long zz : {-5L, -1L, 0L, 2L, 9L}) {
            BigRational z = q(zz, 2);
            std::vector<BigRational> a, b;
            for (const auto& c : f.coeffs_by_power) a.push_back(c(z));
            for (const auto& c : fu.coeffs_by_power) b.push_back(c(z));
            CHECK(res(z) == sylvester(a, b));
        }
    }
}

TEST_CASE("branch points of the quadratic family") {
    for (auto a : {q(1, 4), q(1, 2), q(1), q(3, 2)}) {
        auto bp = branch_points(ExactPoly{-1, 0, 1}, a);
        REQUIRE(bp.size() == 2);
        double ad = to_double(a);
        double b = std::sqrt(ad * (2 - ad));
        std::sort(bp.begin(), bp.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
        CHECK(std::abs(bp[0] + b) < 1e-12);
        CHECK(std::abs(bp[1] - b) < 1e-12);
    }
    auto half = branch_points(ExactPoly{-1, 0, 1}, q(1, 2));
    CHECK(std::abs(std::abs(half[0]) - std::sqrt(3.0) / 2) < 1e-12);

    ExactPoly p = parse_poly("z^3 - z + 1/3");
    auto bp = branch_points(p, q(2, 3));
    CHECK(static_cast<int>(bp.size()) <= saddle_discriminant(p, q(2, 3)).degree());
    // Each branch point carries a double saddle.
    auto f = saddle_curve(p, q(2, 3));
    auto fu = f.fibre_derivative();
    for (cplx z : bp) {
        auto us = f.fibre(z);
        double best = 1e300;
        for (cplx u : us) best = std::min(best, std::abs(fu.evaluate(z, u)));
        CHECK(best < 1e-6);
    }
}

TEST_CASE("slopes at infinity") {
    auto s = slopes_at_infinity(3, 1);
    CHECK(s.essential_slope == 2);
    CHECK(s.other_slope == -1);
    CHECK(s.other_multiplicity == 2);
    auto t = slopes_at_infinity(2, 1);
    CHECK(t.essential_slope == 1);
    CHECK(t.other_multiplicity == 1);
    for (auto a : {q(1, 3), q(5, 2)}) {
        auto sl = slopes_at_infinity(3, a);
        // root of alpha (s + 1) - d
        CHECK(a * (sl.essential_slope + 1) - 3 == 0);
    }
    CHECK_THROWS_AS(slopes_at_infinity(3, 3), AlphaOutOfRange);
}

TEST_CASE("strong genericity") {
    CHECK(strongly_generic(ExactPoly{-1, 0, 1}));
    CHECK(strongly_generic(parse_poly("z^3 - 3z + 1")));
    CHECK_FALSE(strongly_generic(ExactPoly{0, 0, 0, 1}));
    CHECK_FALSE(strongly_generic(parse_poly("(z-1)^2 (z+1)")));
    CHECK_FALSE(strongly_generic(parse_poly("z^3 - 3z^2 + 3z + 5")));  // P' = 3(z-1)^2
}

TEST_CASE("curve JSON") {
    auto c = symbol_curve(ExactPoly{-1, 0, 1}, q(1, 2));
    std::string j = c.to_json();
    CHECK(j.find("\"alpha\":\"1/2\"") != std::string::npos);
    CHECK(j.find("\"variable\":\"C\"") != std::string::npos);
}
