#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/multiprecision/mpfr.hpp>

#include "rodrigues/errors.hpp"
#include "rodrigues/exactpoly.hpp"
#include "rodrigues/mpeval.hpp"
#include "rodrigues/rootfind.hpp"

using namespace rodrigues;

namespace {

std::vector<double> sorted_real(const ComplexRootSet& r) {
    std::vector<double> x;
    for (auto z : r.roots) x.push_back(z.real());
    std::sort(x.begin(), x.end());
    return x;
}

// Gauss-Legendre nodes from the three-term recurrence with Newton refinement.
std::vector<double> legendre_nodes(int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double step = p1 / dp;
            t -= step;
            if (std::abs(step) < 1e-16) break;
        }
        x[static_cast<std::size_t>(i)] = t;
    }
    std::sort(x.begin(), x.end());
    return x;
}

// Coefficients of prod (z - r_i) in 150-digit arithmetic, compared with the
// exact input divided by its leading coefficient. Intermediate products of
// hundreds of factors cancel heavily, so double or long double is not enough.
double reconstruction_error(const ExactPoly& p, const std::vector<cplx>& roots) {
    using real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<150>>;
    std::vector<real> re{real(1)}, im{real(0)};
    for (cplx r : roots) {
        real a = r.real(), b = r.imag();
        re.push_back(0);
        im.push_back(0);
        for (std::size_t j = re.size() - 1; j > 0; --j) {
            real nr = re[j - 1] - (a * re[j] - b * im[j]);
            real ni = im[j - 1] - (a * im[j] + b * re[j]);
            re[j] = nr;
            im[j] = ni;
        }
        real nr = -(a * re[0] - b * im[0]);
        real ni = -(a * im[0] + b * re[0]);
        re[0] = nr;
        im[0] = ni;
    }
    real maxc = 0, err = 0;
    for (std::size_t j = 0; j < re.size(); ++j) {
        BigRational q = p.coeff(j) / p.leading();
        real exact = real(q.get_num().get_str()) / real(q.get_den().get_str());
        maxc = std::max(maxc, real(abs(exact)));
        err = std::max(err, real(sqrt((re[j] - exact) * (re[j] - exact) + im[j] * im[j])));
    }
    return static_cast<double>(err / maxc);
}

} // namespace

TEST_CASE("small root sets") {
    auto r = find_roots(ExactPoly{-1, 0, 1}, 1e-12);
    CHECK(r.source_degree == 2);
    auto x = sorted_real(r);
    CHECK(x[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));

    auto s = find_roots(ExactPoly{-4, 0, 12}, 1e-12);
    x = sorted_real(s);
    CHECK(x[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(s.residual_bound <= 1e-12);

    auto cube = find_roots(poly_pow(ExactPoly{-1, 0, 1}, 3), 1e-10);
    REQUIRE(cube.roots.size() == 6);
    int near_plus = 0, near_minus = 0;
    for (auto z : cube.roots) {
        if (std::abs(z - 1.0) < 1e-6) ++near_plus;
        if (std::abs(z + 1.0) < 1e-6) ++near_minus;
    }
    CHECK(near_plus == 3);
    CHECK(near_minus == 3);

    auto zeros = find_roots(ExactPoly{0, 0, 2, 2}, 1e-12);
    REQUIRE(zeros.roots.size() == 3);
    CHECK(std::count(zeros.roots.begin(), zeros.roots.end(), cplx(0.0)) == 2);

    CHECK_THROWS_AS(find_roots(ExactPoly{3}, 1e-12), InvalidArgument);
}

TEST_CASE("deterministic for a fixed seed") {
    ExactPoly p = rodrigues_descendant(parse_poly("z^3 - z + 1/2"), 6, 5);
    auto a = find_roots(p, 1e-12), b = find_roots(p, 1e-12);
    CHECK(a.roots == b.roots);
}

TEST_CASE("Legendre descendants against recurrence nodes") {
    for (int n : {10, 40, 100}) {
        ExactPoly p = rodrigues_descendant(ExactPoly{-1, 0, 1}, static_cast<unsigned>(n), static_cast<unsigned>(n));
        auto r = find_roots(p, 1e-12);
        auto x = sorted_real(r);
        auto oracle = legendre_nodes(n);
        double worst = 0.0, worst_imag = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - oracle[i]));
        for (auto z : r.roots) worst_imag = std::max(worst_imag, std::abs(z.imag()));
        CHECK(worst < 1e-11);
        CHECK(worst_imag < 1e-11);
    }
}

TEST_CASE("known factors are divided out with multiplicity") {
    ExactPoly base{-1, 0, 1};
    ExactPoly p = rodrigues_descendant(base, 100, 50);  // (z^2-1)^50 * S
    RootFindOptions opt;
    opt.target_precision = 1e-11;
    opt.known_factors = {squarefree_part(base)};
    auto r = find_roots(p, opt);
    REQUIRE(r.roots.size() == 150);
    int at_one = 0;
    for (auto z : r.roots)
        if (std::abs(z - 1.0) < 1e-14) ++at_one;
    CHECK(at_one == 50);
    CHECK(hull_containment(r, base, 1e-6));
}

TEST_CASE("coefficient reconstruction up to degree 200") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> c(-50, 50);
    for (int deg : {20, 80, 200}) {
        std::vector<BigRational> co(static_cast<std::size_t>(deg) + 1);
        for (auto& q : co) q = c(rng);
        co.back() = 7;
        co.front() = 3;
        ExactPoly p(co);
        auto r = find_roots(p, 1e-12);
        CHECK(r.roots.size() == static_cast<std::size_t>(deg));
        CHECK(reconstruction_error(p, r.roots) <= 1e-6);
    }
    ExactPoly d = rodrigues_descendant(parse_poly("z^3 - 3/2 z + 1/5"), 40, 30);
    auto r = find_roots(d, 1e-12);
    CHECK(reconstruction_error(d, r.roots) <= 1e-6);
}

TEST_CASE("empirical measure and Cauchy transform") {
    auto r = find_roots(ExactPoly{-1, 0, 1}, 1e-12);
    auto m = empirical_measure(r);
    REQUIRE(m.atoms.size() == 2);
    CHECK(m.atoms[0].mass == 0.5);
    CHECK(std::abs(m.total_mass - 1.0) < 1e-12);
    CHECK_THROWS_AS(empirical_measure(ComplexRootSet{}), InvalidArgument);

    CHECK(std::abs(empirical_cauchy(ExactPoly{-1, 0, 1}, 2.0) - 2.0 / 3.0) < 1e-15);
    CHECK(std::abs(empirical_cauchy(ExactPoly{-4, 0, 12}, cplx(0, 2)) - cplx(0, -24.0 / 52.0)) < 1e-15);
    CHECK(std::abs(empirical_cauchy(ExactPoly{-3, 1}, cplx(1, 1)) - 1.0 / cplx(-2, 1)) < 1e-15);
    CHECK_THROWS_AS(empirical_cauchy(ExactPoly{-1, 0, 1}, 1.0), EvaluationAtRoot);

    // Agreement with the atom sum, with coefficients far outside double range.
    ExactPoly p = rodrigues_descendant(parse_poly("z^3 - z + 1/2"), 60, 70);
    auto roots = find_roots(p, 1e-12);
    auto mu = empirical_measure(roots);
    for (cplx z : {cplx(2, 1), cplx(-0.3, 1.5), cplx(0.1, -0.9)}) {
        cplx sum = 0.0;
        for (const auto& a : mu.atoms) sum += a.mass / (z - a.location);
        CHECK(std::abs(sum - empirical_cauchy(p, z)) < 1e-8);
    }
}

TEST_CASE("Gauss-Lucas hull containment") {
    ExactPoly base{-1, 0, 1};
    CHECK(hull_containment(find_roots(ExactPoly{-4, 0, 12}, 1e-12), base, 1e-6));
    ComplexRootSet fake{{cplx(2.0, 0.0)}, 0.0, 1, 0};
    CHECK_FALSE(hull_containment(fake, base, 1e-6));

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> c(-20, 20);
    for (int t = 0; t < 3; ++t) {
        ExactPoly p(std::vector<BigRational>{BigRational(c(rng), 7), BigRational(c(rng), 5), BigRational(c(rng), 3), 1});
        for (unsigned m : {1u, 7u, 20u}) {
            auto r = find_roots(rodrigues_descendant(p, 8, m), 1e-12);
            CHECK(hull_containment(r, p, 1e-6));
        }
    }

    auto hull = convex_hull({cplx(0, 0), cplx(1, 0), cplx(0, 1), cplx(0.2, 0.2), cplx(1, 1)});
    CHECK(hull.size() == 4);
    CHECK(distance_to_hull(hull, cplx(0.5, 0.5)) == 0.0);
    CHECK(distance_to_hull(hull, cplx(2, 0.5)) == doctest::Approx(1.0));
}

TEST_CASE("double complex polynomial solver") {
    std::vector<cplx> c{cplx(2, 1), cplx(0, -3), cplx(1, 0), cplx(0.5, 0.5)};
    auto r = solve_cpoly(c);
    REQUIRE(r.size() == 3);
    for (auto z : r) CHECK(std::abs(eval_cpoly(c, z)) < 1e-13);
    auto q = solve_cpoly({cplx(-1), cplx(0), cplx(1)});
    std::sort(q.begin(), q.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    CHECK(std::abs(q[0] + 1.0) < 1e-15);
    CHECK(std::abs(q[1] - 1.0) < 1e-15);
}

TEST_CASE("rounding bound shrinks with precision") {
    ExactPoly p = rodrigues_descendant(ExactPoly{-1, 0, 1}, 60, 60);
    MpPolyEvaluator low(p, 64), high(p, 512);
    auto a = low.newton(0.9), b = high.newton(0.9);
    CHECK(a.at_noise);
    CHECK_FALSE(b.at_noise);
}
