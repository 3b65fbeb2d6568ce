#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rodrigues/curves.hpp"
#include "rodrigues/errors.hpp"
#include "rodrigues/quadratic.hpp"
#include "rodrigues/rootfind.hpp"
#include "rodrigues/trace.hpp"

using namespace rodrigues;

namespace {

BigRational q(long a, long b = 1) {
    BigRational r(a, b);
    r.canonicalize();
    return r;
}

const ExactPoly quad{-1, 0, 1};

double log_abs(const BigRational& x) {
    long en = 0, ed = 0;
    double mn = mpz_get_d_2exp(&en, x.get_num_mpz_t());
    double md = mpz_get_d_2exp(&ed, x.get_den_mpz_t());
    return std::log(std::abs(mn)) - std::log(std::abs(md)) + (en - ed) * std::log(2.0);
}

// (1/deg) log |monic descendant(z)| from exact arithmetic.
double exact_potential(const ExactPoly& p, unsigned n, unsigned m, const BigRational& z) {
    ExactPoly r = rodrigues_descendant(p, n, m);
    return (log_abs(r(z)) - log_abs(r.leading())) / r.degree();
}

double arcsine_cdf(double x) {
    if (x <= -1) return 0.0;
    if (x >= 1) return 1.0;
    return 0.5 + std::asin(x) / std::acos(-1.0);
}

} // namespace

TEST_CASE("additive constant") {
    CHECK(constant_B(2, q(1)) == doctest::Approx(-2 * std::log(2.0)).epsilon(1e-14));
    CHECK(constant_B(3, q(1)) == doctest::Approx((2 * std::log(2.0) - 3 * std::log(3.0)) / 2).epsilon(1e-14));
    CHECK(constant_B(3, q(1)) == doctest::Approx(-0.954771).epsilon(1e-6));
    CHECK_THROWS_AS(constant_B(2, q(2)), AlphaOutOfRange);
    // Stirling: (1/(nd - m)) log((m - 1)! (nd - m + 1)! / (nd)!) at m = alpha n.
    for (auto [d, a] : {std::pair{2, 1.0}, std::pair{3, 1.0}, std::pair{3, 1.5}}) {
        double n = 1e4, m = a * n, dn = n * d - m;
        double v = (std::lgamma(m) + std::lgamma(n * d - m + 2) - std::lgamma(n * d + 1)) / dn;
        CHECK(std::abs(v - constant_B(d, a)) <= 0.01);
    }
}

TEST_CASE("potential of the quadratic") {
    double v = potential_at(quad, 1, 2.0);
    CHECK(v == doctest::Approx(std::log((2 + std::sqrt(3.0)) / 2)).epsilon(1e-12));
    CHECK(v == doctest::Approx(0.6238).epsilon(1e-4));
    CHECK(std::abs(exact_potential(quad, 400, 400, 2) - v) < 0.02);
    CHECK(std::abs(exact_potential(quad, 300, 150, q(3, 2)) - potential_at(quad, q(1, 2), cplx(1.5, 1e-12))) < 0.02);

    SaddleFlow flow(quad, q(3, 4));
    for (cplx z : {cplx(1.3, 0.4), cplx(-0.2, 1.1), cplx(0.0, -2.0)}) {
        CHECK(potential_at(flow, -z) == doctest::Approx(potential_at(flow, z)).epsilon(1e-12));
    }
    cplx far(700.0, 500.0);
    CHECK(std::abs(potential_at(flow, far) - std::log(std::abs(far))) < 1e-5);

    ExactPoly scaled = quad * q(7, 3);
    CHECK(potential_at(scaled, 1, cplx(0.4, 0.9)) == doctest::Approx(potential_at(quad, 1, cplx(0.4, 0.9))).epsilon(1e-13));
}

TEST_CASE("potential of a cubic against exact descendants") {
    ExactPoly p = parse_poly("z^3 - z + 1/3");
    SaddleFlow flow(p, q(1));
    for (auto [zr, zi] : {std::pair{2L, 1L}, std::pair{-3L, 2L}}) {
        // Evaluate at a real point far out; z = zr / zi.
        BigRational z = q(zr, zi);
        double pred = potential_at(flow, to_double(z) + cplx(0, 1e-12));
        CHECK(std::abs(exact_potential(p, 200, 200, z) - pred) < 0.03);
    }
}

TEST_CASE("predicted Cauchy transform") {
    CHECK(std::abs(cauchy_pred(quad, 1, 2.0) - 1 / std::sqrt(3.0)) < 1e-14);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (const char* a : {"1/4", "1/2", "1", "3/2", "7/4"}) {
        BigRational ar = parse_rational(a);
        double ad = to_double(ar), b = std::sqrt(ad * (2 - ad));
        SaddleFlow flow(quad, ar);
        auto curve = symbol_curve(quad, ar);
        int n = 0;
        while (n < 100) {
            cplx z(u(rng), u(rng));
            if (std::hypot(std::max(0.0, std::abs(z.real()) - b), z.imag()) < 0.02) continue;
            if (std::abs(z - 1.0) < 0.05 || std::abs(z + 1.0) < 0.05) continue;
            ++n;
            cplx c = cauchy_pred(flow, z);
            CHECK(std::abs(c - quadratic_cauchy(ad, z)) <= 1e-8 * (1 + std::abs(c)));
            CHECK(curve_residual(curve, z, c) <= 1e-8);
        }
        cplx far(3e3, -4e3);
        CHECK(std::abs(cauchy_pred(flow, far) * far - 1.0) < 1e-3);
    }
}

TEST_CASE("Cauchy transform is twice the z-derivative of the potential") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-2, 2);
    for (const char* spec : {"z^2 - 1", "z^3 - z + 1/3"}) {
        SaddleFlow flow(parse_poly(spec), q(3, 4));
        int n = 0;
        while (n < 100) {
            cplx z(u(rng), u(rng));
            const double h = 1e-4;
            try {
                double lx = (potential_at(flow, z + h) - potential_at(flow, z - h)) / (2 * h);
                double ly = (potential_at(flow, z + cplx(0, h)) - potential_at(flow, z - cplx(0, h))) / (2 * h);
                cplx c = cauchy_pred(flow, z);
                cplx fd(lx, -ly);
                // A kink inside the stencil shows up as a large mismatch; skip those.
                if (std::abs(fd - c) > 1e-2 * (1 + std::abs(c))) continue;
                ++n;
                CHECK(std::abs(fd - c) <= 1e-6 * (1 + std::abs(c)));
            } catch (const Error&) {
            }
        }
    }
}

TEST_CASE("field on the quadratic") {
    Window w{-2, 2, -2, 2};
    auto field = build_field(quad, 1, w, 41, 41);
    const double h = field.step_re();
    CHECK(h == doctest::Approx(0.1));
    int label = -1;
    auto curve = symbol_curve(quad, 1);
    for (int j = 0; j < field.ny; ++j)
        for (int i = 0; i < field.nx; ++i) {
            std::size_t k = field.index(i, j);
            cplx z = field.point(i, j);
            bool near_segment = std::abs(z.imag()) < h / 2 && std::abs(z.real()) <= 1 + h / 2;
            if (!near_segment) {
                CHECK(field.flags[k] == CellFlag::OK);
                if (label < 0) label = field.branch_index[k];
                CHECK(field.branch_index[k] == label);
            }
            if (field.flags[k] != CellFlag::OK) CHECK(near_segment);
            if (field.flags[k] == CellFlag::OK) CHECK(curve_residual(curve, z, field.cauchy[k]) <= 1e-8);
            CHECK(std::isfinite(field.potential[k]));
        }

    auto one = build_field(quad, 1, Window{1.5, 1.5, 0.5, 0.5}, 1, 1);
    REQUIRE(one.potential.size() == 1);
    CHECK(one.potential[0] == doctest::Approx(potential_at(quad, 1, cplx(1.5, 0.5))));

    auto single = build_field(quad, 1, w, 41, 41, FieldOptions{1, true});
    CHECK(single.potential == field.potential);

    std::string csv = field_csv(one);
    CHECK(csv.rfind("z_re,z_im,potential,cauchy_re,cauchy_im,branch,flag\n", 0) == 0);
}

TEST_CASE("density from the Laplacian") {
    Window w{-2, 2, -2, 2};
    auto field = build_field(quad, 1, w, 101, 101);
    auto dens = measure_density(field);
    const double h = field.step_re();
    double total = 0.0;
    std::vector<double> column(static_cast<std::size_t>(field.nx), 0.0);
    for (int j = 0; j < field.ny; ++j)
        for (int i = 0; i < field.nx; ++i) {
            double v = dens.raw[field.index(i, j)];
            total += v * h * h;
            column[static_cast<std::size_t>(i)] += v * h * h;
            // Away from the support the stencil error is O(h^2) times derivatives
            // that blow up at the two endpoints, so keep clear of those too.
            cplx z = field.point(i, j);
            bool clear = std::abs(z.imag()) > 2.5 * h && std::abs(z - 1.0) > 6 * h && std::abs(z + 1.0) > 6 * h;
            if (clear) CHECK(std::abs(v) < 1e-2);
        }
    CHECK(std::abs(total - 1.0) < 1e-3);
    CHECK(dens.violations == 0);
    for (const char* a : {"1/2", "3/2"}) CHECK(measure_density(build_field(quad, parse_rational(a), w, 101, 101)).violations == 0);
    double cum = 0.0, ks = 0.0;
    for (int i = 0; i < field.nx; ++i) {
        cum += column[static_cast<std::size_t>(i)];
        double x = field.point(i, 0).real() + h / 2;
        ks = std::max(ks, std::abs(cum - arcsine_cdf(x)));
    }
    CHECK(ks < 0.05);
    CHECK_THROWS_AS(measure_density(build_field(quad, 1, w, 2, 2)), InvalidArgument);
}

TEST_CASE("support and atoms") {
    Window w{-2, 2, -2, 2};
    for (const char* a : {"1/2", "3/2", "1"}) {
        BigRational ar = parse_rational(a);
        double ad = to_double(ar), b = std::sqrt(ad * (2 - ad));
        SaddleFlow flow(quad, ar);
        auto field = build_field(quad, ar, w, 81, 81);
        const double h = field.step_re();
        auto sup = extract_support(field, flow);
        REQUIRE(!sup.polylines.empty());
        double lo = 1e9, hi = -1e9;
        for (const auto& line : sup.polylines)
            for (cplx p : line) {
                CHECK(std::abs(p.imag()) <= h);
                CHECK(std::abs(p.real()) <= 1.0 + h);
                lo = std::min(lo, p.real());
                hi = std::max(hi, p.real());
            }
        CHECK(std::abs(lo + b) <= 1.5 * h);
        CHECK(std::abs(hi - b) <= 1.5 * h);
        auto law = quadratic_law(ad);
        if (law.atom_mass > 0) {
            REQUIRE(sup.point_masses.size() == 2);
            for (const auto& pm : sup.point_masses) {
                CHECK(std::abs(std::abs(pm.location.real()) - 1.0) < 1e-12);
                CHECK(pm.mass == doctest::Approx(law.atom_mass).epsilon(0.02));
            }
        } else {
            CHECK(sup.point_masses.empty());
        }
        CHECK(sup.to_json().find("LineString") != std::string::npos);
    }
}
