// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rodrigues/boutroux.hpp"
#include "rodrigues/curves.hpp"
#include "rodrigues/errors.hpp"
#include "rodrigues/odes.hpp"
#include "rodrigues/quadratic.hpp"
#include "rodrigues/rootfind.hpp"
#include "rodrigues/saddleflow.hpp"
#include "rodrigues/series.hpp"
#include "rodrigues/trace.hpp"

using namespace rodrigues;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

BigRational q(long a, long b = 1) {
    BigRational r(a, b);
    r.canonicalize();
    return r;
}

const ExactPoly quad{-1, 0, 1};

ExactPoly random_poly(std::mt19937_64& rng, int degree) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
    std::vector<BigRational> c(static_cast<std::size_t>(degree) + 1);
    for (auto& x : c) x = q(num(rng), den(rng));
    c.back() = q(1 + std::abs(num(rng)), den(rng));
    return ExactPoly(c);
}

ExactPoly random_generic(std::mt19937_64& rng, int degree) {
    for (;;) {
        ExactPoly p = random_poly(rng, degree);
        if (strongly_generic(p)) return p;
    }
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Every root set produced below, with the roots of the polynomial it descends from.
struct HullLog {
    int sets = 0, failures = 0;
    void record(const ComplexRootSet& roots, const ExactPoly& p) {
        ++sets;
        if (!hull_containment(roots, p, 1e-6)) ++failures;
    }
} hull_log;

RootFindOptions quad_options() {
    RootFindOptions o;
    o.known_factors = {quad};
    o.target_precision = 1e-10;
    return o;
}

Outcome legendre() {
    ExactPoly prev{1}, cur{0, 1};
    for (unsigned n = 0; n <= 10; ++n) {
        ExactPoly want = n == 0 ? prev : cur;
        BigRational scale = BigRational(1) / BigRational(BigInt(1) << n) / BigRational(factorial(n));
        if (rodrigues_descendant(quad, n, n) * scale != want) return {false, "mismatch at n = " + std::to_string(n)};
        if (n >= 1) {
            // (k + 1) P_{k+1} = (2k + 1) z P_k - k P_{k-1}
            ExactPoly next = (ExactPoly{0, 1} * cur * q(2 * n + 1, n + 1)) - prev * q(n, n + 1);
            prev = cur;
            cur = next;
        }
    }
    return {true, "n = 0..10 exact"};
}

Outcome ode_exactness() {
    std::mt19937_64 rng(2024);
    int cases = 0;
    for (int t = 0; t < 10; ++t) {
        int d = 2 + t % 4;
        ExactPoly p = random_generic(rng, d);
        for (unsigned n = 1; n <= 6; ++n)
            for (unsigned m = 0; m < n * static_cast<unsigned>(d); ++m) {
                ++cases;
                if (!verify_ode(build_ode_poly(p, n, m), rodrigues_descendant(p, n, m)).exact)
                    return {false, "polynomial case fails at n = " + std::to_string(n) + ", m = " + std::to_string(m)};
            }
    }
    int rational = 0;
    for (int t = 0; t < 9; ++t) {
        ExactPoly a = random_poly(rng, 1 + t % 3), b = random_poly(rng, 1 + (t / 3) % 3);
        if (gcd(a, b).degree() > 0) continue;
        for (unsigned n = 1; n <= 3; ++n)
            for (unsigned m = 0; m <= 4; ++m) {
                ++rational;
                if (!verify_ode(build_ode_rational(a, b, n, m), ratfun_descendant(ExactRatFun(a, b), n, m)).exact)
                    return {false, "rational case fails"};
            }
    }
    int series_cases = 0;
    for (int t = 0; t < 6; ++t) {
        ExactPoly p = random_poly(rng, 1 + t % 2), qq = random_poly(rng, t % 2), tt = random_poly(rng, 1 + t % 2);
        ExactComplex centre(q(1, 3 + t), q(-1, 5));
        if (gcd(p, qq).degree() > 0 || qq(centre).is_zero()) continue;
        for (unsigned n = 1; n <= 2; ++n)
            for (unsigned m = 0; m <= 2; ++m) {
                auto ode = build_ode_general(p, qq, tt, n, m);
                // 20 coefficients of L[y] beyond what the order consumes.
                auto y = series_descendant(p, qq, tt, n, m, centre, static_cast<std::size_t>(ode.order) + 20);
                ++series_cases;
                if (!verify_ode(ode, y, 20).exact) return {false, "series case fails"};
            }
    }
    return {true, std::to_string(cases) + " polynomial, " + std::to_string(rational) + " rational, " +
                      std::to_string(series_cases) + " series cases exact"};
}

Outcome limit_algorithm() {
    std::mt19937_64 rng(77);
    int cases = 0;
    for (int d = 1; d <= 5; ++d) {
        ExactPoly p = random_poly(rng, d);
        std::uniform_int_distribution<long> den(1, 12);
        for (int t = 0; t < 20;) {
            long b = den(rng);
            if (d * b - 1 < 1) continue;
            std::uniform_int_distribution<long> num(1, d * b - 1);
            BigRational a = q(num(rng), b);
            ++t;
            ++cases;
            if (!(limit_symbol(p, a) == symbol_curve(p, a))) return {false, "differs at d = " + std::to_string(d)};
        }
    }
    return {true, std::to_string(cases) + " (P, alpha) pairs equal"};
}

Outcome quadratic_law_check() {
    auto opts = quad_options();
    auto r1 = find_roots(rodrigues_descendant(quad, 100, 100), opts);
    auto r2 = find_roots(rodrigues_descendant(quad, 200, 100), opts);
    auto r3 = find_roots(rodrigues_descendant(quad, 200, 300), opts);
    for (const auto* r : {&r1, &r2, &r3}) hull_log.record(*r, quad);
    auto a = compare_empirical(r1, 1.0), b = compare_empirical(r2, 0.5), c = compare_empirical(r3, 1.5);
    bool ok = a.ks_distance <= 0.05 && std::abs(b.atom_fractions[0] - 1.0 / 3) <= 0.05 &&
              std::abs(b.atom_fractions[1] - 1.0 / 3) <= 0.05 && b.ks_distance <= 0.07 && c.atom_fractions[0] <= 0.02 &&
              c.atom_fractions[1] <= 0.02 && c.support_min >= -c.b_plus - 0.02 && c.support_max <= c.b_plus + 0.02;
    std::ostringstream s;
    s << "KS(1) = " << fmt("%.4f", a.ks_distance) << ", atoms(1/2) = " << fmt("%.4f", b.atom_fractions[0]) << "/"
      << fmt("%.4f", b.atom_fractions[1]) << ", KS(1/2) = " << fmt("%.4f", b.ks_distance)
      << ", atoms(3/2) = " << fmt("%.4f", c.atom_fractions[0]) << "/" << fmt("%.4f", c.atom_fractions[1])
      << ", support(3/2) = [" << fmt("%.4f", c.support_min) << ", " << fmt("%.4f", c.support_max) << "]";
    return {ok, s.str()};
}

Outcome branch_point_check() {
    double worst = 0.0;
    for (const char* a : {"1/4", "1/2", "1", "3/2"}) {
        BigRational ar = parse_rational(a);
        double ad = to_double(ar), b = std::sqrt(ad * (2 - ad));
        auto bp = branch_points(quad, ar);
        if (bp.size() != 2) return {false, std::string("wrong count at alpha = ") + a};
        for (cplx z : bp) worst = std::max(worst, std::min(std::abs(z - b), std::abs(z + b)));
        if (std::abs(bp[0] + bp[1]) > 1e-12) return {false, "not symmetric"};
    }
    return {worst <= 1e-12, "max error " + fmt("%.2e", worst)};
}

Outcome boutroux_check() {
    double imag = 0.0, sum = 0.0, err = 0.0;
    int reports = 0;
    for (const char* spec : {"z^2 - 1", "z^3 - z + 1/3", "2z^4 - 3z^2 + z - 1/5"}) {
        ExactPoly p = parse_poly(spec);
        int d = p.degree();
        for (BigRational a : {q(1, 4), q(1, 2), q(1), q(3, 2), q(2 * d - 1, 2)}) {
            for (const auto& r : {residues_scaled_curve(p, a), residues_saddle_curve(p, a)}) {
                ++reports;
                imag = std::max(imag, r.max_imag());
                sum = std::max(sum, std::abs(r.sum));
                err = std::max(err, r.max_error());
            }
        }
    }
    bool ok = imag <= 1e-9 && sum <= 1e-9 && err <= 1e-7;
    return {ok, std::to_string(reports) + " reports: max |Im| " + fmt("%.1e", imag) + ", max |sum| " + fmt("%.1e", sum) +
                    ", max error " + fmt("%.1e", err)};
}

Outcome trace_residual() {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> c(-3, 3);
    const BigRational alphas[] = {q(1, 2), q(1), q(3, 2)};
    std::string detail;
    bool ok = true;
    for (int t = 0; t < 3; ++t) {
        ExactPoly p;
        do {
            p = ExactPoly(std::vector<BigRational>{q(c(rng), 2), q(c(rng)), q(c(rng), 2), q(1)});
        } while (!strongly_generic(p));
        double reach = 0.0;
        for (cplx z : find_roots(p, 1e-14).roots) reach = std::max(reach, std::abs(z));
        for (cplx z : branch_points(p, alphas[t])) reach = std::max(reach, std::abs(z));
        double R = 1.5 * reach + 0.5;
        auto field = build_field(p, alphas[t], Window{-R, R, -R, R}, 101, 101);
        auto curve = symbol_curve(p, alphas[t]);
        std::size_t ok_cells = 0, good = 0;
        for (int j = 0; j < field.ny; ++j)
            for (int i = 0; i < field.nx; ++i) {
                std::size_t k = field.index(i, j);
                if (field.flags[k] != CellFlag::OK) continue;
                ++ok_cells;
                if (curve_residual(curve, field.point(i, j), field.cauchy[k]) <= 1e-8) ++good;
            }
        double frac = ok_cells ? static_cast<double>(good) / ok_cells : 0.0;
        ok = ok && frac >= 0.99;
        detail += (t ? "; " : "") + to_expression(p) + ": " + fmt("%.4f", frac) + " of " + std::to_string(ok_cells);
    }
    return {ok, detail};
}

Outcome empirical_convergence() {
    SaddleFlow flow(quad, q(1));
    std::vector<cplx> samples;
    for (int k = 0; k < 25; ++k) {
        double t = 2.0 * std::acos(-1.0) * (k + 0.5) / 25;
        samples.emplace_back(1.6 * std::cos(t), 0.8 * std::sin(t));
    }
    std::vector<double> sup;
    for (unsigned n : {25u, 50u, 100u, 200u}) {
        ExactPoly r = rodrigues_descendant(quad, n, n - 1);
        hull_log.record(find_roots(r, quad_options()), quad);
        double worst = 0.0;
        for (cplx z : samples) worst = std::max(worst, std::abs(empirical_cauchy(r, z) - cauchy_pred(flow, z)));
        sup.push_back(worst);
    }
    bool ok = sup.back() <= 0.05;
    std::string curve;
    for (std::size_t i = 0; i < sup.size(); ++i) {
        if (i && sup[i] > sup[i - 1]) ok = false;
        curve += (i ? ", " : "") + fmt("%.5f", sup[i]);
    }
    return {ok, "sup error at n = 25, 50, 100, 200: " + curve};
}

Outcome stirling() {
    double worst = 0.0;
    for (auto [d, a] : {std::pair{2, q(1)}, std::pair{3, q(1)}, std::pair{3, q(3, 2)}}) {
        double n = 1e4, ad = to_double(a), m = ad * n, dn = n * d - m;
        double v = (std::lgamma(m) + std::lgamma(n * d - m + 2) - std::lgamma(n * d + 1)) / dn;
        worst = std::max(worst, std::abs(v - constant_B(d, a)));
    }
    return {worst <= 0.01, "max deviation " + fmt("%.2e", worst)};
}

Outcome gauss_lucas() {
    // A larger cloud on top of the sets recorded by the other criteria.
    ExactPoly cubic = parse_poly("z^3 - z");
    RootFindOptions o;
    o.known_factors = {cubic};
    hull_log.record(find_roots(rodrigues_descendant(cubic, 60, 18), o), cubic);
    return {hull_log.failures == 0,
            std::to_string(hull_log.sets - hull_log.failures) + " of " + std::to_string(hull_log.sets) + " root sets inside"};
}

Outcome orthogonality() {
    ExactPoly cubic = parse_poly("z^3 - z + 1/2");
    double worst = 0.0;
    for (unsigned n = 1; n <= 8; ++n)
        for (unsigned k = 0; k < n; ++k)
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = i + 1; j < 3; ++j) worst = std::max(worst, verify_multiple_orthogonality(cubic, n, k, i, j));
    return {worst <= 1e-10, "max relative residual " + fmt("%.2e", worst)};
}

Outcome saddle_selection() {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    int agree = 0, total = 0;
    for (const char* a : {"1/4", "1/2", "1", "3/2", "7/4"}) {
        BigRational ar = parse_rational(a);
        double ad = to_double(ar), b = std::sqrt(ad * (2 - ad));
        SaddleFlow flow(quad, ar);
        for (int t = 0; t < 200;) {
            cplx z(u(rng), u(rng));
            if (std::hypot(std::max(0.0, std::abs(z.real()) - b), z.imag()) < 0.02) continue;
            if (std::abs(z - 1.0) < 0.05 || std::abs(z + 1.0) < 0.05) continue;
            ++t;
            ++total;
            try {
                auto f = flow.classified_fibre(z);
                cplx want = quadratic_u_plus(ad, z);
                if (std::abs(f.saddles[*f.max_index].u - want) <= 1e-8 * (1 + std::abs(want))) ++agree;
            } catch (const Error&) {
            }
        }
    }
    return {agree == total, std::to_string(agree) + " of " + std::to_string(total) + " agree"};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    // Gauss-Lucas reads the root sets recorded by 4 and 8, so it runs last.
    const std::vector<Criterion> criteria = {
        {1, "Legendre identity", legendre},
        {2, "ODE exactness", ode_exactness},
        {3, "limit algorithm gives the symbol curve", limit_algorithm},
        {4, "quadratic law", quadratic_law_check},
        {5, "quadratic branch points", branch_point_check},
        {6, "Boutroux residues", boutroux_check},
        {7, "trace residual", trace_residual},
        {8, "empirical convergence", empirical_convergence},
        {9, "Stirling constant", stirling},
        {11, "multiple orthogonality", orthogonality},
        {12, "maximal saddle is u+", saddle_selection},
        {10, "Gauss-Lucas containment", gauss_lucas},
    };
    std::vector<std::string> lines(13);
    bool all = true;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        all = all && o.pass;
        char head[96];
        std::snprintf(head, sizeof head, "%s %2d  %-40s (%.1f s)  ", o.pass ? "PASS" : "FAIL", c.id, c.name, secs);
        lines[static_cast<std::size_t>(c.id)] = head + o.detail;
    }
    for (std::size_t i = 1; i < lines.size(); ++i) std::printf("%s\n", lines[i].c_str());
    return all ? 0 : 1;
}
