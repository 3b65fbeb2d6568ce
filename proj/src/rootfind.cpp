#include "rodrigues/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rodrigues/errors.hpp"
#include "rodrigues/mpeval.hpp"
#include "rodrigues/output.hpp"

namespace rodrigues {

namespace {

double log2_abs(const BigRational& q) {
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDN);
    mpfr_abs(t, t, MPFR_RNDN);
    mpfr_log2(t, t, MPFR_RNDN);
    double v = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return v;
}

// Points on circles whose radii come from the Newton polygon of the
// coefficient magnitudes, capped by the Fujiwara bound.
std::vector<cplx> initial_guesses(const ExactPoly& p, std::mt19937_64& rng) {
    const int n = p.degree();
    std::vector<std::pair<int, double>> pts;
    for (int i = 0; i <= n; ++i)
        if (sgn(p.coeffs()[static_cast<std::size_t>(i)]) != 0)
            pts.emplace_back(i, log2_abs(p.coeffs()[static_cast<std::size_t>(i)]));

    std::vector<std::pair<int, double>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            double cross = (b.first - a.first) * (pt.second - a.second) - (b.second - a.second) * (pt.first - a.first);
            if (cross >= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }

    const double lead = pts.back().second;
    double fujiwara = -std::numeric_limits<double>::infinity();
    for (const auto& [i, l] : pts) {
        if (i == n) continue;
        int k = n - i;
        double v = (l - lead - (i == 0 ? 1.0 : 0.0)) / k;
        fujiwara = std::max(fujiwara, v);
    }
    fujiwara += 1.0;

    std::uniform_real_distribution<double> jitter(-0.5, 0.5);
    std::vector<cplx> z;
    z.reserve(static_cast<std::size_t>(n));
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        int i = hull[e].first, j = hull[e + 1].first;
        int k = j - i;
        double log_r = std::min((hull[e].second - hull[e + 1].second) / k, fujiwara);
        double r = std::exp2(std::clamp(log_r, -1000.0, 1000.0));
        for (int t = 0; t < k; ++t) {
            double angle = two_pi * (t + 0.1 * jitter(rng)) / k + two_pi * i / n + 0.4;
            double rr = r * (1.0 + 0.01 * jitter(rng));
            z.push_back(std::polar(rr, angle));
        }
    }
    return z;
}

enum class RootState { Active, Converged, Stalled };

std::vector<cplx> aberth_mp(const ExactPoly& p, const RootFindOptions& opt, double& residual, long& bits) {
    const int n = p.degree();
    std::mt19937_64 rng(opt.seed);
    std::vector<cplx> z = initial_guesses(p, rng);
    std::vector<RootState> state(static_cast<std::size_t>(n), RootState::Active);
    std::vector<double> bound(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    std::uniform_real_distribution<double> kick(-1.0, 1.0);

    for (mpfr_prec_t prec = opt.start_bits;; prec = std::min<mpfr_prec_t>(2 * prec, opt.max_bits)) {
        MpPolyEvaluator ev(p, prec);
        for (auto& s : state)
            if (s == RootState::Stalled) s = RootState::Active;

        for (unsigned sweep = 0; sweep < opt.max_sweeps; ++sweep) {
            bool any_active = false;
            for (std::size_t i = 0; i < z.size(); ++i) {
                if (state[i] != RootState::Active) continue;
                auto nd = ev.newton(z[i]);
                if (!std::isfinite(nd.correction.real()) || !std::isfinite(nd.correction.imag())) {
                    double scale = 1e-8 * (1.0 + std::abs(z[i]));
                    z[i] += cplx(scale * kick(rng), scale * kick(rng));
                    any_active = true;
                    continue;
                }
                // Roots are stored as doubles, so a few ulps is the best attainable.
                double floor = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(z[i]);
                if (nd.bound <= std::max(opt.target_precision, floor)) {
                    state[i] = RootState::Converged;
                    bound[i] = nd.bound;
                    continue;
                }
                if (nd.at_noise) {
                    state[i] = RootState::Stalled;
                    bound[i] = nd.bound;
                    continue;
                }
                any_active = true;
                cplx s = 0.0;
                for (std::size_t j = 0; j < z.size(); ++j) {
                    if (j == i) continue;
                    cplx diff = z[i] - z[j];
                    if (diff == cplx(0.0)) diff = cplx(1e-300, 0.0);
                    s += 1.0 / diff;
                }
                cplx w = nd.correction / (1.0 - nd.correction * s);
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = nd.correction;
                z[i] -= w;
            }
            if (!any_active) break;
        }

        bits = prec;
        bool done = std::all_of(state.begin(), state.end(), [](RootState s) { return s == RootState::Converged; });
        if (done) break;
        if (prec >= opt.max_bits) {
            std::size_t bad = static_cast<std::size_t>(
                std::count_if(state.begin(), state.end(), [](RootState s) { return s != RootState::Converged; }));
            throw NoConvergence(std::to_string(bad) + " of " + std::to_string(n) +
                                " roots missed the target at " + std::to_string(prec) + " bits");
        }
    }
    residual = *std::max_element(bound.begin(), bound.end());
    return z;
}

} // namespace

ComplexRootSet find_roots(const ExactPoly& p, double target_precision) {
    RootFindOptions opt;
    opt.target_precision = target_precision;
    return find_roots(p, opt);
}

ComplexRootSet find_roots(const ExactPoly& p, const RootFindOptions& options) {
    if (p.degree() < 1) throw InvalidArgument("find_roots needs a polynomial of degree at least 1");
    ComplexRootSet out;
    out.source_degree = p.degree();
    ExactPoly rest = p;

    RootFindOptions plain = options;
    plain.known_factors.clear();
    for (const auto& f : options.known_factors) {
        if (f.degree() < 1) continue;
        unsigned mult = 0;
        for (;;) {
            auto [q, r] = divmod(rest, f);
            if (!r.is_zero()) break;
            rest = std::move(q);
            ++mult;
        }
        if (mult == 0) continue;
        ComplexRootSet fr = find_roots(f, plain);
        for (unsigned k = 0; k < mult; ++k) out.roots.insert(out.roots.end(), fr.roots.begin(), fr.roots.end());
        out.residual_bound = std::max(out.residual_bound, fr.residual_bound);
        out.precision_bits = std::max(out.precision_bits, fr.precision_bits);
    }

    std::size_t zeros = 0;
    while (zeros < rest.size() && sgn(rest.coeffs()[zeros]) == 0) ++zeros;
    if (zeros > 0) {
        out.roots.insert(out.roots.end(), zeros, cplx(0.0));
        rest = ExactPoly(std::vector<BigRational>(rest.coeffs().begin() + static_cast<long>(zeros), rest.coeffs().end()));
    }

    if (rest.degree() == 1) {
        BigRational r = -rest.coeffs()[0] / rest.coeffs()[1];
        out.roots.emplace_back(to_double(r), 0.0);
    } else if (rest.degree() > 1) {
        double residual = 0.0;
        long bits = 0;
        std::vector<cplx> z = aberth_mp(rest, plain, residual, bits);
        out.roots.insert(out.roots.end(), z.begin(), z.end());
        out.residual_bound = std::max(out.residual_bound, residual);
        out.precision_bits = std::max(out.precision_bits, bits);
    }
    return out;
}

EmpiricalMeasure empirical_measure(const ComplexRootSet& r) {
    if (r.roots.empty()) throw InvalidArgument("empirical measure of an empty root set");
    EmpiricalMeasure m;
    double w = 1.0 / static_cast<double>(r.roots.size());
    for (const auto& z : r.roots) m.atoms.push_back({z, w});
    m.total_mass = w * static_cast<double>(r.roots.size());
    return m;
}

cplx empirical_cauchy(const ExactPoly& p, cplx z) {
    if (p.degree() < 1) throw InvalidArgument("empirical Cauchy transform needs degree at least 1");
    for (mpfr_prec_t bits = 128; bits <= 8192; bits *= 2) {
        MpPolyEvaluator ev(p, bits);
        auto ld = ev.log_derivative(z);
        if (ld.reliable) return ld.value / static_cast<double>(p.degree());
    }
    throw EvaluationAtRoot("polynomial vanishes to working precision at the evaluation point");
}

std::vector<cplx> convex_hull(std::vector<cplx> pts) {
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    auto cross = [](cplx o, cplx a, cplx b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<cplx> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

namespace {

double segment_distance(cplx a, cplx b, cplx z) {
    cplx ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(z - a);
    double t = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(z - (a + t * ab));
}

} // namespace

double distance_to_hull(const std::vector<cplx>& hull, cplx z) {
    if (hull.empty()) return std::numeric_limits<double>::infinity();
    if (hull.size() == 1) return std::abs(z - hull[0]);
    if (hull.size() == 2) return segment_distance(hull[0], hull[1], z);
    bool inside = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        cplx a = hull[i], b = hull[(i + 1) % hull.size()];
        double c = (b.real() - a.real()) * (z.imag() - a.imag()) - (b.imag() - a.imag()) * (z.real() - a.real());
        if (c < 0) inside = false;
        best = std::min(best, segment_distance(a, b, z));
    }
    return inside ? 0.0 : best;
}

bool hull_containment(const ComplexRootSet& roots, const std::vector<cplx>& base_roots, double tol) {
    auto hull = convex_hull(base_roots);
    return std::all_of(roots.roots.begin(), roots.roots.end(),
                       [&](cplx z) { return distance_to_hull(hull, z) <= tol; });
}

bool hull_containment(const ComplexRootSet& roots, const ExactPoly& p, double tol) {
    ComplexRootSet base = find_roots(squarefree_part(p), 1e-14);
    return hull_containment(roots, base.roots, tol);
}

cplx eval_cpoly(const std::vector<cplx>& c, cplx z) {
    cplx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::vector<cplx> solve_cpoly(const std::vector<cplx>& coeffs) {
    std::vector<cplx> c = coeffs;
    while (!c.empty() && c.back() == cplx(0.0)) c.pop_back();
    if (c.size() < 2) return {};
    const std::size_t n = c.size() - 1;
    if (n == 1) return {-c[0] / c[1]};

    std::vector<cplx> dc(n);
    for (std::size_t k = 1; k <= n; ++k) dc[k - 1] = c[k] * static_cast<double>(k);

    // Starting circle from the geometric mean modulus, nudged off symmetry axes.
    double lr = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        lr = std::max(lr, std::log(std::abs(c[k]) / std::abs(c[n]) + 1e-300) / static_cast<double>(n - k));
    double r = std::exp(lr);
    if (!std::isfinite(r) || r == 0.0) r = 1.0;
    std::vector<cplx> z(n);
    for (std::size_t k = 0; k < n; ++k)
        z[k] = std::polar(r, 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) / static_cast<double>(n) + 0.4);

    std::vector<bool> done(n, false);
    for (int it = 0; it < 800; ++it) {
        bool all_done = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            cplx pv = eval_cpoly(c, z[i]), dv = eval_cpoly(dc, z[i]);
            if (pv == cplx(0.0)) {
                done[i] = true;
                continue;
            }
            cplx ratio = pv / dv;
            cplx s = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            cplx w = ratio / (1.0 - ratio * s);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = ratio;
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                z[i] += cplx(1e-6 * r, 1e-6 * r);
                all_done = false;
                continue;
            }
            z[i] -= w;
            if (std::abs(w) <= 1e-16 * (1.0 + std::abs(z[i])))
                done[i] = true;
            else
                all_done = false;
        }
        if (all_done) break;
    }
    // Newton polishing, kept only when it lowers the residual.
    for (auto& zi : z) {
        for (int k = 0; k < 3; ++k) {
            cplx pv = eval_cpoly(c, zi), dv = eval_cpoly(dc, zi);
            if (dv == cplx(0.0)) break;
            cplx cand = zi - pv / dv;
            if (std::abs(eval_cpoly(c, cand)) < std::abs(pv))
                zi = cand;
            else
                break;
        }
    }
    return z;
}

std::string roots_csv(const std::vector<cplx>& roots) {
    std::string out = "re,im\n";
    for (const auto& z : roots) out += format_double(z.real()) + "," + format_double(z.imag()) + "\n";
    return out;
}

std::string measure_json(const EmpiricalMeasure& m) {
    std::string out = "{\"atoms\":[";
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        if (i) out += ",";
        out += "{\"re\":" + format_double(m.atoms[i].location.real()) + ",\"im\":" +
               format_double(m.atoms[i].location.imag()) + ",\"mass\":" + format_double(m.atoms[i].mass) + "}";
    }
    return out + "]}";
}

} // namespace rodrigues
