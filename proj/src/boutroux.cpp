#include "rodrigues/boutroux.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <json.hpp>

#include "rodrigues/errors.hpp"
#include "rodrigues/output.hpp"
#include "rodrigues/quadrature.hpp"
#include "rodrigues/rootfind.hpp"
#include "rodrigues/saddleflow.hpp"

namespace rodrigues {

namespace {

constexpr double two_pi = 6.283185307179586;
constexpr int samples_per_turn = 128;
constexpr double branch_margin = 1e-6;
const double radius_factors[] = {1e-2, 1e-3, 1e-4, 1e-5};

// Follows one sheet of the saddle fibre along a path by nearest matching,
// halving the step when the match is not clear cut.
class SheetTracker {
public:
    SheetTracker(const SaddleFlow& flow, cplx z, cplx u) : flow_(flow), z_(z), u_(u) {}

    cplx z() const { return z_; }
    cplx u() const { return u_; }

    void move_to(cplx target, int depth = 0) {
        std::vector<cplx> us = flow_.fibre_roots(target);
        double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
        cplx best{};
        for (cplx u : us) {
            double d = std::abs(u - u_);
            if (d < d1) {
                d2 = d1;
                d1 = d;
                best = u;
            } else if (d < d2) {
                d2 = d;
            }
        }
        if (d1 <= 0.25 * d2) {
            z_ = target;
            u_ = best;
            return;
        }
        if (depth >= 24) throw ContinuationFailure("sheets cannot be told apart along the path");
        cplx mid = 0.5 * (z_ + target);
        move_to(mid, depth + 1);
        move_to(target, depth + 1);
    }

private:
    const SaddleFlow& flow_;
    cplx z_, u_;
};

using Form = std::function<cplx(cplx z, cplx u)>;

struct LoopValue {
    cplx residue;
    int turns = 1;
};

// (1 / 2 pi i) times the integral of form dz over the lift of the circle
// z(theta), repeated until the lift closes. dz gives z'(theta).
LoopValue circle_residue(const SaddleFlow& flow, const std::function<cplx(double)>& z_of,
                         const std::function<cplx(double, cplx)>& dz_of, cplx u0, const Form& form) {
    const int d = flow.degree();
    SheetTracker tr(flow, z_of(0.0), u0);
    cplx start = u0;
    cplx acc = 0.0;
    const double dt = two_pi / samples_per_turn;
    for (int turn = 1; turn <= d; ++turn) {
        for (int k = 0; k < samples_per_turn; ++k) {
            double t = k * dt;
            if (turn > 1 || k > 0) tr.move_to(z_of(t));
            acc += form(tr.z(), tr.u()) * dz_of(t, tr.z()) * dt;
        }
        tr.move_to(z_of(0.0));
        if (std::abs(tr.u() - start) <= 1e-6 * (1.0 + std::abs(start))) {
            return {acc / cplx(0.0, two_pi), turn};
        }
    }
    throw ContinuationFailure("lift of the loop did not close");
}

struct Extrapolated {
    cplx value;
    int turns = 1;
    double spread = 0.0;
};

// Evaluate on the shrinking radii and extrapolate linearly in the radius from
// the two smallest.
Extrapolated over_radii(const std::function<LoopValue(double)>& at_radius, double scale) {
    std::vector<double> rs;
    std::vector<cplx> vs;
    int turns = 1;
    for (double f : radius_factors) {
        LoopValue v = at_radius(f * scale);
        rs.push_back(f * scale);
        vs.push_back(v.residue);
        turns = v.turns;
    }
    std::size_t n = rs.size();
    cplx est = (rs[n - 2] * vs[n - 1] - rs[n - 1] * vs[n - 2]) / (rs[n - 2] - rs[n - 1]);
    double spread = 0.0;
    for (cplx v : vs) spread = std::max(spread, std::abs(v - est));
    return {est, turns, spread};
}

std::string point_label(cplx z) {
    return format_double(z.real()) + (z.imag() < 0 ? "-" : "+") + format_double(std::abs(z.imag())) + "i";
}

struct PoleSetup {
    std::vector<cplx> roots;
    std::vector<cplx> critical;
    std::vector<cplx> branch;
};

PoleSetup setup(const ExactPoly& p, const BigRational& alpha) {
    require_alpha_in_range(alpha, p.degree());
    if (!strongly_generic(p)) throw GenericityFailure("P and P' need simple roots");
    PoleSetup s;
    s.roots = find_roots(p, 1e-14).roots;
    if (p.degree() > 1) s.critical = find_roots(p.derivative(), 1e-14).roots;
    s.branch = branch_points(p, alpha);
    return s;
}

cplx nearest_to(const std::vector<cplx>& pts, cplx target) {
    cplx best = pts.front();
    for (cplx q : pts)
        if (std::abs(q - target) < std::abs(best - target)) best = q;
    return best;
}

enum class Curve { Scaled, Saddle };

ResidueReport residues(const ExactPoly& p, const BigRational& alpha, Curve curve) {
    PoleSetup s = setup(p, alpha);
    SaddleFlow flow(p, alpha);
    const int d = p.degree();
    const double a = to_double(alpha);
    // W = 1/(u - z) on the scaled curve, C = alpha W/(d - alpha) on the saddle curve.
    const double factor = curve == Curve::Scaled ? 1.0 : a / (d - a);
    Form form = [factor](cplx z, cplx u) { return factor / (u - z); };
    ResidueReport report;

    for (cplx zi : s.roots) {
        double scale = std::numeric_limits<double>::infinity();
        for (cplx o : s.roots)
            if (o != zi) scale = std::min(scale, std::abs(o - zi));
        for (cplx b : s.branch) {
            double dist = std::abs(b - zi);
            if (dist > 1e-8 * (1.0 + std::abs(zi))) scale = std::min(scale, dist);
        }
        if (!std::isfinite(scale)) scale = 1.0;
        auto at_radius = [&](double r) {
            auto z_of = [&](double t) { return zi + std::polar(r, t); };
            auto dz_of = [&](double t, cplx) { return cplx(0.0, 1.0) * std::polar(r, t); };
            cplx u0 = nearest_to(flow.fibre_roots(z_of(0.0)), zi);
            return circle_residue(flow, z_of, dz_of, u0, form);
        };
        Extrapolated v = over_radii(at_radius, scale);
        ResidueEntry e;
        e.label = curve == Curve::Scaled ? "root " + point_label(zi) : "(z, u) = (" + point_label(zi) + ", " + point_label(zi) + ")";
        e.location = zi;
        e.fibre_point = zi;
        e.computed = v.value;
        e.expected = curve == Curve::Scaled ? (1.0 - a) / a : (1.0 - a) / (d - a);
        e.turns = v.turns;
        e.spread = v.spread;
        report.entries.push_back(e);
    }

    // At infinity in the chart y = 1/z. The essential sheet has u ~ d z/(d - alpha);
    // the others tend to the critical points of P.
    double far = 1.0;
    for (const auto* set : {&s.roots, &s.critical, &s.branch})
        for (cplx q : *set) far = std::max(far, 1.0 + std::abs(q));
    std::vector<cplx> start = flow.fibre_roots(far / radius_factors[0]);
    for (std::size_t k = 0; k < start.size(); ++k) {
        auto order = start;
        std::sort(order.begin(), order.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
        const bool essential = start[k] == order.front();
        cplx crit = essential || s.critical.empty() ? cplx{} : nearest_to(s.critical, start[k]);
        auto at_radius = [&](double r) {
            auto z_of = [&](double t) { return std::polar(1.0 / r, -t); };
            auto dz_of = [&](double, cplx z) { return cplx(0.0, -1.0) * z; };
            cplx z0 = z_of(0.0);
            std::vector<cplx> us = flow.fibre_roots(z0);
            cplx u0 = essential ? *std::max_element(us.begin(), us.end(), [](cplx x, cplx y) { return std::abs(x) < std::abs(y); })
                                : nearest_to(us, crit);
            // Integrating over z clockwise is the counterclockwise loop around y = 0.
            return circle_residue(flow, z_of, dz_of, u0, form);
        };
        Extrapolated v = over_radii(at_radius, 1.0 / far);
        ResidueEntry e;
        e.at_infinity = true;
        e.location = cplx(std::numeric_limits<double>::infinity(), 0.0);
        e.computed = v.value;
        e.turns = v.turns;
        e.spread = v.spread;
        if (essential) {
            e.label = curve == Curve::Scaled ? "infinity, essential sheet" : "(z, u) = (inf, inf)";
            e.fibre_point = e.location;
            e.expected = curve == Curve::Scaled ? (a - d) / a : -1.0;
        } else {
            e.label = curve == Curve::Scaled ? "infinity, slope -1 sheet at " + point_label(crit)
                                             : "(z, u) = (inf, " + point_label(crit) + ")";
            e.fibre_point = crit;
            e.expected = curve == Curve::Scaled ? 1.0 : a / (d - a);
        }
        report.entries.push_back(e);
    }

    report.sum = 0.0;
    for (auto& e : report.entries) {
        e.abs_error = std::abs(e.computed - e.expected);
        report.sum += e.computed;
    }
    return report;
}

} // namespace

double ResidueReport::max_imag() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.computed.imag()));
    return m;
}

double ResidueReport::max_error() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.abs_error);
    return m;
}

bool ResidueReport::passes(double reality_tol, double sum_tol, double value_tol) const {
    return max_imag() <= reality_tol && std::abs(sum) <= sum_tol && max_error() <= value_tol;
}

std::string ResidueReport::to_json() const {
    nlohmann::json j;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json x;
        x["location_label"] = e.label;
        x["computed"] = {e.computed.real(), e.computed.imag()};
        x["expected"] = e.expected;
        x["abs_error"] = e.abs_error;
        x["turns"] = e.turns;
        x["radius_spread"] = e.spread;
        j["entries"].push_back(x);
    }
    j["sum"] = {sum.real(), sum.imag()};
    j["max_imag"] = max_imag();
    j["max_error"] = max_error();
    j["pass"] = passes();
    return j.dump(2);
}

ResidueReport residues_scaled_curve(const ExactPoly& p, const BigRational& alpha) {
    return residues(p, alpha, Curve::Scaled);
}

ResidueReport residues_saddle_curve(const ExactPoly& p, const BigRational& alpha) {
    return residues(p, alpha, Curve::Saddle);
}

PeriodCheck period_reality_check(const ExactPoly& p, const BigRational& alpha, const std::vector<FibreLoop>& loops) {
    require_alpha_in_range(alpha, p.degree());
    SaddleFlow flow(p, alpha);
    const std::vector<cplx> branch = branch_points(p, alpha);
    const GaussRule rule = gauss_legendre(16);
    constexpr int pieces_per_edge = 64;
    PeriodCheck out;
    for (const auto& loop : loops) {
        if (loop.vertices.size() < 2) throw InvalidArgument("a loop needs at least two vertices");
        const std::size_t nv = loop.vertices.size();
        cplx z0 = loop.vertices.front();
        std::vector<cplx> us = flow.fibre_roots(z0);
        cplx start = nearest_to(us, loop.start_saddle);
        SheetTracker tr(flow, z0, start);
        cplx acc = 0.0;
        int turns = 0;
        for (;;) {
            ++turns;
            for (std::size_t v = 0; v < nv; ++v) {
                cplx a = loop.vertices[v], b = loop.vertices[(v + 1) % nv];
                for (int k = 0; k < pieces_per_edge; ++k) {
                    cplx s0 = a + (b - a) * (static_cast<double>(k) / pieces_per_edge);
                    cplx s1 = a + (b - a) * (static_cast<double>(k + 1) / pieces_per_edge);
                    cplx half = 0.5 * (s1 - s0);
                    for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
                        cplx z = 0.5 * (s0 + s1) + half * rule.nodes[g];
                        for (cplx bp : branch)
                            if (std::abs(z - bp) < branch_margin * (1.0 + std::abs(bp)))
                                throw ContinuationFailure("loop passes too close to a branch point");
                        tr.move_to(z);
                        if (tr.u() == z) throw PoleHit("loop passes through a pole");
                        acc += rule.weights[g] * half / (tr.u() - z);
                    }
                    tr.move_to(s1);
                }
            }
            if (std::abs(tr.u() - start) <= 1e-6 * (1.0 + std::abs(start))) break;
            if (turns >= p.degree()) throw ContinuationFailure("lift of the loop did not close");
        }
        out.periods.push_back(acc);
        out.turns.push_back(turns);
        out.max_real = std::max(out.max_real, std::abs(acc.real()));
    }
    return out;
}

} // namespace rodrigues
