#include "rodrigues/saddleflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "rodrigues/errors.hpp"
#include "rodrigues/rootfind.hpp"

namespace rodrigues {

const char* to_string(Relevance r) {
    switch (r) {
        case Relevance::NonRelevant: return "non_relevant";
        case Relevance::Relevant: return "relevant";
        case Relevance::MaximallyRelevant: return "maximally_relevant";
        default: return "unassigned";
    }
}

const char* to_string(PathEnd e) {
    switch (e) {
        case PathEnd::PolePlus: return "pole";
        case PathEnd::Infinity: return "infinity";
        default: return "unresolved";
    }
}

std::string SaddleFiber::to_json() const {
    nlohmann::json j;
    j["z"] = {z.real(), z.imag()};
    j["saddles"] = nlohmann::json::array();
    for (const auto& s : saddles) {
        nlohmann::json e;
        e["u"] = {s.u.real(), s.u.imag()};
        e["G"] = s.G;
        e["H"] = s.H;
        e["simple"] = s.simple;
        e["relevance"] = to_string(s.relevance);
        e["endpoints"] = {to_string(s.endpoints[0]), to_string(s.endpoints[1])};
        j["saddles"].push_back(e);
    }
    if (max_index) j["max_index"] = *max_index;
    return j.dump();
}

SaddleFlow::SaddleFlow(const ExactPoly& p, const BigRational& alpha, SaddleSettings settings)
    : d_(p.degree()), alpha_(to_double(alpha)), settings_(settings) {
    if (d_ < 1) throw InvalidArgument("P must have positive degree");
    if (sgn(alpha) <= 0 || alpha >= d_) throw AlphaOutOfRange("need 0 < alpha < deg P");
    for (const auto& c : p.coeffs()) p_.emplace_back(to_double(c), 0.0);
    for (std::size_t k = 1; k < p_.size(); ++k) dp_.push_back(p_[k] * static_cast<double>(k));
    for (std::size_t k = 1; k < dp_.size(); ++k) ddp_.push_back(dp_[k] * static_cast<double>(k));
    log_lead_ = std::log(std::abs(to_double(p.leading())));
    roots_ = find_roots(p, 1e-14).roots;
    root_radius_ = 0.0;
    for (cplx r : roots_) root_radius_ = std::max(root_radius_, std::abs(r));
}

cplx SaddleFlow::eval(const std::vector<cplx>& c, cplx u) const {
    cplx acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * u + c[k];
    return acc;
}

double SaddleFlow::G(cplx z, cplx u) const {
    cplx pu = eval(p_, u);
    if (pu == 0.0 || u == z) throw PoleHit("phase function evaluated at a pole");
    return std::log(std::abs(pu)) / alpha_ - std::log(std::abs(u - z));
}

double SaddleFlow::H(cplx z, cplx u) const { return G(z, u) * alpha_ / (d_ - alpha_); }

cplx SaddleFlow::slope(cplx z, cplx u) const { return eval(dp_, u) / (alpha_ * eval(p_, u)) - 1.0 / (u - z); }

cplx SaddleFlow::curvature(cplx z, cplx u) const {
    cplx pu = eval(p_, u), dpu = eval(dp_, u), ddpu = eval(ddp_, u);
    cplx w = u - z;
    return (ddpu * pu - dpu * dpu) / (alpha_ * pu * pu) + 1.0 / (w * w);
}

std::vector<cplx> SaddleFlow::fibre_roots(cplx z) const {
    // u^j coefficient: (j - alpha) p_j - (j + 1) p_{j+1} z
    std::vector<cplx> c(p_.size());
    for (std::size_t j = 0; j < p_.size(); ++j) {
        c[j] = (static_cast<double>(j) - alpha_) * p_[j];
        if (j + 1 < p_.size()) c[j] -= static_cast<double>(j + 1) * p_[j + 1] * z;
    }
    std::vector<cplx> us = solve_cpoly(c);
    // Newton polish on F and F_u = P''(u)(u - z) + (1 - alpha) P'(u).
    for (cplx& u : us) {
        for (int it = 0; it < 4; ++it) {
            cplx f = eval(dp_, u) * (u - z) - alpha_ * eval(p_, u);
            cplx fu = eval(ddp_, u) * (u - z) + (1.0 - alpha_) * eval(dp_, u);
            if (fu == 0.0) break;
            cplx step = f / fu;
            u -= step;
            if (std::abs(step) <= 1e-16 * (1.0 + std::abs(u))) break;
        }
    }
    return us;
}

SaddleFiber SaddleFlow::solve_fiber(cplx z) const {
    SaddleFiber fibre;
    fibre.z = z;
    std::vector<cplx> us = fibre_roots(z);
    for (std::size_t i = 0; i < us.size(); ++i) {
        double sep = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < us.size(); ++j)
            if (j != i) sep = std::min(sep, std::abs(us[i] - us[j]));
        double scale = 1.0 + std::abs(us[i]);
        if (sep < 1e-10 * scale) throw OnBranchPoint("two saddles coincide");
        Saddle s;
        s.u = us[i];
        s.G = G(z, s.u);
        s.H = s.G * alpha_ / (d_ - alpha_);
        s.second_deriv = curvature(z, s.u);
        s.simple = sep > 1e-6 * scale;
        fibre.saddles.push_back(s);
    }
    return fibre;
}

AscentPath SaddleFlow::trace_ascent(cplx z, const Saddle& s, int direction) const {
    if (s.second_deriv == 0.0) throw DegenerateSaddle("saddle is not simple");
    const double scale = 1.0 + std::abs(s.u);
    const double r_escape = escape_radius(z), r_pole = pole_radius(z);
    const double max_step = 0.05 * r_escape;
    // Re(h v^2) > 0 is steepest for v = exp(-i arg(h) / 2).
    cplx v0 = std::polar(1.0, -std::arg(s.second_deriv) / 2.0) * static_cast<double>(direction >= 0 ? 1 : -1);
    const double kick = 10.0 * std::sqrt(std::numeric_limits<double>::epsilon()) * scale;

    AscentPath path;
    cplx u = s.u + kick * v0;
    double g = G(z, u);
    if (settings_.keep_points) path.points = {s.u, u};
    path.arc_length = kick;

    auto heading = [&](cplx w) {
        cplx k = std::conj(slope(z, w));
        double m = std::abs(k);
        return m > 0.0 ? k / m : cplx(0.0);
    };

    double h = std::max(kick, 1e-4 * scale);
    const double cos_limit = std::cos(0.5);
    for (int step = 0; step < settings_.step_budget; ++step) {
        if (std::abs(u - z) < r_pole) {
            path.endpoint = PathEnd::PolePlus;
            return path;
        }
        if (std::abs(u) > r_escape) {
            path.endpoint = PathEnd::Infinity;
            return path;
        }
        cplx d1 = heading(u);
        if (d1 == 0.0) throw StepFailure("ascent stalled at a critical point");
        double cap = std::min({max_step, 0.25 * std::abs(u - z), 0.5 * std::max(std::abs(u), scale)});
        h = std::min(h, cap);
        for (;;) {
            cplx mid = u + 0.5 * h * d1;
            cplx d2 = heading(mid);
            cplx next = u + h * d2;
            bool ok = std::real(d1 * std::conj(d2)) > cos_limit;
            double gn = 0.0;
            if (ok) {
                try {
                    gn = G(z, next);
                    ok = gn > g;
                } catch (const PoleHit&) {
                    ok = false;
                }
            }
            if (ok) {
                u = next;
                g = gn;
                path.arc_length += h;
                if (settings_.keep_points) path.points.push_back(u);
                h *= 1.5;
                break;
            }
            h *= 0.5;
            if (h < settings_.min_step) throw StepFailure("cannot keep the ascent monotone");
        }
    }
    path.endpoint = PathEnd::Unresolved;
    return path;
}

SaddleFiber SaddleFlow::classify(SaddleFiber fibre) const {
    auto& sv = fibre.saddles;
    for (const auto& s : sv)
        if (!s.simple) throw OnBranchPoint("fibre has a non-simple saddle");
    for (std::size_t i = 0; i < sv.size(); ++i)
        for (std::size_t j = i + 1; j < sv.size(); ++j)
            if (std::abs(sv[i].G - sv[j].G) < settings_.delta_gap)
                throw AmbiguousClassification("two saddles share a critical value");

    std::vector<std::size_t> order(sv.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sv[a].G > sv[b].G; });

    // The first saddle, by decreasing G, whose ascent paths reach both the pole
    // and infinity is where the two superlevel components merge.
    for (std::size_t idx : order) {
        Saddle& s = sv[idx];
        for (int k = 0; k < 2; ++k) {
            try {
                s.endpoints[static_cast<std::size_t>(k)] = trace_ascent(fibre.z, s, k == 0 ? 1 : -1).endpoint;
            } catch (const StepFailure&) {
                s.endpoints[static_cast<std::size_t>(k)] = PathEnd::Unresolved;
            }
        }
        s.traced = true;
        bool split = (s.endpoints[0] == PathEnd::PolePlus && s.endpoints[1] == PathEnd::Infinity) ||
                     (s.endpoints[0] == PathEnd::Infinity && s.endpoints[1] == PathEnd::PolePlus);
        if (split && !fibre.max_index) {
            fibre.max_index = idx;
            if (!settings_.trace_all) break;
        }
    }
    if (!fibre.max_index) throw AmbiguousClassification("no saddle separates the pole from infinity");

    const double gmax = sv[*fibre.max_index].G;
    for (std::size_t i = 0; i < sv.size(); ++i) {
        if (i == *fibre.max_index)
            sv[i].relevance = Relevance::MaximallyRelevant;
        else
            sv[i].relevance = sv[i].G < gmax ? Relevance::Relevant : Relevance::NonRelevant;
    }
    return fibre;
}

double G_value(const ExactPoly& p, const BigRational& alpha, cplx z, cplx u) { return SaddleFlow(p, alpha).G(z, u); }

double H_value(const ExactPoly& p, const BigRational& alpha, cplx z, cplx u) { return SaddleFlow(p, alpha).H(z, u); }

SaddleFiber solve_fiber(const ExactPoly& p, const BigRational& alpha, cplx z) {
    return SaddleFlow(p, alpha).solve_fiber(z);
}

AscentPath trace_ascent(const ExactPoly& p, const BigRational& alpha, cplx z, cplx u0, int direction) {
    SaddleSettings settings;
    settings.keep_points = true;
    SaddleFlow flow(p, alpha, settings);
    Saddle s;
    s.u = u0;
    s.G = flow.G(z, u0);
    s.second_deriv = flow.curvature(z, u0);
    return flow.trace_ascent(z, s, direction);
}

SaddleFiber classify_fiber(const ExactPoly& p, const BigRational& alpha, const SaddleFiber& fibre) {
    return SaddleFlow(p, alpha).classify(fibre);
}

} // namespace rodrigues
