#include "rodrigues/quadratic.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "rodrigues/errors.hpp"

namespace rodrigues {

namespace {

constexpr double pi = 3.14159265358979323846;

// sqrt(z^2 - b^2) with the cut on [-b, b] and the sign of z at infinity.
cplx outer_root(cplx z, double b) {
    if (z == 0.0) return cplx(0.0, b);
    return z * std::sqrt(1.0 - (b * b) / (z * z));
}

} // namespace

double QuadraticLaw::density(double x) const {
    if (std::abs(x) >= b_plus) return 0.0;
    return std::sqrt(b_plus * b_plus - x * x) / ((2.0 - alpha) * pi * (1.0 - x * x));
}

double QuadraticLaw::continuous_cdf(double x) const {
    if (x <= -b_plus) return 0.0;
    double phi = x >= b_plus ? pi / 2 : std::asin(x / b_plus);
    double c = std::abs(1.0 - alpha);
    // atan(c tan(phi)) without the infinity at phi = pi/2
    double inner = std::atan2(c * std::sin(phi), std::cos(phi));
    return ((phi + pi / 2) - c * (inner + pi / 2)) / ((2.0 - alpha) * pi);
}

QuadraticLaw quadratic_law(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw AlphaOutOfRange("quadratic law needs 0 < alpha < 2");
    QuadraticLaw law;
    law.alpha = alpha;
    law.b_plus = std::sqrt(alpha * (2.0 - alpha));
    law.atom_mass = std::max(0.0, (1.0 - alpha) / (2.0 - alpha));
    return law;
}

QuadraticLaw quadratic_law(const BigRational& alpha) {
    if (sgn(alpha) <= 0 || alpha >= 2) throw AlphaOutOfRange("quadratic law needs 0 < alpha < 2");
    return quadratic_law(to_double(alpha));
}

cplx quadratic_cauchy(double alpha, cplx z) {
    QuadraticLaw law = quadratic_law(alpha);
    if (z.imag() == 0.0 && std::abs(z.real()) <= law.b_plus) throw OnSupport("z lies on the support segment");
    cplx den = (alpha - 1.0) * z + outer_root(z, law.b_plus);
    if (den == 0.0) throw PoleHit("z is an atom of the law");
    return alpha / den;
}

cplx quadratic_u_plus(double alpha, cplx z) {
    QuadraticLaw law = quadratic_law(alpha);
    return (z + outer_root(z, law.b_plus)) / (2.0 - alpha);
}

cplx quadratic_u_minus(double alpha, cplx z) {
    QuadraticLaw law = quadratic_law(alpha);
    return (z - outer_root(z, law.b_plus)) / (2.0 - alpha);
}

std::string QuadraticReport::to_json() const {
    nlohmann::json j;
    j["alpha"] = alpha;
    j["roots"] = roots;
    j["ks_distance"] = ks_distance;
    j["atom_fractions"] = {atom_fractions[0], atom_fractions[1]};
    j["expected_atom"] = expected_atom;
    j["max_imag"] = max_imag;
    j["support"] = {support_min, support_max};
    j["b_plus"] = b_plus;
    return j.dump();
}

QuadraticReport compare_empirical(const ComplexRootSet& roots, double alpha, double atom_window) {
    QuadraticLaw law = quadratic_law(alpha);
    QuadraticReport rep;
    rep.alpha = alpha;
    rep.roots = roots.roots.size();
    rep.expected_atom = law.atom_mass;
    rep.b_plus = law.b_plus;
    if (roots.roots.empty()) return rep;

    std::vector<double> rest;
    std::size_t near_minus = 0, near_plus = 0;
    for (cplx r : roots.roots) {
        rep.max_imag = std::max(rep.max_imag, std::abs(r.imag()));
        double x = r.real();
        bool at_minus = std::abs(r + 1.0) <= atom_window;
        bool at_plus = std::abs(r - 1.0) <= atom_window;
        near_minus += at_minus;
        near_plus += at_plus;
        if (law.atom_mass > 0.0 && (at_minus || at_plus)) continue;
        rest.push_back(x);
    }
    const double total = static_cast<double>(roots.roots.size());
    rep.atom_fractions = {near_minus / total, near_plus / total};

    if (!rest.empty()) {
        std::sort(rest.begin(), rest.end());
        rep.support_min = rest.front();
        rep.support_max = rest.back();
        const double mass = law.continuous_mass();
        const double n = static_cast<double>(rest.size());
        double ks = 0.0;
        for (std::size_t i = 0; i < rest.size(); ++i) {
            double f = law.continuous_cdf(rest[i]) / mass;
            ks = std::max({ks, std::abs(f - i / n), std::abs((i + 1) / n - f)});
        }
        rep.ks_distance = ks;
    }
    return rep;
}

} // namespace rodrigues
