#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "rodrigues/exactpoly.hpp"

namespace rodrigues {

using cplx = std::complex<double>;

enum class Relevance { Unassigned, NonRelevant, Relevant, MaximallyRelevant };
enum class PathEnd { PolePlus, Infinity, Unresolved };

const char* to_string(Relevance r);
const char* to_string(PathEnd e);

struct Saddle {
    cplx u;
    double G = 0.0;
    double H = 0.0;
    cplx second_deriv;  // of log P(u)/alpha - log(u - z)
    bool simple = true;
    Relevance relevance = Relevance::Unassigned;
    std::array<PathEnd, 2> endpoints{PathEnd::Unresolved, PathEnd::Unresolved};
    bool traced = false;
};

struct SaddleFiber {
    cplx z;
    std::vector<Saddle> saddles;
    std::optional<std::size_t> max_index;

    std::string to_json() const;
};

struct AscentPath {
    std::vector<cplx> points;
    PathEnd endpoint = PathEnd::Unresolved;
    double arc_length = 0.0;
};

struct SaddleSettings {
    double pole_radius = 1e-6;     // times (1 + |z|)
    double escape_factor = 10.0;   // times (1 + max|root| + |z|)
    double min_step = 1e-9;
    int step_budget = 20000;
    double delta_gap = 1e-9;       // |G_i - G_j| below this flags the fibre
    bool trace_all = false;        // trace every saddle, not just down to the maximal one
    bool keep_points = false;
};

// Phase functions for one (P, alpha). Evaluation is in double precision, which
// is ample for the low degrees this is used with.
class SaddleFlow {
public:
    SaddleFlow(const ExactPoly& p, const BigRational& alpha, SaddleSettings settings = {});

    int degree() const { return d_; }
    double alpha() const { return alpha_; }
    // (d - alpha) / alpha
    double beta() const { return (d_ - alpha_) / alpha_; }
    const SaddleSettings& settings() const { return settings_; }

    double G(cplx z, cplx u) const;
    double H(cplx z, cplx u) const;
    // H computed with P made monic.
    double H_monic(cplx z, cplx u) const { return H(z, u) - log_lead_ / (d_ - alpha_); }
    // First and second u-derivatives of log P(u)/alpha - log(u - z).
    cplx slope(cplx z, cplx u) const;
    cplx curvature(cplx z, cplx u) const;

    double escape_radius(cplx z) const { return settings_.escape_factor * (1.0 + root_radius_ + std::abs(z)); }
    double pole_radius(cplx z) const { return settings_.pole_radius * (1.0 + std::abs(z)); }

    // Roots of P'(u)(u - z) - alpha P(u), unordered.
    std::vector<cplx> fibre_roots(cplx z) const;
    SaddleFiber solve_fiber(cplx z) const;
    AscentPath trace_ascent(cplx z, const Saddle& s, int direction) const;
    SaddleFiber classify(SaddleFiber fibre) const;
    SaddleFiber classified_fibre(cplx z) const { return classify(solve_fiber(z)); }

    const std::vector<cplx>& roots() const { return roots_; }

private:
    cplx eval(const std::vector<cplx>& c, cplx u) const;

    int d_;
    double alpha_;
    double log_lead_;
    double root_radius_;
    std::vector<cplx> p_, dp_, ddp_;
    std::vector<cplx> roots_;
    SaddleSettings settings_;
};

double G_value(const ExactPoly& p, const BigRational& alpha, cplx z, cplx u);
double H_value(const ExactPoly& p, const BigRational& alpha, cplx z, cplx u);
SaddleFiber solve_fiber(const ExactPoly& p, const BigRational& alpha, cplx z);
AscentPath trace_ascent(const ExactPoly& p, const BigRational& alpha, cplx z, cplx u0, int direction);
SaddleFiber classify_fiber(const ExactPoly& p, const BigRational& alpha, const SaddleFiber& fibre);

} // namespace rodrigues
