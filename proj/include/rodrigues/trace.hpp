#pragma once

#include <complex>
#include <string>
#include <vector>

#include "rodrigues/curves.hpp"
#include "rodrigues/exactpoly.hpp"
#include "rodrigues/saddleflow.hpp"

namespace rodrigues {

struct Window {
    double re_min = -2.0, re_max = 2.0, im_min = -2.0, im_max = 2.0;
};

enum class CellFlag { OK, NearDelta, NearBranch, PoleCell };
const char* to_string(CellFlag f);

struct TraceField {
    Window window;
    int nx = 0, ny = 0;
    bool includes_constant = true;
    double constant = 0.0;
    // Row-major, index j * nx + i with i along the real axis.
    std::vector<double> potential;
    std::vector<cplx> cauchy;
    std::vector<int> branch_index;
    std::vector<CellFlag> flags;
    // Saddles at each cell, ordered by continuation from the previous cell,
    // with their H values (P made monic). Empty when nothing could be solved.
    std::vector<std::vector<cplx>> fibres;
    std::vector<std::vector<double>> fibre_H;
    // Roots of P and branch points: the potential is not smooth there.
    std::vector<cplx> singular_points;

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    cplx point(int i, int j) const;
    double step_re() const;
    double step_im() const;
    // Potential without the additive constant.
    double shape(int i, int j) const { return potential[index(i, j)] - (includes_constant ? constant : 0.0); }
};

// (beta log beta - (beta + 1) log(beta + 1)) / beta with beta = (d - alpha) / alpha.
double constant_B(int d, const BigRational& alpha);
double constant_B(int d, double alpha);

// Limit of (1/deg) log|monic descendant| at a point where classification succeeds.
double potential_at(const SaddleFlow& flow, cplx z);
double potential_at(const ExactPoly& p, const BigRational& alpha, cplx z);
// alpha / ((d - alpha)(u - z)) at the maximally relevant saddle.
cplx cauchy_pred(const SaddleFlow& flow, cplx z);
cplx cauchy_pred(const ExactPoly& p, const BigRational& alpha, cplx z);

struct FieldOptions {
    unsigned workers = 0;  // 0: hardware concurrency
    bool include_constant = true;
};

TraceField build_field(const ExactPoly& p, const BigRational& alpha, const Window& window, int nx, int ny,
                       const FieldOptions& options = {});

struct DensityGrid {
    int nx = 0, ny = 0;
    std::vector<double> values;  // clipped at 0; border cells and cells next to unsolved ones are 0
    std::vector<double> raw;     // before clipping; sums to the boundary flux
    double tolerance = 0.0;
    // Cells below -tolerance before clipping, not counting stencils within
    // 1.5 grid steps of a singular point, where the five-point rule is wrong.
    std::size_t violations = 0;
    double min_raw = 0.0;
};

// Five-point Laplacian of the potential over 2 pi.
DensityGrid measure_density(const TraceField& field, double tolerance = -1.0);

struct PointMass {
    cplx location;
    double mass;
};

struct SupportEstimate {
    std::vector<std::vector<cplx>> polylines;
    std::vector<PointMass> point_masses;

    std::string to_json() const;
};

// Mass of the limit measure in the disc |z - centre| < radius, from the flux
// of the predicted Cauchy transform through its boundary.
double disc_mass(const SaddleFlow& flow, cplx centre, double radius, int samples = 1024);

SupportEstimate extract_support(const TraceField& field, const SaddleFlow& flow, double mass_threshold = 1e-3);

// |Gamma(z, c)| over the sum of |coefficient| |c|^j.
double curve_residual(const BivariateCurve& curve, cplx z, cplx c);

std::string field_csv(const TraceField& field);
// Rebuilds grid, potential, Cauchy values, labels and flags from field_csv
// output. Fibres and singular points are not stored and come back empty.
TraceField field_from_csv(const std::string& csv);
std::string field_svg(const TraceField& field, const SupportEstimate* support, const std::vector<cplx>& markers);

} // namespace rodrigues
