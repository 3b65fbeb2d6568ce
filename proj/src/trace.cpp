#include "rodrigues/trace.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rodrigues/errors.hpp"
#include "rodrigues/output.hpp"

namespace rodrigues {

namespace {

constexpr double two_pi = 6.283185307179586;
const double nan_value = std::numeric_limits<double>::quiet_NaN();

struct CellResult {
    bool solved = false;
    CellFlag flag = CellFlag::OK;
    double potential = nan_value;
    cplx cauchy{nan_value, nan_value};
    std::vector<cplx> roots;
    std::vector<double> H;
    std::size_t max_index = 0;
};

bool try_classify(const SaddleFlow& flow, cplx z, double constant, CellResult& out) {
    SaddleFiber f = flow.classified_fibre(z);
    const Saddle& m = f.saddles[*f.max_index];
    if (m.u == z) return false;
    out.roots.clear();
    out.H.clear();
    for (const auto& s : f.saddles) {
        out.roots.push_back(s.u);
        out.H.push_back(flow.H_monic(z, s.u));
    }
    out.max_index = *f.max_index;
    out.potential = constant + out.H[out.max_index];
    out.cauchy = 1.0 / (flow.beta() * (m.u - z));
    out.solved = true;
    return true;
}

CellFlag flag_of(const std::exception& e) {
    if (dynamic_cast<const OnBranchPoint*>(&e)) return CellFlag::NearBranch;
    if (dynamic_cast<const PoleHit*>(&e)) return CellFlag::PoleCell;
    return CellFlag::NearDelta;
}

// Classify at z; on failure flag the cell and retry at a few nearby points so
// the potential stays defined for the Laplacian.
CellResult evaluate_cell(const SaddleFlow& flow, cplx z, double h, double constant) {
    CellResult out;
    try {
        if (try_classify(flow, z, constant, out)) return out;
        out.flag = CellFlag::PoleCell;
    } catch (const Error& e) {
        out.flag = flag_of(e);
    }
    for (int k = 0; k < 8; ++k) {
        cplx dz = std::polar(1e-3 * h, 0.3 + two_pi * k / 8.0);
        try {
            if (try_classify(flow, z + dz, constant, out)) return out;
        } catch (const Error&) {
        }
    }
    return out;
}

std::size_t nearest(const std::vector<cplx>& pts, cplx target) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < pts.size(); ++k)
        if (std::abs(pts[k] - target) < std::abs(pts[best] - target)) best = k;
    return best;
}

// Reorder `roots` (and H) so that entry k continues reference[k].
void match_to(const std::vector<cplx>& reference, std::vector<cplx>& roots, std::vector<double>& H,
              std::size_t& max_index) {
    if (reference.size() != roots.size()) return;
    std::vector<bool> used(roots.size(), false);
    std::vector<std::size_t> perm(roots.size());
    for (std::size_t k = 0; k < reference.size(); ++k) {
        std::size_t best = roots.size();
        for (std::size_t r = 0; r < roots.size(); ++r) {
            if (used[r]) continue;
            if (best == roots.size() || std::abs(roots[r] - reference[k]) < std::abs(roots[best] - reference[k])) best = r;
        }
        used[best] = true;
        perm[k] = best;
    }
    std::vector<cplx> nr(roots.size());
    std::vector<double> nh(roots.size());
    std::size_t nm = max_index;
    for (std::size_t k = 0; k < perm.size(); ++k) {
        nr[k] = roots[perm[k]];
        nh[k] = H[perm[k]];
        if (perm[k] == max_index) nm = k;
    }
    roots = std::move(nr);
    H = std::move(nh);
    max_index = nm;
}

} // namespace

const char* to_string(CellFlag f) {
    switch (f) {
        case CellFlag::OK: return "ok";
        case CellFlag::NearDelta: return "near_delta";
        case CellFlag::NearBranch: return "near_branch";
        default: return "pole";
    }
}

cplx TraceField::point(int i, int j) const {
    double x = nx > 1 ? window.re_min + i * step_re() : 0.5 * (window.re_min + window.re_max);
    double y = ny > 1 ? window.im_min + j * step_im() : 0.5 * (window.im_min + window.im_max);
    return {x, y};
}

double TraceField::step_re() const {
    return nx > 1 ? (window.re_max - window.re_min) / (nx - 1) : window.re_max - window.re_min;
}

double TraceField::step_im() const {
    return ny > 1 ? (window.im_max - window.im_min) / (ny - 1) : window.im_max - window.im_min;
}

double constant_B(int d, double alpha) {
    if (!(alpha > 0.0 && alpha < d)) throw AlphaOutOfRange("need 0 < alpha < d");
    double beta = (d - alpha) / alpha;
    return (beta * std::log(beta) - (beta + 1.0) * std::log(beta + 1.0)) / beta;
}

double constant_B(int d, const BigRational& alpha) {
    require_alpha_in_range(alpha, d);
    return constant_B(d, to_double(alpha));
}

double potential_at(const SaddleFlow& flow, cplx z) {
    SaddleFiber f = flow.classified_fibre(z);
    return constant_B(flow.degree(), flow.alpha()) + flow.H_monic(z, f.saddles[*f.max_index].u);
}

double potential_at(const ExactPoly& p, const BigRational& alpha, cplx z) {
    return potential_at(SaddleFlow(p, alpha), z);
}

cplx cauchy_pred(const SaddleFlow& flow, cplx z) {
    SaddleFiber f = flow.classified_fibre(z);
    cplx u = f.saddles[*f.max_index].u;
    if (u == z) throw DegenerateSaddle("maximal saddle sits on the pole");
    return 1.0 / (flow.beta() * (u - z));
}

cplx cauchy_pred(const ExactPoly& p, const BigRational& alpha, cplx z) { return cauchy_pred(SaddleFlow(p, alpha), z); }

TraceField build_field(const ExactPoly& p, const BigRational& alpha, const Window& window, int nx, int ny,
                       const FieldOptions& options) {
    if (nx < 1 || ny < 1) throw InvalidArgument("resolution must be positive");
    SaddleFlow flow(p, alpha);
    TraceField field;
    field.window = window;
    field.nx = nx;
    field.ny = ny;
    field.includes_constant = options.include_constant;
    field.constant = constant_B(p.degree(), alpha);
    const double offset = options.include_constant ? field.constant : 0.0;
    const std::size_t cells = static_cast<std::size_t>(nx) * ny;
    std::vector<CellResult> results(cells);
    const double h = std::max(field.step_re(), field.step_im());

    unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(ny));
    std::atomic<int> next_row{0};
    auto work = [&] {
        for (int j = next_row++; j < ny; j = next_row++)
            for (int i = 0; i < nx; ++i) results[field.index(i, j)] = evaluate_cell(flow, field.point(i, j), h, offset);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    field.potential.resize(cells);
    field.cauchy.resize(cells);
    field.branch_index.assign(cells, -1);
    field.flags.resize(cells);
    field.fibres.resize(cells);
    field.fibre_H.resize(cells);
    field.singular_points = flow.roots();
    for (cplx b : branch_points(p, alpha)) field.singular_points.push_back(b);

    // Label branches by continuation from the left neighbour, or from the cell
    // below when the left one was flagged; flagged cells never serve as a
    // reference since their fibre may sit on the other side of a cut.
    std::vector<cplx> last;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            std::size_t k = field.index(i, j);
            CellResult& r = results[k];
            field.potential[k] = r.potential;
            field.cauchy[k] = r.cauchy;
            field.flags[k] = r.flag;
            if (!r.solved) continue;
            const std::vector<cplx>* ref = nullptr;
            if (i > 0 && field.flags[k - 1] == CellFlag::OK && !field.fibres[k - 1].empty())
                ref = &field.fibres[k - 1];
            else if (j > 0 && field.flags[k - nx] == CellFlag::OK && !field.fibres[k - nx].empty())
                ref = &field.fibres[k - nx];
            else if (!last.empty())
                ref = &last;
            if (ref) {
                match_to(*ref, r.roots, r.H, r.max_index);
            } else {
                std::vector<cplx> sorted = r.roots;
                std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) {
                    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
                });
                match_to(sorted, r.roots, r.H, r.max_index);
            }
            if (r.flag == CellFlag::OK) last = r.roots;
            field.branch_index[k] = static_cast<int>(r.max_index);
            field.fibres[k] = std::move(r.roots);
            field.fibre_H[k] = std::move(r.H);
        }
    }
    return field;
}

DensityGrid measure_density(const TraceField& field, double tolerance) {
    if (field.nx < 3 || field.ny < 3) throw InvalidArgument("density needs at least a 3x3 field");
    DensityGrid g;
    g.nx = field.nx;
    g.ny = field.ny;
    g.values.assign(static_cast<std::size_t>(field.nx) * field.ny, 0.0);
    const double hx = field.step_re(), hy = field.step_im();
    std::vector<double>& raw = g.raw;
    raw.assign(g.values.size(), 0.0);
    std::vector<bool> valid(g.values.size(), false);
    double peak = 0.0;
    for (int j = 1; j + 1 < field.ny; ++j) {
        for (int i = 1; i + 1 < field.nx; ++i) {
            double c = field.potential[field.index(i, j)];
            double e = field.potential[field.index(i + 1, j)], w = field.potential[field.index(i - 1, j)];
            double n = field.potential[field.index(i, j + 1)], s = field.potential[field.index(i, j - 1)];
            if (!std::isfinite(c + e + w + n + s)) continue;
            double lap = (e + w - 2 * c) / (hx * hx) + (n + s - 2 * c) / (hy * hy);
            std::size_t k = field.index(i, j);
            raw[k] = lap / two_pi;
            valid[k] = true;
            peak = std::max(peak, raw[k]);
        }
    }
    // Discretisation error is relative to the largest density on the grid.
    g.tolerance = tolerance >= 0.0 ? tolerance : 0.05 * peak;
    const double guard = 1.5 * std::max(hx, hy);
    for (int j = 0; j < field.ny; ++j)
        for (int i = 0; i < field.nx; ++i) {
            std::size_t k = field.index(i, j);
            if (!valid[k]) continue;
            g.values[k] = std::max(0.0, raw[k]);
            cplx z = field.point(i, j);
            bool singular = std::any_of(field.singular_points.begin(), field.singular_points.end(),
                                        [&](cplx s) { return std::abs(s - z) <= guard; });
            if (singular) continue;
            g.min_raw = std::min(g.min_raw, raw[k]);
            if (raw[k] < -g.tolerance) ++g.violations;
        }
    return g;
}

double disc_mass(const SaddleFlow& flow, cplx centre, double radius, int samples) {
    cplx acc = 0.0;
    for (int k = 0; k < samples; ++k) {
        double theta = two_pi * (k + 0.5) / samples;
        cplx c{nan_value, nan_value};
        for (int attempt = 0; attempt < 6 && !std::isfinite(c.real()); ++attempt) {
            double th = theta + attempt * 1e-4;
            try {
                c = cauchy_pred(flow, centre + std::polar(radius, th)) * std::polar(radius, th) * cplx(0.0, 1.0);
            } catch (const Error&) {
            }
        }
        if (!std::isfinite(c.real())) throw ContinuationFailure("Cauchy transform undefined along the circle");
        acc += c;
    }
    acc *= two_pi / samples;
    return acc.imag() / two_pi;
}

SupportEstimate extract_support(const TraceField& field, const SaddleFlow& flow, double mass_threshold) {
    SupportEstimate out;
    const int nx = field.nx, ny = field.ny;
    auto solved = [&](std::size_t k) { return !field.fibres[k].empty(); };

    // Crossing points on grid edges, keyed by edge id.
    std::map<std::size_t, cplx> crossing;
    auto edge = [&](int i0, int j0, int i1, int j1, std::size_t id) {
        std::size_t a = field.index(i0, j0), b = field.index(i1, j1);
        if (!solved(a) || !solved(b)) return;
        const auto& ra = field.fibres[a];
        const auto& rb = field.fibres[b];
        if (ra.size() != rb.size()) return;
        std::size_t ma = static_cast<std::size_t>(field.branch_index[a]);
        std::size_t mb = static_cast<std::size_t>(field.branch_index[b]);
        std::size_t a_in_b = nearest(rb, ra[ma]);
        if (a_in_b == mb) return;
        std::size_t b_in_a = nearest(ra, rb[mb]);
        if (b_in_a == ma) return;
        double da = field.fibre_H[a][ma] - field.fibre_H[a][b_in_a];
        double db = field.fibre_H[b][a_in_b] - field.fibre_H[b][mb];
        if (da < 0.0 || db > 0.0 || da - db <= 0.0) return;
        double t = da / (da - db);
        crossing[id] = field.point(i0, j0) + t * (field.point(i1, j1) - field.point(i0, j0));
    };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            std::size_t base = 2 * field.index(i, j);
            if (i + 1 < nx) edge(i, j, i + 1, j, base);
            if (j + 1 < ny) edge(i, j, i, j + 1, base + 1);
        }

    // Marching squares on the crossings, then chain segments into polylines.
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            std::size_t ids[4] = {2 * field.index(i, j), 2 * field.index(i + 1, j) + 1, 2 * field.index(i, j + 1),
                                  2 * field.index(i, j) + 1};
            std::vector<std::size_t> hit;
            for (std::size_t id : ids)
                if (crossing.count(id)) hit.push_back(id);
            if (hit.size() == 2) segments.emplace_back(hit[0], hit[1]);
            if (hit.size() == 4) {
                segments.emplace_back(hit[0], hit[1]);
                segments.emplace_back(hit[2], hit[3]);
            }
        }
    std::multimap<std::size_t, std::size_t> at;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        at.emplace(segments[s].first, s);
        at.emplace(segments[s].second, s);
    }
    std::vector<bool> used(segments.size(), false);
    auto other_end = [&](std::size_t s, std::size_t id) {
        return segments[s].first == id ? segments[s].second : segments[s].first;
    };
    auto next_segment = [&](std::size_t id) -> long {
        auto range = at.equal_range(id);
        for (auto it = range.first; it != range.second; ++it)
            if (!used[it->second]) return static_cast<long>(it->second);
        return -1;
    };
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        used[s] = true;
        std::vector<std::size_t> chain{segments[s].first, segments[s].second};
        for (long n; (n = next_segment(chain.back())) >= 0;) {
            used[static_cast<std::size_t>(n)] = true;
            chain.push_back(other_end(static_cast<std::size_t>(n), chain.back()));
        }
        for (long n; (n = next_segment(chain.front())) >= 0;) {
            used[static_cast<std::size_t>(n)] = true;
            chain.insert(chain.begin(), other_end(static_cast<std::size_t>(n), chain.front()));
        }
        std::vector<cplx> line;
        for (std::size_t id : chain) line.push_back(crossing[id]);
        out.polylines.push_back(std::move(line));
    }
    // Isolated crossings that no square paired up still mark the support.
    std::map<std::size_t, bool> in_segment;
    for (const auto& sgm : segments) in_segment[sgm.first] = in_segment[sgm.second] = true;
    for (const auto& [id, pt] : crossing)
        if (!in_segment.count(id)) out.polylines.push_back({pt});

    // Atoms can only sit at roots of P. Fit m(r) = a + b sqrt(r) + c r over
    // radii h, h/4, h/16 and keep the intercept.
    const double h = std::max(field.step_re(), field.step_im());
    for (cplx root : flow.roots()) {
        double s[3], m[3];
        try {
            for (int k = 0; k < 3; ++k) {
                double r = h / std::pow(4.0, k);
                s[k] = std::sqrt(r);
                m[k] = disc_mass(flow, root, r);
            }
        } catch (const Error&) {
            continue;
        }
        // Solve the 3x3 system for (a, b, c) by Cramer's rule.
        auto det3 = [](double a[3][3]) {
            return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                   a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        };
        double A[3][3], Aa[3][3];
        for (int k = 0; k < 3; ++k) {
            A[k][0] = 1.0;
            A[k][1] = s[k];
            A[k][2] = s[k] * s[k];
        }
        std::copy(&A[0][0], &A[0][0] + 9, &Aa[0][0]);
        for (int k = 0; k < 3; ++k) Aa[k][0] = m[k];
        double mass = det3(Aa) / det3(A);
        if (mass > mass_threshold) out.point_masses.push_back({root, mass});
    }
    return out;
}

double curve_residual(const BivariateCurve& curve, cplx z, cplx c) {
    std::vector<cplx> co = curve.fibre_coeffs(z);
    cplx val = 0.0;
    double scale = 0.0, pw = 1.0;
    for (std::size_t j = co.size(); j-- > 0;) val = val * c + co[j];
    for (std::size_t j = 0; j < co.size(); ++j) {
        scale += std::abs(co[j]) * pw;
        pw *= std::abs(c);
    }
    return scale > 0.0 ? std::abs(val) / scale : std::abs(val);
}

std::string SupportEstimate::to_json() const {
    nlohmann::json j;
    j["type"] = "FeatureCollection";
    j["features"] = nlohmann::json::array();
    for (const auto& line : polylines) {
        nlohmann::json coords = nlohmann::json::array();
        for (cplx p : line) coords.push_back({p.real(), p.imag()});
        j["features"].push_back({{"type", "Feature"},
                                 {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                                 {"properties", {{"kind", "support"}}}});
    }
    for (const auto& pm : point_masses) {
        j["features"].push_back({{"type", "Feature"},
                                 {"geometry", {{"type", "Point"}, {"coordinates", {pm.location.real(), pm.location.imag()}}}},
                                 {"properties", {{"kind", "point_mass"}, {"mass", pm.mass}}}});
    }
    return j.dump();
}

std::string field_csv(const TraceField& field) {
    std::string out = "z_re,z_im,potential,cauchy_re,cauchy_im,branch,flag\n";
    for (int j = 0; j < field.ny; ++j)
        for (int i = 0; i < field.nx; ++i) {
            std::size_t k = field.index(i, j);
            cplx z = field.point(i, j);
            out += format_double(z.real()) + ',' + format_double(z.imag()) + ',' + format_double(field.potential[k]) +
                   ',' + format_double(field.cauchy[k].real()) + ',' + format_double(field.cauchy[k].imag()) + ',' +
                   std::to_string(field.branch_index[k]) + ',' + to_string(field.flags[k]) + '\n';
        }
    return out;
}

TraceField field_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "z_re,z_im,potential,cauchy_re,cauchy_im,branch,flag")
        throw ParseError("not a field CSV");
    struct Row {
        double re, im, pot, cre, cim;
        int branch;
        CellFlag flag;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
        if (cols.size() != 7) throw ParseError("field CSV row needs 7 columns");
        Row r;
        try {
            r.re = std::stod(cols[0]);
            r.im = std::stod(cols[1]);
            r.pot = std::stod(cols[2]);
            r.cre = std::stod(cols[3]);
            r.cim = std::stod(cols[4]);
            r.branch = std::stoi(cols[5]);
        } catch (const std::exception&) {
            throw ParseError("bad number in field CSV: " + line);
        }
        if (cols[6] == "ok") r.flag = CellFlag::OK;
        else if (cols[6] == "near_delta") r.flag = CellFlag::NearDelta;
        else if (cols[6] == "near_branch") r.flag = CellFlag::NearBranch;
        else if (cols[6] == "pole") r.flag = CellFlag::PoleCell;
        else throw ParseError("unknown cell flag " + cols[6]);
        rows.push_back(r);
    }
    if (rows.empty()) throw ParseError("field CSV has no cells");
    int nx = 0;
    while (nx < static_cast<int>(rows.size()) && rows[nx].im == rows[0].im) ++nx;
    if (rows.size() % nx != 0) throw ParseError("field CSV is not a full grid");
    TraceField f;
    f.nx = nx;
    f.ny = static_cast<int>(rows.size()) / nx;
    f.window = {rows.front().re, rows.back().re, rows.front().im, rows.back().im};
    f.includes_constant = true;
    for (const Row& r : rows) {
        f.potential.push_back(r.pot);
        f.cauchy.emplace_back(r.cre, r.cim);
        f.branch_index.push_back(r.branch);
        f.flags.push_back(r.flag);
    }
    f.fibres.resize(rows.size());
    f.fibre_H.resize(rows.size());
    return f;
}

std::string field_svg(const TraceField& field, const SupportEstimate* support, const std::vector<cplx>& markers) {
    const Window& w = field.window;
    const double hx = field.step_re(), hy = field.step_im();
    SvgCanvas svg(w.re_min - hx / 2, w.re_max + hx / 2, w.im_min - hy / 2, w.im_max + hy / 2);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : field.potential)
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    for (int j = 0; j < field.ny; ++j)
        for (int i = 0; i < field.nx; ++i) {
            double v = field.potential[field.index(i, j)];
            cplx z = field.point(i, j);
            std::string fill = "#808080";
            if (std::isfinite(v)) fill = ramp_color(hi > lo ? (v - lo) / (hi - lo) : 0.5).hex();
            svg.cell(z.real() - hx / 2, z.imag() - hy / 2, z.real() + hx / 2, z.imag() + hy / 2, fill);
        }
    if (support) {
        for (const auto& line : support->polylines) svg.polyline(line, "#ff2020", 2.0);
        for (const auto& pm : support->point_masses) svg.dot(pm.location.real(), pm.location.imag(), 5.0, "#ff2020");
    }
    for (cplx m : markers) svg.square(m.real(), m.imag(), 4.0, "#000000");
    return svg.str();
}

} // namespace rodrigues
