#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rodrigues/boutroux.hpp"
#include "rodrigues/curves.hpp"
#include "rodrigues/errors.hpp"
#include "rodrigues/exactpoly.hpp"
#include "rodrigues/odes.hpp"
#include "rodrigues/output.hpp"
#include "rodrigues/quadratic.hpp"
#include "rodrigues/rootfind.hpp"
#include "rodrigues/trace.hpp"

using namespace rodrigues;
using json = nlohmann::ordered_json;

namespace {

enum Exit { Pass = 0, Fail = 1, Usage = 2, Numerical = 3 };

struct Config {
    std::string poly;
    std::string alpha;
    int n = -1;
    int m = -1;
    int deg = 3;
    std::vector<double> window;
    std::vector<int> res{101, 101};
    std::uint64_t seed = 0;
    long precision = 64;
    std::string out;
    unsigned workers = 0;
    bool roots = false;
    std::string curve = "symbol";
    std::string in;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ExactPoly poly_of(const Config& c) {
    if (c.poly.empty()) throw UsageError("-P is required");
    return parse_poly(c.poly);
}

BigRational alpha_of(const Config& c, int d) {
    if (c.alpha.empty()) throw UsageError("--alpha is required");
    BigRational a = parse_rational(c.alpha);
    require_alpha_in_range(a, d);
    return a;
}

unsigned need(int v, const char* flag) {
    if (v < 0) throw UsageError(std::string(flag) + " is required");
    return static_cast<unsigned>(v);
}

std::vector<cplx> double_roots(const ExactPoly& p) {
    if (p.degree() < 1) return {};
    return find_roots(p, 1e-14).roots;
}

// Descendant roots, with the roots of P that survive m derivatives divided out exactly.
ComplexRootSet descendant_roots(const ExactPoly& p, unsigned n, unsigned m, const Config& c) {
    ExactPoly r = rodrigues_descendant(p, n, m);
    RootFindOptions opts;
    opts.seed = c.seed;
    opts.start_bits = c.precision;
    opts.target_precision = 1e-12;
    if (m < n) opts.known_factors = {squarefree_part(p)};
    if (r.degree() < 1) return {};
    return find_roots(r, opts);
}

Window fit_window(const std::vector<cplx>& pts) {
    if (pts.empty()) return Window{};
    double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0;
    for (cplx z : pts) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    }
    double span = std::max({x1 - x0, y1 - y0, 1e-3});
    double pad = 0.1 * span;
    // Square up so cells come out square.
    double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1), half = 0.5 * span + pad;
    return {cx - half, cx + half, cy - half, cy + half};
}

Window window_of(const Config& c, const std::vector<cplx>& fallback) {
    if (c.window.empty()) return fit_window(fallback);
    if (c.window.size() != 4) throw UsageError("--window takes re_min,re_max,im_min,im_max");
    Window w{c.window[0], c.window[1], c.window[2], c.window[3]};
    if (!(w.re_min <= w.re_max && w.im_min <= w.im_max)) throw UsageError("--window bounds are reversed");
    return w;
}

std::filesystem::path out_dir(const Config& c) {
    std::filesystem::path dir(c.out);
    std::filesystem::create_directories(dir);
    return dir;
}

// With --out the artifact goes to a file named `name` there; otherwise to stdout.
void emit(const Config& c, const std::string& name, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        write_text_file((out_dir(c) / name).string(), text);
    }
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string scatter_svg(const std::vector<cplx>& pts, const std::vector<cplx>& squares, const std::vector<cplx>& dots,
                        const Window& w) {
    SvgCanvas svg(w.re_min, w.re_max, w.im_min, w.im_max);
    for (cplx z : pts) svg.dot(z.real(), z.imag(), 1.5, "#1f4e9c");
    for (cplx z : dots) svg.dot(z.real(), z.imag(), 4.0, "#d62020");
    for (cplx z : squares) svg.square(z.real(), z.imag(), 4.0, "#000000");
    return svg.str();
}

std::vector<cplx> read_points_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    const bool with_m = line == "m,re,im";
    if (!with_m && line != "re,im") throw ParseError("expected a re,im or m,re,im CSV");
    std::vector<cplx> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ls(line);
        for (std::string x; std::getline(ls, x, ',');) cols.push_back(x);
        std::size_t o = with_m ? 1 : 0;
        if (cols.size() != o + 2) throw ParseError("bad row: " + line);
        pts.emplace_back(std::stod(cols[o]), std::stod(cols[o + 1]));
    }
    return pts;
}

std::vector<cplx> markers_of(const Config& c) {
    if (c.poly.empty()) return {};
    return double_roots(parse_poly(c.poly));
}

// ---- commands ----

int cmd_descend(const Config& c) {
    ExactPoly p = poly_of(c);
    unsigned n = need(c.n, "-n"), m = need(c.m, "-m");
    ExactPoly r = rodrigues_descendant(p, n, m);
    json j;
    j["P"] = to_expression(p);
    j["n"] = n;
    j["m"] = m;
    j["degree"] = r.degree();
    j["coeffs"] = json::array();
    for (const auto& q : r.coeffs()) j["coeffs"].push_back(to_string(q));
    if (c.roots) {
        ComplexRootSet rs = descendant_roots(p, n, m, c);
        j["root_count"] = rs.roots.size();
        j["hull_ok"] = hull_containment(rs, p, 1e-6);
        if (c.out.empty()) {
            j["roots"] = json::array();
            for (cplx z : rs.roots) j["roots"].push_back(complex_json(z));
        } else {
            emit(c, "roots.csv", roots_csv(rs.roots));
            emit(c, "roots.svg", scatter_svg(rs.roots, {}, double_roots(p), fit_window(rs.roots)));
        }
    }
    emit(c, "descendant.json", j.dump(2));
    return Pass;
}

int cmd_roots(const Config& c) {
    ExactPoly p = poly_of(c);
    ComplexRootSet rs = descendant_roots(p, need(c.n, "-n"), need(c.m, "-m"), c);
    if (!hull_containment(rs, p, 1e-6)) std::cerr << "warning: roots outside the convex hull of the roots of P\n";
    emit(c, "roots.csv", roots_csv(rs.roots));
    return Pass;
}

int cmd_shadow(const Config& c) {
    ExactPoly p = poly_of(c);
    unsigned n = need(c.n, "-n");
    if (n < 1) throw UsageError("-n must be at least 1");
    const unsigned d = static_cast<unsigned>(p.degree());
    std::string csv = "m,re,im\n";
    std::vector<cplx> all;
    for (unsigned m = 0; m < n * d; ++m) {
        ComplexRootSet rs = descendant_roots(p, n, m, c);
        for (cplx z : rs.roots) {
            csv += std::to_string(m) + "," + format_double(z.real()) + "," + format_double(z.imag()) + "\n";
            all.push_back(z);
        }
    }
    std::vector<cplx> base = double_roots(p);
    std::vector<cplx> squares;
    if (!c.alpha.empty()) squares = branch_points(p, alpha_of(c, p.degree()));
    cplx centre = 0.0;
    for (cplx z : base) centre += z;
    if (!base.empty()) centre /= static_cast<double>(base.size());
    std::vector<cplx> dots = base;
    dots.push_back(centre);
    if (c.out.empty()) {
        std::cout << csv;
    } else {
        emit(c, "shadow.csv", csv);
        emit(c, "shadow.svg", scatter_svg(all, squares, dots, window_of(c, all)));
    }
    return Pass;
}

int cmd_symbol(const Config& c) {
    ExactPoly p = poly_of(c);
    BigRational a = alpha_of(c, p.degree());
    BivariateCurve curve;
    if (c.curve == "symbol") curve = symbol_curve(p, a);
    else if (c.curve == "scaled") curve = scaled_symbol_curve(p, a);
    else if (c.curve == "saddle") curve = saddle_curve(p, a);
    else throw UsageError("--curve is symbol, scaled or saddle");
    emit(c, c.curve + "_curve.json", curve.to_json());
    return Pass;
}

int cmd_branch_points(const Config& c) {
    ExactPoly p = poly_of(c);
    emit(c, "branch_points.csv", roots_csv(branch_points(p, alpha_of(c, p.degree()))));
    return Pass;
}

TraceField field_of(const Config& c, const ExactPoly& p, const BigRational& a) {
    if (c.res.size() != 2 || c.res[0] < 1 || c.res[1] < 1) throw UsageError("--res takes nx,ny");
    std::vector<cplx> pts = double_roots(p);
    for (cplx b : branch_points(p, a)) pts.push_back(b);
    Window w = window_of(c, pts);
    if (c.window.empty()) {
        // Leave room around the support.
        double grow = 0.5 * (w.re_max - w.re_min);
        w = {w.re_min - grow, w.re_max + grow, w.im_min - grow, w.im_max + grow};
    }
    return build_field(p, a, w, c.res[0], c.res[1], FieldOptions{c.workers, true});
}

json field_summary(const TraceField& f) {
    std::map<std::string, int> flags;
    for (CellFlag g : f.flags) ++flags[to_string(g)];
    json j;
    j["nx"] = f.nx;
    j["ny"] = f.ny;
    j["window"] = {f.window.re_min, f.window.re_max, f.window.im_min, f.window.im_max};
    j["constant"] = f.constant;
    j["flags"] = flags;
    return j;
}

int cmd_trace(const Config& c) {
    ExactPoly p = poly_of(c);
    BigRational a = alpha_of(c, p.degree());
    TraceField f = field_of(c, p, a);
    std::string csv = field_csv(f);
    if (c.out.empty()) {
        std::cout << csv;
        return Pass;
    }
    emit(c, "field.csv", csv);
    // Rendered from the CSV so that `plot` reproduces it exactly.
    emit(c, "field.svg", field_svg(field_from_csv(csv), nullptr, double_roots(p)));
    std::cout << field_summary(f).dump(2) << "\n";
    return Pass;
}

int cmd_support(const Config& c) {
    ExactPoly p = poly_of(c);
    BigRational a = alpha_of(c, p.degree());
    TraceField f = field_of(c, p, a);
    SaddleFlow flow(p, a);
    SupportEstimate s = extract_support(f, flow);
    emit(c, "support.json", s.to_json());
    if (!c.out.empty()) emit(c, "support.svg", field_svg(f, &s, double_roots(p)));
    return Pass;
}

int cmd_plot(const Config& c) {
    if (c.in.empty()) throw UsageError("--in is required");
    std::string csv = read_text_file(c.in);
    std::string svg;
    if (csv.rfind("z_re,", 0) == 0) {
        svg = field_svg(field_from_csv(csv), nullptr, markers_of(c));
    } else {
        std::vector<cplx> pts = read_points_csv(csv);
        svg = scatter_svg(pts, {}, markers_of(c), window_of(c, pts));
    }
    if (c.out.empty()) {
        std::cout << svg;
    } else {
        std::filesystem::path target(c.out);
        if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
        write_text_file(target.string(), svg);
    }
    return Pass;
}

// ---- verify ----

struct Verdict {
    json criteria = json::array();
    bool pass = true;

    void add(const std::string& name, double value, double threshold, bool ok) {
        criteria.push_back({{"name", name}, {"value", value}, {"threshold", threshold}, {"pass", ok}});
        pass = pass && ok;
    }
    void at_most(const std::string& name, double value, double threshold) { add(name, value, threshold, value <= threshold); }
};

int finish(const Config& c, const std::string& target, Verdict& v, json extra = json::object()) {
    json j;
    j["target"] = target;
    j["pass"] = v.pass;
    j["criteria"] = v.criteria;
    for (auto& [k, val] : extra.items()) j[k] = val;
    emit(c, "verify_" + target + ".json", j.dump(2));
    return v.pass ? Pass : Fail;
}

ExactPoly random_generic(int d, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-5, 5);
    for (;;) {
        std::vector<BigRational> cs;
        for (int k = 0; k <= d; ++k) cs.emplace_back(coef(rng));
        if (cs.back() == 0) continue;
        ExactPoly p(cs);
        if (strongly_generic(p)) return p;
    }
}

int verify_ode_cmd(const Config& c) {
    std::mt19937_64 rng(c.seed);
    ExactPoly p = c.poly.empty() ? random_generic(c.deg, rng) : parse_poly(c.poly);
    if (p.degree() < 1) throw UsageError("P must have positive degree");
    unsigned nmax = c.n < 0 ? 4 : static_cast<unsigned>(c.n);
    const unsigned d = static_cast<unsigned>(p.degree());
    int checked = 0, failed = 0;
    for (unsigned n = 1; n <= nmax; ++n)
        for (unsigned m = 0; m < n * d; ++m) {
            ++checked;
            if (!verify_ode(build_ode_poly(p, n, m), rodrigues_descendant(p, n, m)).exact) ++failed;
        }
    Verdict v;
    v.add("operator annihilates every descendant", failed, 0, failed == 0);
    return finish(c, "ode", v, {{"P", to_expression(p)}, {"cases", checked}});
}

int verify_quadratic_cmd(const Config& c) {
    BigRational a = alpha_of(c, 2);
    const double ad = to_double(a);
    unsigned n = c.n < 0 ? 200 : static_cast<unsigned>(c.n);
    unsigned m = c.m >= 0 ? static_cast<unsigned>(c.m) : static_cast<unsigned>(std::floor(ad * n));
    const ExactPoly quad{-1, 0, 1};
    RootFindOptions opts;
    opts.known_factors = {quad};
    opts.target_precision = 1e-10;
    opts.seed = c.seed;
    opts.start_bits = c.precision;
    ComplexRootSet rs = find_roots(rodrigues_descendant(quad, n, m), opts);
    QuadraticReport rep = compare_empirical(rs, ad);
    Verdict v;
    v.at_most("ks_distance", rep.ks_distance, rep.expected_atom > 0 ? 0.07 : 0.05);
    if (rep.expected_atom > 0) {
        for (int s = 0; s < 2; ++s)
            v.at_most(s ? "atom_error_plus" : "atom_error_minus", std::abs(rep.atom_fractions[s] - rep.expected_atom), 0.05);
    } else {
        v.at_most("atom_fraction_minus", rep.atom_fractions[0], 0.02);
        v.at_most("atom_fraction_plus", rep.atom_fractions[1], 0.02);
        v.at_most("support_overshoot", std::max(-rep.b_plus - rep.support_min, rep.support_max - rep.b_plus), 0.02);
    }
    v.add("hull_containment", 0, 1e-6, hull_containment(rs, quad, 1e-6));
    return finish(c, "quadratic", v, {{"n", n}, {"m", m}, {"report", json::parse(rep.to_json())}});
}

int verify_boutroux_cmd(const Config& c) {
    ExactPoly p = poly_of(c);
    BigRational a = alpha_of(c, p.degree());
    ResidueReport scaled = residues_scaled_curve(p, a), saddle = residues_saddle_curve(p, a);
    Verdict v;
    for (auto [name, r] : {std::pair{"scaled", &scaled}, std::pair{"saddle", &saddle}}) {
        std::string s = name;
        v.at_most(s + "_max_imag", r->max_imag(), 1e-9);
        v.at_most(s + "_abs_sum", std::abs(r->sum), 1e-9);
        v.at_most(s + "_max_error", r->max_error(), 1e-7);
    }
    return finish(c, "boutroux", v,
                  {{"scaled_curve", json::parse(scaled.to_json())}, {"saddle_curve", json::parse(saddle.to_json())}});
}

int verify_trace_cmd(const Config& c) {
    ExactPoly p = poly_of(c);
    BigRational a = alpha_of(c, p.degree());
    TraceField f = field_of(c, p, a);
    BivariateCurve curve = symbol_curve(p, a);
    std::size_t ok = 0, good = 0;
    for (std::size_t k = 0; k < f.flags.size(); ++k) {
        if (f.flags[k] != CellFlag::OK) continue;
        ++ok;
        cplx z = f.point(static_cast<int>(k % f.nx), static_cast<int>(k / f.nx));
        if (curve_residual(curve, z, f.cauchy[k]) <= 1e-8) ++good;
    }
    double frac = ok ? static_cast<double>(good) / ok : 0.0;
    Verdict v;
    v.add("fraction_of_ok_cells_on_curve", frac, 0.99, frac >= 0.99);
    return finish(c, "trace", v, {{"field", field_summary(f)}});
}

void add_poly(CLI::App* s, Config& c) { s->add_option("-P,--poly", c.poly, "polynomial, e.g. \"z^3 - z + 1/3\""); }
void add_alpha(CLI::App* s, Config& c) { s->add_option("--alpha", c.alpha, "exponent ratio p/q"); }
void add_nm(CLI::App* s, Config& c) {
    s->add_option("-n", c.n, "power of P");
    s->add_option("-m", c.m, "order of the derivative");
}
void add_grid(CLI::App* s, Config& c) {
    s->add_option("--window", c.window, "re_min,re_max,im_min,im_max")->delimiter(',')->expected(4);
    s->add_option("--res", c.res, "nx,ny")->delimiter(',')->expected(2);
    s->add_option("--workers", c.workers, "worker threads (0: all cores)");
}
void add_common(CLI::App* s, Config& c) {
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--precision", c.precision, "starting working precision in bits")->check(CLI::Range(16L, 1L << 20));
    s->add_option("--out", c.out, "output directory (stdout when omitted)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rodrigues descendants of polynomials and their limiting root distributions"};
    app.require_subcommand(1);
    Config c;

    auto* descend = app.add_subcommand("descend", "coefficients (and roots) of the m-th derivative of P^n");
    add_poly(descend, c);
    add_nm(descend, c);
    add_common(descend, c);
    descend->add_flag("--roots", c.roots, "also compute the roots");

    auto* roots = app.add_subcommand("roots", "roots of a descendant as CSV");
    add_poly(roots, c);
    add_nm(roots, c);
    add_common(roots, c);

    auto* shadow = app.add_subcommand("shadow", "roots of every descendant of P^n");
    add_poly(shadow, c);
    add_alpha(shadow, c);
    shadow->add_option("-n", c.n, "power of P");
    shadow->add_option("--window", c.window, "re_min,re_max,im_min,im_max")->delimiter(',')->expected(4);
    add_common(shadow, c);

    auto* symbol = app.add_subcommand("symbol", "defining polynomial of the limit curve");
    add_poly(symbol, c);
    add_alpha(symbol, c);
    symbol->add_option("--curve", c.curve, "symbol, scaled or saddle");
    add_common(symbol, c);

    auto* branch = app.add_subcommand("branch-points", "branch points of the saddle curve");
    add_poly(branch, c);
    add_alpha(branch, c);
    add_common(branch, c);

    auto* trace = app.add_subcommand("trace", "limiting potential and Cauchy transform on a grid");
    add_poly(trace, c);
    add_alpha(trace, c);
    add_grid(trace, c);
    add_common(trace, c);

    auto* support = app.add_subcommand("support", "support curves and point masses of the limit measure");
    add_poly(support, c);
    add_alpha(support, c);
    add_grid(support, c);
    add_common(support, c);

    auto* plot = app.add_subcommand("plot", "render a field or point CSV as SVG");
    plot->add_option("--in", c.in, "CSV written by trace, roots, descend or shadow");
    add_poly(plot, c);
    plot->add_option("--window", c.window, "re_min,re_max,im_min,im_max")->delimiter(',')->expected(4);
    plot->add_option("--out", c.out, "SVG file (stdout when omitted)");

    auto* verify = app.add_subcommand("verify", "run a verification suite; exit 1 on failure");
    verify->require_subcommand(1);
    std::map<std::string, CLI::App*> targets;
    for (const char* t : {"ode", "quadratic", "boutroux", "trace"}) targets[t] = verify->add_subcommand(t);
    add_poly(targets["ode"], c);
    targets["ode"]->add_option("--deg", c.deg, "degree of the random P");
    targets["ode"]->add_option("--n,-n", c.n, "largest power of P");
    add_common(targets["ode"], c);
    add_alpha(targets["quadratic"], c);
    targets["quadratic"]->add_option("--n,-n", c.n, "power of z^2 - 1");
    targets["quadratic"]->add_option("-m", c.m, "order of the derivative (default floor(alpha n))");
    add_common(targets["quadratic"], c);
    add_poly(targets["boutroux"], c);
    add_alpha(targets["boutroux"], c);
    add_common(targets["boutroux"], c);
    add_poly(targets["trace"], c);
    add_alpha(targets["trace"], c);
    add_grid(targets["trace"], c);
    add_common(targets["trace"], c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Pass : Usage;
    }

    try {
        if (*descend) return cmd_descend(c);
        if (*roots) return cmd_roots(c);
        if (*shadow) return cmd_shadow(c);
        if (*symbol) return cmd_symbol(c);
        if (*branch) return cmd_branch_points(c);
        if (*trace) return cmd_trace(c);
        if (*support) return cmd_support(c);
        if (*plot) return cmd_plot(c);
        if (*targets["ode"]) return verify_ode_cmd(c);
        if (*targets["quadratic"]) return verify_quadratic_cmd(c);
        if (*targets["boutroux"]) return verify_boutroux_cmd(c);
        if (*targets["trace"]) return verify_trace_cmd(c);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return Usage;
    } catch (const ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return Usage;
    } catch (const InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return Usage;
    } catch (const AlphaOutOfRange& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return Usage;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return Numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Numerical;
    }
    return Usage;
}
