#include "btlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "btlab/distribution.hpp"

namespace btlab {

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
};

struct PanelEstimate {
    double value;
    double error;
};

template <class F>
PanelEstimate gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double dx = h * kXgk[i];
        double fs = f(c - dx) + f(c + dx);
        k15 += kWgk[i] * fs;
        if (i % 2 == 1) g7 += kWg[i / 2] * fs;
    }
    k15 *= h;
    g7 *= h;
    double err = std::abs(k15 - g7);
    // QUADPACK-style sharpening of the raw difference.
    double scaled = 200.0 * err;
    err = std::min(err, scaled * std::sqrt(scaled));
    return {k15, err};
}

std::vector<double> panel_boundaries(double a, double b, const std::vector<double>& breakpoints) {
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double x : breakpoints)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

}  // namespace

IntegralResult integrate(const RealFn& f, double a, double b, const IntegrateOptions& opt) {
    if (!(a <= b)) throw DomainError("integrate: requires a <= b");
    IntegralResult res;
    if (a == b) return res;
    const double total_width = b - a;
    const double min_width = 64.0 * 1e-16 * std::max({std::abs(a), std::abs(b), 1.0});

    std::vector<Panel> stack;
    const std::vector<double> cuts = panel_boundaries(a, b, opt.breakpoints);
    for (std::size_t i = cuts.size() - 1; i-- > 0;) stack.push_back({cuts[i], cuts[i + 1]});

    bool budget_hit = false;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        PanelEstimate e = gk15(f, p.a, p.b);
        res.evaluations += 15;
        const double width = p.b - p.a;
        const bool accept = e.error <= opt.tol * (width / total_width) || width <= min_width ||
                            res.evaluations + 30 > opt.max_evaluations;
        if (accept) {
            if (res.evaluations + 30 > opt.max_evaluations && e.error > opt.tol * (width / total_width))
                budget_hit = true;
            res.value += e.value;
            res.abs_error_estimate += e.error;
        } else {
            double mid = 0.5 * (p.a + p.b);
            stack.push_back({mid, p.b});
            stack.push_back({p.a, mid});
        }
    }
    if (budget_hit && res.abs_error_estimate > opt.tol)
        throw AccuracyError("integrate: tolerance unreachable within evaluation budget",
                            res.value, res.abs_error_estimate);
    return res;
}

IntegralResult integrate(const RealFn& f, double a, double b, double tol) {
    IntegrateOptions opt;
    opt.tol = tol;
    return integrate(f, a, b, opt);
}

IntegralResult integrate_stieltjes(const RealFn& f, const Distribution& d, double a, double b,
                                   const IntegrateOptions& opt, Endpoints endpoints) {
    if (!(a <= b)) throw DomainError("integrate_stieltjes: requires a <= b");
    IntegralResult res;
    for (const Atom& atom : d.atoms()) {
        const bool include_left = endpoints == Endpoints::closed ? atom.x >= a : atom.x > a;
        if (include_left && atom.x <= b) {
            res.value += f(atom.x) * atom.mass;
            res.evaluations += 1;
        }
    }
    if (a == b) return res;

    // Share the tolerance across segment overlaps in proportion to width.
    double covered = 0.0;
    for (const Segment& s : d.segments()) {
        double lo = std::max(s.lo(), a), hi = std::min(s.hi(), b);
        if (lo < hi) covered += hi - lo;
    }
    if (covered <= 0.0) return res;
    for (const Segment& s : d.segments()) {
        double lo = std::max(s.lo(), a), hi = std::min(s.hi(), b);
        if (!(lo < hi)) continue;
        IntegrateOptions sub = opt;
        sub.tol = opt.tol * ((hi - lo) / covered);
        IntegralResult part = integrate(
            [&](double x) { return f(x) * s.density(x); }, lo, hi, sub);
        res.value += part.value;
        res.abs_error_estimate += part.abs_error_estimate;
        res.evaluations += part.evaluations;
    }
    return res;
}

IntegralResult integrate_stieltjes(const RealFn& f, const Distribution& d, double a, double b,
                                   double tol, Endpoints endpoints) {
    IntegrateOptions opt;
    opt.tol = tol;
    return integrate_stieltjes(f, d, a, b, opt, endpoints);
}

MaximizeResult maximize(const RealFn& f, double a, double b, const MaximizeOptions& opt) {
    return detail::maximize_fn(f, a, b, opt);
}

MaximizeResult maximize(const RealFn& f, double a, double b, double tol, int seed_grid_n) {
    MaximizeOptions opt;
    opt.tol = tol;
    opt.seed_grid_n = seed_grid_n;
    return detail::maximize_fn(f, a, b, opt);
}

double find_root(const RealFn& f, double a, double b, double tol) {
    if (!(a <= b)) throw DomainError("find_root: requires a <= b");
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw BracketError("find_root: no sign change on [a,b]");
    for (int it = 0; it < 400 && b - a > tol; ++it) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if (fm == 0.0) return m;
        if (fa * fm < 0.0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace btlab
