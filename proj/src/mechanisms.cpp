#include "btlab/mechanisms.hpp"

#include <algorithm>
#include <cmath>

namespace btlab {

namespace {

double inner_tol(double tol) { return std::max(tol * 0.01, 1e-13); }

std::vector<double> points_in(const std::vector<double>& pts, double a, double b) {
    std::vector<double> out;
    for (double p : pts)
        if (p >= a && p <= b) out.push_back(p);
    return out;
}

}  // namespace

namespace detail {

MhrHint resolve_hint(const Distribution& F, MhrHint hint) {
    if (hint != MhrHint::detect) return hint;
    if (!F.has_atoms() && F.has_full_density_support() && is_mhr(F).is_mhr)
        return MhrHint::assume_mhr;
    return MhrHint::skip_check;
}

}  // namespace detail

double fb_at(const Distribution& F, double c, double tol) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("fb_at: c outside [0,1]");
    if (c == 1.0) return 0.0;
    IntegrateOptions opt;
    opt.tol = 0.5 * tol;
    opt.breakpoints = F.jump_points();
    double survival_form =
        integrate([&](double v) { return 1.0 - F.cdf(v); }, c, 1.0, opt).value;
    double direct_form =
        integrate_stieltjes([&](double v) { return v - c; }, F, c, 1.0, 0.5 * tol).value;
    if (std::abs(survival_form - direct_form) > 2.0 * tol)
        throw AccuracyError("fb_at: survival and Stieltjes forms disagree", survival_form,
                            std::abs(survival_form - direct_form));
    return survival_form;
}

double fb(const Instance& inst, double tol) {
    const double in = inner_tol(tol);
    IntegrateOptions opt;
    opt.tol = tol;
    opt.breakpoints = inst.F.jump_points();
    return integrate_stieltjes([&](double c) { return fb_at(inst.F, c, in); }, inst.G, 0.0, 1.0,
                               opt, Endpoints::closed)
        .value;
}

MaximizeResult seller_price(const Distribution& F, double c, double tol, MhrHint hint) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("seller_price: c outside [0,1]");
    auto objective = [&](double p) { return (p - c) * (1.0 - F.cdf_left(p)); };
    MaximizeOptions opt;
    opt.tol = tol;
    opt.extra_points = points_in(F.jump_points(), c, 1.0);
    MaximizeResult r = detail::maximize_fn(objective, c, 1.0, opt);
    if (detail::resolve_hint(F, hint) == MhrHint::assume_mhr) {
        // The profit curve is flat to machine precision within ~sqrt(eps) of
        // its maximizer, so the value-based argmax cannot be sharper than
        // that; the virtual-value root can. Cross-check the two routes, then
        // keep the sharp one.
        double via_phi = inverse_virtual_value(F, c, std::min(tol, 1e-12));
        if (std::abs(via_phi - r.argmax) > std::max(10.0 * tol, 1e-7))
            throw AccuracyError("seller_price: maximizer disagrees with phi^-1(c)", r.argmax,
                                std::abs(via_phi - r.argmax));
        r.argmax = via_phi;
        r.max_value = std::max(r.max_value, objective(via_phi));
    }
    return r;
}

double sprofit_at(const Distribution& F, double c, double tol) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("sprofit_at: c outside [0,1]");
    MaximizeOptions opt;
    opt.tol = std::min(tol, kPriceTol);
    opt.extra_points = points_in(F.jump_points(), c, 1.0);
    return detail::maximize_fn([&](double p) { return (p - c) * (1.0 - F.cdf(p)); }, c, 1.0, opt)
        .max_value;
}

double sprofit(const Instance& inst, double tol) {
    const double in = inner_tol(tol);
    return integrate_stieltjes([&](double c) { return sprofit_at(inst.F, c, in); }, inst.G, 0.0,
                               1.0, tol, Endpoints::closed)
        .value;
}

double sellerp_at(const Distribution& F, double c, double tol, MhrHint hint) {
    double p = seller_price(F, c, kPriceTol, hint).argmax;
    // Trade happens iff v >= p, so the atom at p (if any) is included.
    return integrate_stieltjes([&](double v) { return v - c; }, F, p, 1.0, inner_tol(tol),
                               Endpoints::closed)
        .value;
}

double sellerp(const Instance& inst, double tol) {
    const MhrHint hint = detail::resolve_hint(inst.F, MhrHint::detect);
    const double in = inner_tol(tol);
    return integrate_stieltjes([&](double c) { return sellerp_at(inst.F, c, in, hint); }, inst.G,
                               0.0, 1.0, tol, Endpoints::closed)
        .value;
}

MaximizeResult buyer_price(const Distribution& G, double v, double tol) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("buyer_price: v outside [0,1]");
    MaximizeOptions opt;
    opt.tol = tol;
    opt.extra_points = points_in(G.jump_points(), 0.0, v);
    return detail::maximize_fn([&](double p) { return (v - p) * G.cdf(p); }, 0.0, v, opt);
}

double buyerp_at(const Distribution& G, double v, double tol) {
    double p = buyer_price(G, v, kPriceTol).argmax;
    // Trade happens iff c <= p; an atom of G at 0 participates.
    return integrate_stieltjes([&](double c) { return v - c; }, G, 0.0, p, inner_tol(tol),
                               Endpoints::closed)
        .value;
}

double buyerp(const Instance& inst, double tol) {
    const double in = inner_tol(tol);
    IntegrateOptions opt;
    opt.tol = tol;
    opt.breakpoints = inst.G.jump_points();
    return integrate_stieltjes([&](double v) { return buyerp_at(inst.G, v, in); }, inst.F, 0.0,
                               1.0, opt, Endpoints::closed)
        .value;
}

double randoff(const Instance& inst, double tol) {
    return 0.5 * (sellerp(inst, tol) + buyerp(inst, tol));
}

double fixedp(const Instance& inst, double tol) {
    const double in = inner_tol(tol);
    auto gains_at = [&](double p) {
        double buyer_side =
            integrate_stieltjes([&](double v) { return v - p; }, inst.F, p, 1.0, in,
                                Endpoints::closed)
                .value;
        double seller_side =
            integrate_stieltjes([&](double c) { return p - c; }, inst.G, 0.0, p, in,
                                Endpoints::closed)
                .value;
        return inst.G.cdf(p) * buyer_side + (1.0 - inst.F.cdf_left(p)) * seller_side;
    };
    MaximizeOptions opt;
    opt.tol = std::min(tol, kPriceTol);
    opt.extra_points = inst.F.jump_points();
    for (double x : inst.G.jump_points()) opt.extra_points.push_back(x);
    return detail::maximize_fn(gains_at, 0.0, 1.0, opt).max_value;
}

double bprofit_at(const Distribution& F, double lambda, double c, double tol) {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("bprofit_at: c outside [0,1]");
    if (F.has_atoms() || !F.has_full_density_support())
        throw UnsupportedShapeError("bprofit_at: F must be atom-free with positive density");
    QuantileMap qm(F, lambda);
    const double mu_c = qm.forward(c);
    IntegrateOptions opt;
    opt.tol = inner_tol(tol);
    // The integrand kinks where s or mu^-1(s) crosses a segment boundary.
    for (double b : F.jump_points()) {
        opt.breakpoints.push_back(b);
        opt.breakpoints.push_back(qm.forward(b));
    }
    return integrate_stieltjes([&](double s) { return s - qm.inverse(s); }, F, mu_c, 1.0, opt)
        .value;
}

double bprofit_lb(const Instance& inst, double lambda, double tol) {
    if (inst.F.has_atoms() || !inst.F.has_full_density_support())
        throw UnsupportedShapeError("bprofit_lb: F must be atom-free with positive density");
    QuantileMap qm(inst.F, lambda);
    const double in = inner_tol(tol);
    IntegrateOptions opt;
    opt.tol = tol;
    for (double b : inst.F.jump_points()) {
        opt.breakpoints.push_back(b);
        // mu(c) crosses the boundary b at c = mu^-1(b).
        if (b >= qm.mu0()) opt.breakpoints.push_back(qm.inverse(b));
    }
    return integrate_stieltjes([&](double c) { return bprofit_at(inst.F, lambda, c, in); },
                               inst.G, 0.0, 1.0, opt, Endpoints::closed)
        .value;
}

double bprofit_direct(const Instance& inst, double tol) {
    IntegrateOptions opt;
    opt.tol = tol;
    opt.breakpoints = inst.G.jump_points();
    return integrate_stieltjes(
               [&](double v) { return buyer_price(inst.G, v, kPriceTol).max_value; }, inst.F,
               0.0, 1.0, opt, Endpoints::closed)
        .value;
}

MechanismReport make_report(const Instance& inst, double tol, double lambda) {
    MechanismReport r;
    r.fb = fb(inst, tol);
    r.fixedp = fixedp(inst, tol);
    r.sellerp = sellerp(inst, tol);
    r.buyerp = buyerp(inst, tol);
    r.randoff = 0.5 * (r.sellerp + r.buyerp);
    r.sprofit_lb = sprofit(inst, tol);
    r.lambda = lambda;
    try {
        r.bprofit_lb = bprofit_lb(inst, lambda, tol);
    } catch (const UnsupportedShapeError&) {
        r.bprofit_lb = std::nullopt;
    }
    if (r.fb > 0.0) {
        r.ratio_randoff = r.randoff / r.fb;
        r.ratio_sellerp = r.sellerp / r.fb;
        r.ratio_buyerp = r.buyerp / r.fb;
    }
    return r;
}

}  // namespace btlab
