#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "btlab/errors.hpp"

namespace btlab {

class Distribution;

struct IntegralResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

struct MaximizeResult {
    double argmax = 0.0;
    double max_value = 0.0;
    double tol = 0.0;
};

struct IntegrateOptions {
    double tol = 1e-10;
    std::vector<double> breakpoints;  // forced panel boundaries inside (a,b)
    long max_evaluations = 4'000'000;
};

using RealFn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b].
/// Panels are split at the supplied breakpoints first, then bisected until
/// the summed error estimate fits the tolerance. Throws AccuracyError with
/// the best estimate when the evaluation budget runs out.
IntegralResult integrate(const RealFn& f, double a, double b, const IntegrateOptions& opt);
IntegralResult integrate(const RealFn& f, double a, double b, double tol);

/// Endpoint convention for Lebesgue-Stieltjes integrals over [a,b]:
/// atoms at a are excluded by default (left_open, i.e. (a,b]) and included
/// with `closed`. Atoms at b are always included.
enum class Endpoints { left_open, closed };

/// Integral of f against the measure of d restricted to the interval:
/// atom contributions plus density-weighted panel integrals.
IntegralResult integrate_stieltjes(const RealFn& f, const Distribution& d, double a, double b,
                                   const IntegrateOptions& opt,
                                   Endpoints endpoints = Endpoints::left_open);
IntegralResult integrate_stieltjes(const RealFn& f, const Distribution& d, double a, double b,
                                   double tol, Endpoints endpoints = Endpoints::left_open);

struct MaximizeOptions {
    double tol = 1e-10;
    int seed_grid_n = 512;
    std::vector<double> extra_points;  // candidate maximizers (atoms, kinks)
};

/// Grid seed + golden-section refinement, ties broken toward the smallest
/// argmax. The returned value is never worse than the best seed-grid sample.
MaximizeResult maximize(const RealFn& f, double a, double b, const MaximizeOptions& opt);
MaximizeResult maximize(const RealFn& f, double a, double b, double tol, int seed_grid_n = 512);

/// Bisection root of a sign-changing f on [a,b]; final bracket width <= tol.
double find_root(const RealFn& f, double a, double b, double tol);

namespace detail {

// Templated core of maximize() so hot loops (per-sample price solves in the
// Monte Carlo estimators) avoid std::function indirection.
template <class F>
MaximizeResult maximize_fn(F&& f, double a, double b, const MaximizeOptions& opt) {
    if (!(a <= b)) throw DomainError("maximize: requires a <= b");
    const double tol = opt.tol;
    if (b - a <= tol || a == b) {
        double fa = f(a);
        if (b > a) {
            double fb = f(b);
            if (fb > fa) return {b, fb, tol};
        }
        return {a, fa, tol};
    }

    const int n = std::max(2, opt.seed_grid_n);
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n) + opt.extra_points.size());
    for (int i = 0; i < n; ++i)
        xs.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    for (double e : opt.extra_points)
        if (e >= a && e <= b) xs.push_back(e);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    double best_x = xs[0];
    double best_f = f(xs[0]);
    std::size_t best_i = 0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        double fi = f(xs[i]);
        if (fi > best_f) {
            best_f = fi;
            best_x = xs[i];
            best_i = i;
        }
    }

    double lo = (best_i == 0) ? a : xs[best_i - 1];
    double hi = (best_i + 1 == xs.size()) ? b : xs[best_i + 1];

    // Golden-section with running best; >= comparisons bias toward the left.
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    auto consider = [&](double x, double fx) {
        if (fx > best_f || (fx == best_f && x < best_x)) {
            best_f = fx;
            best_x = x;
        }
    };
    consider(x1, f1);
    consider(x2, f2);
    for (int it = 0; it < 300 && hi - lo > tol; ++it) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
            consider(x1, f1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
            consider(x2, f2);
        }
    }
    return {best_x, best_f, tol};
}

}  // namespace detail

}  // namespace btlab
