#include "btlab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "btlab/quadrature.hpp"

namespace btlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTol = 1e-9;      // accepted drift of total mass from 1
constexpr double kGeomTol = 1e-12;     // coordinate comparisons

double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

double poly_deriv_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) v = v * x + c[i] * static_cast<double>(i);
    return v;
}

}  // namespace

// Segment --------------------------------------------------------------------

std::string to_string(SegmentKind kind) {
    switch (kind) {
        case SegmentKind::uniform_density: return "uniform-density";
        case SegmentKind::exponential_tail: return "exponential-tail";
        case SegmentKind::quadratic_cdf: return "quadratic-cdf";
        case SegmentKind::custom_polynomial_cdf: return "custom-polynomial-cdf";
    }
    throw Error("unknown segment kind");
}

SegmentKind segment_kind_from_string(const std::string& name) {
    if (name == "uniform-density") return SegmentKind::uniform_density;
    if (name == "exponential-tail") return SegmentKind::exponential_tail;
    if (name == "quadratic-cdf") return SegmentKind::quadratic_cdf;
    if (name == "custom-polynomial-cdf") return SegmentKind::custom_polynomial_cdf;
    throw ConstructionError("unknown segment kind: " + name);
}

Segment::Segment(SegmentKind kind, double lo, double hi, std::vector<double> params)
    : kind_(kind), lo_(lo), hi_(hi), params_(std::move(params)), mass_(0.0) {
    validate();
    mass_ = cdf_increment(hi_);
    if (!(mass_ > 0.0) || !std::isfinite(mass_))
        throw ConstructionError("segment has non-positive or non-finite mass");
}

Segment Segment::uniform_density(double lo, double hi, double density) {
    return Segment(SegmentKind::uniform_density, lo, hi, {density});
}

Segment Segment::exponential_tail(double lo, double hi, double alpha, double rate) {
    return Segment(SegmentKind::exponential_tail, lo, hi, {alpha, rate});
}

Segment Segment::quadratic_cdf(double lo, double hi, double c0, double c1, double c2) {
    return Segment(SegmentKind::quadratic_cdf, lo, hi, {c0, c1, c2});
}

Segment Segment::polynomial_cdf(double lo, double hi, std::vector<double> coeffs) {
    return Segment(SegmentKind::custom_polynomial_cdf, lo, hi, std::move(coeffs));
}

Segment Segment::make(SegmentKind kind, double lo, double hi, std::vector<double> params) {
    return Segment(kind, lo, hi, std::move(params));
}

void Segment::validate() const {
    if (!(lo_ < hi_)) throw ConstructionError("segment requires lo < hi");
    if (!std::isfinite(lo_)) throw ConstructionError("segment lo must be finite");
    const bool unbounded = std::isinf(hi_);
    switch (kind_) {
        case SegmentKind::uniform_density:
            if (params_.size() != 1) throw ConstructionError("uniform-density expects 1 parameter");
            if (!(params_[0] > 0.0)) throw ConstructionError("uniform-density requires density > 0");
            if (unbounded) throw ConstructionError("uniform-density cannot be unbounded");
            break;
        case SegmentKind::exponential_tail: {
            if (params_.size() != 2) throw ConstructionError("exponential-tail expects 2 parameters");
            const double alpha = params_[0], rate = params_[1];
            if (!(alpha > 0.0)) throw ConstructionError("exponential-tail requires alpha > 0");
            if (rate == 0.0 || !std::isfinite(rate))
                throw ConstructionError("exponential-tail requires nonzero finite rate");
            if (unbounded && rate < 0.0)
                throw ConstructionError("unbounded exponential-tail requires rate > 0");
            break;
        }
        case SegmentKind::quadratic_cdf:
        case SegmentKind::custom_polynomial_cdf: {
            const std::size_t want = (kind_ == SegmentKind::quadratic_cdf) ? 3 : params_.size();
            if (params_.size() < 2 || params_.size() != want)
                throw ConstructionError("polynomial segment has wrong parameter count");
            if (unbounded) throw ConstructionError("polynomial segment cannot be unbounded");
            // Positive density across the piece, probed on a grid plus endpoints.
            const int n = 129;
            for (int i = 0; i <= n; ++i) {
                double x = lo_ + (hi_ - lo_) * static_cast<double>(i) / n;
                if (!(poly_deriv_eval(params_, x) > 0.0))
                    throw ConstructionError("polynomial segment density must be positive on [lo,hi]");
            }
            break;
        }
    }
}

double Segment::cdf_increment(double x) const {
    if (x <= lo_) return 0.0;
    if (x > hi_) x = hi_;
    switch (kind_) {
        case SegmentKind::uniform_density:
            return params_[0] * (x - lo_);
        case SegmentKind::exponential_tail: {
            const double alpha = params_[0], rate = params_[1];
            if (std::isinf(x)) return alpha / rate * std::exp(-rate * lo_);
            return alpha / rate * (std::exp(-rate * lo_) - std::exp(-rate * x));
        }
        case SegmentKind::quadratic_cdf:
        case SegmentKind::custom_polynomial_cdf:
            return poly_eval(params_, x) - poly_eval(params_, lo_);
    }
    throw Error("unreachable");
}

double Segment::density(double x) const {
    switch (kind_) {
        case SegmentKind::uniform_density:
            return params_[0];
        case SegmentKind::exponential_tail:
            return params_[0] * std::exp(-params_[1] * x);
        case SegmentKind::quadratic_cdf:
        case SegmentKind::custom_polynomial_cdf:
            return poly_deriv_eval(params_, x);
    }
    throw Error("unreachable");
}

double Segment::quantile_increment(double q) const {
    if (q <= 0.0) return lo_;
    if (q >= mass_) return hi_;
    switch (kind_) {
        case SegmentKind::uniform_density:
            return lo_ + q / params_[0];
        case SegmentKind::exponential_tail: {
            const double alpha = params_[0], rate = params_[1];
            double t = std::exp(-rate * lo_) - q * rate / alpha;
            return -std::log(t) / rate;
        }
        case SegmentKind::quadratic_cdf:
        case SegmentKind::custom_polynomial_cdf: {
            // Newton with a bisection bracket; increments are strictly
            // increasing so the bracket never degenerates.
            double xlo = lo_, xhi = hi_;
            double x = 0.5 * (xlo + xhi);
            for (int it = 0; it < 100; ++it) {
                double g = cdf_increment(x) - q;
                if (g > 0.0)
                    xhi = x;
                else
                    xlo = x;
                double d = density(x);
                double step = g / d;
                double next = x - step;
                if (!(next > xlo && next < xhi)) next = 0.5 * (xlo + xhi);
                if (std::abs(next - x) < 1e-16 * std::max(1.0, std::abs(x))) return next;
                x = next;
            }
            return x;
        }
    }
    throw Error("unreachable");
}

Segment Segment::restricted(double new_lo, double new_hi) const {
    if (!(new_lo >= lo_ - kGeomTol && new_hi <= hi_ + kGeomTol && new_lo < new_hi))
        throw ConstructionError("segment restriction outside [lo,hi]");
    return Segment(kind_, std::max(new_lo, lo_), std::min(new_hi, hi_), params_);
}

Segment Segment::reversed() const {
    if (std::isinf(hi_)) throw ConstructionError("cannot reverse an unbounded segment");
    const double rlo = 1.0 - hi_, rhi = 1.0 - lo_;
    switch (kind_) {
        case SegmentKind::uniform_density:
            return Segment(kind_, rlo, rhi, params_);
        case SegmentKind::exponential_tail: {
            // density(y) = alpha*exp(-rate*(1-y)) = alpha*exp(-rate) * exp(rate*y)
            const double alpha = params_[0], rate = params_[1];
            return Segment(kind_, rlo, rhi, {alpha * std::exp(-rate), -rate});
        }
        case SegmentKind::quadratic_cdf:
        case SegmentKind::custom_polynomial_cdf: {
            // Q(y) = -P(1-y): expand (1-y)^k binomially.
            const std::size_t n = params_.size();
            std::vector<double> out(n, 0.0);
            std::vector<double> binom(n, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                // coefficients of (1-y)^k
                binom[0] = 1.0;
                for (std::size_t j = 1; j <= k; ++j)
                    binom[j] = binom[j - 1] * static_cast<double>(k - j + 1) / static_cast<double>(j);
                double sign = 1.0;
                for (std::size_t j = 0; j <= k; ++j) {
                    out[j] -= params_[k] * binom[j] * sign;
                    sign = -sign;
                }
            }
            return Segment(kind_, rlo, rhi, std::move(out));
        }
    }
    throw Error("unreachable");
}

Segment Segment::scaled(double s) const {
    if (!(s > 0.0)) throw ConstructionError("segment scale must be positive");
    std::vector<double> p = params_;
    switch (kind_) {
        case SegmentKind::uniform_density:
        case SegmentKind::exponential_tail:
            p[0] *= s;
            break;
        case SegmentKind::quadratic_cdf:
        case SegmentKind::custom_polynomial_cdf:
            for (double& c : p) c *= s;
            break;
    }
    return Segment(kind_, lo_, hi_, std::move(p));
}

// Distribution ----------------------------------------------------------------

Distribution::Distribution(std::vector<Atom> atoms, std::vector<Segment> segments)
    : atoms_(std::move(atoms)), segments_(std::move(segments)) {
    for (const Atom& a : atoms_) {
        if (!(a.x >= 0.0 && a.x <= 1.0)) throw ConstructionError("atom location outside [0,1]");
        if (!(a.mass > 0.0 && a.mass <= 1.0 + kMassTol))
            throw ConstructionError("atom mass outside (0,1]");
    }
    for (const Segment& s : segments_) {
        if (!(s.lo() >= -kGeomTol && s.hi() <= 1.0 + kGeomTol) || std::isinf(s.hi()))
            throw ConstructionError("segment outside [0,1]");
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
    // Merge coincident atoms.
    std::vector<Atom> merged;
    for (const Atom& a : atoms_) {
        if (!merged.empty() && std::abs(merged.back().x - a.x) <= kGeomTol)
            merged.back().mass += a.mass;
        else
            merged.push_back(a);
    }
    atoms_ = std::move(merged);
    std::sort(segments_.begin(), segments_.end(),
              [](const Segment& a, const Segment& b) { return a.lo() < b.lo(); });
    for (std::size_t i = 1; i < segments_.size(); ++i) {
        if (segments_[i].lo() < segments_[i - 1].hi() - kGeomTol)
            throw ConstructionError("segments overlap");
    }
    // Split segments at interior atoms so atoms sit only at jump points.
    for (const Atom& a : atoms_) {
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            const Segment& s = segments_[i];
            if (a.x > s.lo() + kGeomTol && a.x < s.hi() - kGeomTol) {
                Segment left = s.restricted(s.lo(), a.x);
                Segment right = s.restricted(a.x, s.hi());
                segments_[i] = std::move(left);
                segments_.insert(segments_.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                 std::move(right));
                break;
            }
        }
    }
    double total = 0.0;
    for (const Atom& a : atoms_) total += a.mass;
    for (const Segment& s : segments_) total += s.mass();
    if (std::abs(total - 1.0) > kMassTol)
        throw ConstructionError("total mass must be 1 (got " + std::to_string(total) + ")");
    if (total != 1.0) {
        // Remove rounding drift so cdf(1) == 1 to machine precision.
        const double s = 1.0 / total;
        for (Atom& a : atoms_) a.mass *= s;
        std::vector<Segment> rescaled;
        rescaled.reserve(segments_.size());
        for (const Segment& seg : segments_) rescaled.push_back(seg.scaled(s));
        segments_ = std::move(rescaled);
    }
}

double Distribution::cdf(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("cdf: x outside [0,1]");
    double v = 0.0;
    for (const Atom& a : atoms_)
        if (a.x <= x) v += a.mass;
    for (const Segment& s : segments_) {
        if (x <= s.lo()) break;
        v += s.cdf_increment(x);
    }
    return std::min(v, 1.0);
}

double Distribution::cdf_left(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("cdf_left: x outside [0,1]");
    double v = 0.0;
    for (const Atom& a : atoms_)
        if (a.x < x) v += a.mass;
    for (const Segment& s : segments_) {
        if (x <= s.lo()) break;
        v += s.cdf_increment(x);
    }
    return std::min(v, 1.0);
}

double Distribution::density(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("density: x outside [0,1]");
    for (const Atom& a : atoms_)
        if (std::abs(a.x - x) <= kGeomTol) throw NoDensityError("density requested at an atom");
    // Right-continuous choice at shared boundaries.
    for (const Segment& s : segments_)
        if (x >= s.lo() && x < s.hi()) return s.density(x);
    if (!segments_.empty() && x == segments_.back().hi()) return segments_.back().density(x);
    throw NoDensityError("x outside all segments");
}

double Distribution::quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile: q outside [0,1]");
    if (q <= 0.0) return support_min();
    // Merged walk over atoms and segments in position order; an atom tied
    // with a segment start is consumed first (the jump precedes the flow).
    double cum = 0.0;
    std::size_t ia = 0, is = 0;
    while (ia < atoms_.size() || is < segments_.size()) {
        const bool take_atom =
            ia < atoms_.size() &&
            (is >= segments_.size() || atoms_[ia].x <= segments_[is].lo() + kGeomTol);
        if (take_atom) {
            const Atom& a = atoms_[ia++];
            if (q <= cum + a.mass) return a.x;
            cum += a.mass;
        } else {
            const Segment& s = segments_[is++];
            if (q <= cum + s.mass()) return s.quantile_increment(q - cum);
            cum += s.mass();
        }
    }
    return support_max();  // q within rounding of 1
}

bool Distribution::has_full_density_support() const {
    if (!atoms_.empty() || segments_.empty()) return false;
    if (segments_.front().lo() > kGeomTol) return false;
    if (segments_.back().hi() < 1.0 - kGeomTol) return false;
    for (std::size_t i = 1; i < segments_.size(); ++i)
        if (segments_[i].lo() > segments_[i - 1].hi() + kGeomTol) return false;
    return true;
}

double Distribution::support_min() const {
    double m = kInf;
    if (!atoms_.empty()) m = atoms_.front().x;
    if (!segments_.empty()) m = std::min(m, segments_.front().lo());
    return std::isinf(m) ? 0.0 : m;
}

double Distribution::support_max() const {
    double m = -kInf;
    if (!atoms_.empty()) m = atoms_.back().x;
    if (!segments_.empty()) m = std::max(m, segments_.back().hi());
    return std::isinf(m) ? 1.0 : m;
}

std::vector<double> Distribution::jump_points() const {
    std::vector<double> pts;
    for (const Atom& a : atoms_) pts.push_back(a.x);
    for (const Segment& s : segments_) {
        pts.push_back(s.lo());
        pts.push_back(s.hi());
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Derived objects -------------------------------------------------------------

double hazard_rate(const Distribution& d, double x) {
    const double surv = 1.0 - d.cdf(x);
    if (surv <= 0.0) throw SingularityError("hazard_rate: 1 - F(x) = 0");
    return d.density(x) / surv;
}

double cumulative_hazard(const Distribution& d, double x) {
    const double surv = 1.0 - d.cdf(x);
    if (surv <= 0.0) throw SingularityError("cumulative_hazard: 1 - F(x) = 0");
    return -std::log(surv);
}

double virtual_value(const Distribution& d, double x) {
    const double surv = 1.0 - d.cdf(x);
    if (surv <= 0.0) throw SingularityError("virtual_value: 1 - F(x) = 0");
    return x - surv / d.density(x);
}

namespace {

// phi extended continuously to x = 1 (where it equals 1 when f(1) > 0).
double virtual_value_safe(const Distribution& d, double x) {
    const double surv = 1.0 - d.cdf(x);
    if (surv <= 1e-300) return x;
    return x - surv / d.density(x);
}

MhrResult hazard_monotonicity_on_grid(const Distribution& d, int grid_n, double tol) {
    const int n = std::max(grid_n, 16);
    auto h = [&](double x) { return hazard_rate(d, x); };
    auto violates = [&](double h1, double h2) {
        return h2 < h1 - tol * std::max(1.0, std::abs(h1));
    };
    double prev_x = 0.5 / n;
    double prev_h = h(prev_x);
    for (int i = 1; i < n; ++i) {
        const double x = (i + 0.5) / n;
        const double hx = h(x);
        if (violates(prev_h, hx)) {
            // Refine: keep only violations that survive a finer local grid.
            const int m = 128;
            double rx = prev_x, rh = prev_h;
            for (int j = 1; j <= m; ++j) {
                double xx = prev_x + (x - prev_x) * static_cast<double>(j) / m;
                double hh = h(xx);
                if (violates(rh, hh)) return {false, rx, xx};
                if (hh > rh) {
                    rh = hh;
                    rx = xx;
                }
            }
        }
        if (hx > prev_h) {
            prev_h = hx;
            prev_x = x;
        }
    }
    return {true, 0.0, 0.0};
}

}  // namespace

MhrResult is_mhr(const Distribution& d, int grid_n, double tol) {
    if (d.has_atoms()) throw UnsupportedShapeError("is_mhr: atoms present");
    if (!d.has_full_density_support())
        throw UnsupportedShapeError("is_mhr: requires positive density on [0,1)");
    return hazard_monotonicity_on_grid(d, grid_n, tol);
}

MhrResult is_mhr_allowing_terminal_atom(const Distribution& d, int grid_n, double tol) {
    for (const Atom& a : d.atoms())
        if (a.x < 1.0 - kGeomTol)
            throw UnsupportedShapeError("is_mhr: non-terminal atom present");
    if (d.segments().empty() || d.segments().front().lo() > kGeomTol ||
        d.segments().back().hi() < 1.0 - kGeomTol)
        throw UnsupportedShapeError("is_mhr: requires positive density on [0,1)");
    for (std::size_t i = 1; i < d.segments().size(); ++i)
        if (d.segments()[i].lo() > d.segments()[i - 1].hi() + kGeomTol)
            throw UnsupportedShapeError("is_mhr: requires positive density on [0,1)");
    return hazard_monotonicity_on_grid(d, grid_n, tol);
}

double inverse_virtual_value(const Distribution& d, double c, double tol) {
    MhrResult mhr = is_mhr(d, 256, 1e-9);
    if (!mhr.is_mhr) throw UnsupportedShapeError("inverse_virtual_value: distribution is not MHR");
    const double phi0 = virtual_value_safe(d, 0.0);
    if (c < phi0 - tol || c > 1.0 + tol)
        throw DomainError("inverse_virtual_value: c outside [phi(0), 1]");
    if (c >= 1.0) return 1.0;
    if (c <= phi0) return 0.0;
    return find_root([&](double x) { return virtual_value_safe(d, x) - c; }, 0.0, 1.0, tol);
}

// QuantileMap -----------------------------------------------------------------

QuantileMap::QuantileMap(Distribution base, double lambda)
    : base_(std::move(base)), lambda_(lambda), mu0_(0.0) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("QuantileMap: lambda outside (0,1)");
    if (!base_.has_full_density_support())
        throw UnsupportedShapeError("QuantileMap: base must be atom-free with density on [0,1]");
    mu0_ = base_.quantile(1.0 - lambda_);
}

double QuantileMap::forward(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("quantile_map: x outside [0,1]");
    double q = 1.0 - lambda_ + lambda_ * base_.cdf(x);
    return base_.quantile(std::min(q, 1.0));
}

double QuantileMap::inverse(double s) const {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("quantile_map inverse: s outside [0,1]");
    double q = (base_.cdf(s) - (1.0 - lambda_)) / lambda_;
    if (q < -1e-9) throw DomainError("quantile_map inverse: s below mu(0)");
    return base_.quantile(std::clamp(q, 0.0, 1.0));
}

// Named constructions ---------------------------------------------------------

Distribution uniform_distribution() {
    return Distribution({}, {Segment::uniform_density(0.0, 1.0, 1.0)});
}

Distribution point_mass(double x) {
    return Distribution({Atom{x, 1.0}}, {});
}

Distribution atom_uniform_mix(double atom_x, double atom_mass) {
    if (!(atom_mass > 0.0 && atom_mass <= 1.0))
        throw ConstructionError("atom_uniform_mix: atom mass outside (0,1]");
    if (atom_mass >= 1.0 - 1e-12) return point_mass(atom_x);
    return Distribution({Atom{atom_x, atom_mass}},
                        {Segment::uniform_density(0.0, 1.0, 1.0 - atom_mass)});
}

Distribution piecewise_linear_cdf(const std::vector<double>& weights) {
    if (weights.empty()) throw ConstructionError("piecewise_linear_cdf: no weights");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw ConstructionError("piecewise_linear_cdf: weights must be positive");
        sum += w;
    }
    const auto k = static_cast<double>(weights.size());
    std::vector<Segment> segs;
    segs.reserve(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        double lo = static_cast<double>(i) / k;
        double hi = static_cast<double>(i + 1) / k;
        segs.push_back(Segment::uniform_density(lo, hi, weights[i] / sum * k));
    }
    return Distribution({}, std::move(segs));
}

Distribution truncated_exponential(double rate) {
    if (!(rate > 0.0)) throw ConstructionError("truncated_exponential: rate must be positive");
    RawLaw law;
    law.segments.push_back(Segment::exponential_tail(0.0, kInf, rate, rate));
    return truncate(law);
}

Distribution hard_instance_F(double delta) {
    if (!(delta > 0.0 && delta < 0.5))
        throw DomainError("hard_instance_F: delta outside (0, 1/2)");
    const double e = std::exp(-1.0 + delta);
    const double a = (1.0 - delta) / (delta * delta);
    const double b = (1.0 - 3.0 * delta + delta * delta) / (delta * delta);
    // 1 - F(x) = e*(1-x)*(a*x - b) on [1-delta, 1], expanded to CDF coefficients.
    Segment exp_part = Segment::exponential_tail(0.0, 1.0 - delta, 1.0, 1.0);
    Segment quad_part =
        Segment::quadratic_cdf(1.0 - delta, 1.0, 1.0 + e * b, -e * (a + b), e * a);
    return Distribution({}, {std::move(exp_part), std::move(quad_part)});
}

Distribution reverse(const Distribution& d) {
    std::vector<Atom> atoms;
    atoms.reserve(d.atoms().size());
    for (const Atom& a : d.atoms()) atoms.push_back(Atom{1.0 - a.x, a.mass});
    std::vector<Segment> segs;
    segs.reserve(d.segments().size());
    for (const Segment& s : d.segments()) segs.push_back(s.reversed());
    return Distribution(std::move(atoms), std::move(segs));
}

Distribution truncate(const RawLaw& law) {
    double below = 0.0, above = 0.0;
    std::vector<Atom> atoms;
    std::vector<Segment> segs;
    for (const Atom& a : law.atoms) {
        if (a.x < 0.0)
            below += a.mass;
        else if (a.x > 1.0)
            above += a.mass;
        else
            atoms.push_back(a);
    }
    for (const Segment& s : law.segments) {
        below += s.cdf_increment(std::min(0.0, s.hi()));
        above += s.mass() - s.cdf_increment(std::min(1.0, s.hi()));
        const double lo = std::max(s.lo(), 0.0);
        const double hi = std::min(s.hi(), 1.0);
        if (lo < hi) {
            Segment clipped = s.restricted(lo, hi);
            if (clipped.mass() > 1e-15) segs.push_back(std::move(clipped));
        }
    }
    if (below > 0.0) atoms.push_back(Atom{0.0, below});
    if (above > 0.0) atoms.push_back(Atom{1.0, above});
    return Distribution(std::move(atoms), std::move(segs));
}

// String ids and JSON ---------------------------------------------------------

namespace {

double parse_real(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConstructionError("cannot parse " + what + " from '" + s + "'");
    }
}

}  // namespace

Distribution distribution_from_id(const std::string& id) {
    if (id == "uniform") return uniform_distribution();
    if (id.rfind("atom:", 0) == 0) return point_mass(parse_real(id.substr(5), "atom location"));
    if (id.rfind("hard-instance:delta=", 0) == 0)
        return hard_instance_F(parse_real(id.substr(20), "delta"));
    if (id.rfind("exp-trunc:rate=", 0) == 0)
        return truncated_exponential(parse_real(id.substr(15), "rate"));
    if (id.rfind("reverse:", 0) == 0) return reverse(distribution_from_id(id.substr(8)));
    throw ConstructionError("unknown distribution id: '" + id + "'");
}

nlohmann::json to_json(const Distribution& d) {
    nlohmann::json j;
    j["atoms"] = nlohmann::json::array();
    for (const Atom& a : d.atoms()) j["atoms"].push_back({{"x", a.x}, {"mass", a.mass}});
    j["segments"] = nlohmann::json::array();
    for (const Segment& s : d.segments())
        j["segments"].push_back({{"kind", to_string(s.kind())},
                                 {"lo", s.lo()},
                                 {"hi", s.hi()},
                                 {"params", s.params()}});
    return j;
}

Distribution distribution_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConstructionError("distribution JSON must be an object");
    for (const auto& item : j.items())
        if (item.key() != "atoms" && item.key() != "segments")
            throw ConstructionError("unknown key in distribution JSON: '" + item.key() + "'");
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        for (const auto& ja : j.at("atoms")) {
            for (const auto& item : ja.items())
                if (item.key() != "x" && item.key() != "mass")
                    throw ConstructionError("unknown key in atom JSON: '" + item.key() + "'");
            atoms.push_back(Atom{ja.at("x").get<double>(), ja.at("mass").get<double>()});
        }
    }
    std::vector<Segment> segs;
    if (j.contains("segments")) {
        for (const auto& js : j.at("segments")) {
            for (const auto& item : js.items())
                if (item.key() != "kind" && item.key() != "lo" && item.key() != "hi" &&
                    item.key() != "params")
                    throw ConstructionError("unknown key in segment JSON: '" + item.key() + "'");
            segs.push_back(Segment::make(segment_kind_from_string(js.at("kind").get<std::string>()),
                                         js.at("lo").get<double>(), js.at("hi").get<double>(),
                                         js.at("params").get<std::vector<double>>()));
        }
    }
    return Distribution(std::move(atoms), std::move(segs));
}

}  // namespace btlab
