#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "btlab/errors.hpp"

#include <nlohmann/json_fwd.hpp>

namespace btlab {

struct Atom {
    double x = 0.0;
    double mass = 0.0;
};

enum class SegmentKind {
    uniform_density,
    exponential_tail,
    quadratic_cdf,
    custom_polynomial_cdf,
};

std::string to_string(SegmentKind kind);
SegmentKind segment_kind_from_string(const std::string& name);

/// One absolutely continuous piece of a CDF with a closed-form law on
/// [lo, hi]. The piece is described by its mass increment from lo, so pieces
/// compose irrespective of what lies to their left.
///
/// Parameter conventions:
///   uniform-density        params = {d}          density d on [lo,hi]
///   exponential-tail       params = {alpha,rate} density alpha*exp(-rate*x)
///   quadratic-cdf          params = {c0,c1,c2}   shape of the CDF as a
///   custom-polynomial-cdf  params = {c0..cn}     polynomial in x; only the
///                                                increment P(x)-P(lo) is used
class Segment {
  public:
    static Segment uniform_density(double lo, double hi, double density);
    // rate > 0 decays, rate < 0 grows; hi may be +infinity when rate > 0.
    static Segment exponential_tail(double lo, double hi, double alpha, double rate);
    static Segment quadratic_cdf(double lo, double hi, double c0, double c1, double c2);
    static Segment polynomial_cdf(double lo, double hi, std::vector<double> coeffs);
    static Segment make(SegmentKind kind, double lo, double hi, std::vector<double> params);

    SegmentKind kind() const { return kind_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& params() const { return params_; }
    double mass() const { return mass_; }

    /// Mass of (lo, x]; 0 at lo, mass() at hi.
    double cdf_increment(double x) const;
    double density(double x) const;
    /// Inverse of cdf_increment on [0, mass()].
    double quantile_increment(double q) const;

    /// Same law restricted to [new_lo, new_hi] within [lo, hi].
    Segment restricted(double new_lo, double new_hi) const;
    /// The law of 1 - X on this piece, supported on [1-hi, 1-lo].
    Segment reversed() const;
    /// All mass scaled by s (s > 0).
    Segment scaled(double s) const;

  private:
    Segment(SegmentKind kind, double lo, double hi, std::vector<double> params);
    void validate() const;

    SegmentKind kind_;
    double lo_;
    double hi_;
    std::vector<double> params_;
    double mass_;
};

/// A probability law on [0,1] in mixed form: point masses plus ordered
/// absolutely continuous segments, total mass 1. Immutable after
/// construction; all evaluations are pure and safe to share across threads.
class Distribution {
  public:
    Distribution(std::vector<Atom> atoms, std::vector<Segment> segments);

    /// Right-continuous F(x) for x in [0,1].
    double cdf(double x) const;
    /// Left limit F(x-).
    double cdf_left(double x) const;
    /// Density of the absolutely continuous part; NoDensityError at atoms
    /// and outside the segments.
    double density(double x) const;
    /// Generalized inverse inf{x : F(x) >= q} for q in [0,1].
    double quantile(double q) const;

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<Segment>& segments() const { return segments_; }
    bool has_atoms() const { return !atoms_.empty(); }
    /// Segments are contiguous and span [0,1] (the shape assumed by the
    /// quantile map and the hazard machinery).
    bool has_full_density_support() const;
    double support_min() const;
    double support_max() const;

    /// Atom locations and segment endpoints: the candidate kink/jump points
    /// for integrators and price maximizers.
    std::vector<double> jump_points() const;

  private:
    std::vector<Atom> atoms_;
    std::vector<Segment> segments_;
};

/// h(x) = f(x) / (1 - F(x)).
double hazard_rate(const Distribution& d, double x);
/// H(x) = -ln(1 - F(x)).
double cumulative_hazard(const Distribution& d, double x);
/// phi(x) = x - (1 - F(x)) / f(x).
double virtual_value(const Distribution& d, double x);
/// Inverse of phi on [phi(0), 1] by bracketed root-finding; requires a
/// monotone-hazard-rate distribution.
double inverse_virtual_value(const Distribution& d, double c, double tol);

struct MhrResult {
    bool is_mhr = false;
    // Violating pair (hazard decreases from witness_lo to witness_hi).
    double witness_lo = std::numeric_limits<double>::quiet_NaN();
    double witness_hi = std::numeric_limits<double>::quiet_NaN();
    explicit operator bool() const { return is_mhr; }
};

/// Grid test that the hazard rate is nondecreasing on [0,1). Candidate
/// violations are confirmed by local refinement before being reported.
MhrResult is_mhr(const Distribution& d, int grid_n = 4096, double tol = 1e-9);

/// is_mhr for the density part of a law that may carry a single terminal
/// atom at 1 (the shape produced by truncating an MHR law on [0,inf)).
MhrResult is_mhr_allowing_terminal_atom(const Distribution& d, int grid_n = 4096,
                                        double tol = 1e-9);

/// mu(x) = Finv(1 - lambda + lambda*F(x)) for an atom-free F with positive
/// density on [0,1]; strictly increasing with mu(1) = 1.
class QuantileMap {
  public:
    QuantileMap(Distribution base, double lambda);

    double forward(double x) const;
    /// Inverse on [mu(0), 1]; DomainError below mu(0).
    double inverse(double s) const;
    double lambda() const { return lambda_; }
    double mu0() const { return mu0_; }
    const Distribution& base() const { return base_; }

  private:
    Distribution base_;
    double lambda_;
    double mu0_;
};

// Named constructions ------------------------------------------------------

Distribution uniform_distribution();
Distribution point_mass(double x);
/// Mixture: atom of the given mass at atom_x plus a uniform density carrying
/// the remaining mass on [0,1]. atom_mass = 1 degenerates to a point mass.
Distribution atom_uniform_mix(double atom_x, double atom_mass);
/// CDF piecewise linear on equal-width cells, cell densities proportional
/// to the (positive) weights.
Distribution piecewise_linear_cdf(const std::vector<double>& weights);
/// Exp(rate) truncated to [0,1]: density rate*exp(-rate*x) plus an atom of
/// mass exp(-rate) at 1.
Distribution truncated_exponential(double rate);

/// The tight construction for the (e-1) seller-pricing bound: unit-rate
/// exponential CDF up to 1-delta, then the quadratic arc that meets F(1)=1
/// with matching slope. Valid for 0 < delta < 1/2; MHR by construction.
Distribution hard_instance_F(double delta);

/// Law of 1 - X.
Distribution reverse(const Distribution& d);

/// A not-yet-normalized piecewise law on the reals (atoms anywhere, segments
/// with arbitrary finite bounds, or hi = +inf for a decaying exponential).
struct RawLaw {
    std::vector<Atom> atoms;
    std::vector<Segment> segments;
};

/// Moves mass below 0 to an atom at 0 and mass above 1 to an atom at 1.
Distribution truncate(const RawLaw& law);

// String ids and JSON -------------------------------------------------------

/// Named constructors: "uniform", "atom:<x>", "hard-instance:delta=<d>",
/// "exp-trunc:rate=<r>", "reverse:<id>".
Distribution distribution_from_id(const std::string& id);

nlohmann::json to_json(const Distribution& d);
Distribution distribution_from_json(const nlohmann::json& j);

}  // namespace btlab
