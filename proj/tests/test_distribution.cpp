#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "btlab/distribution.hpp"

using namespace btlab;

namespace {

// Cubic CDF with a decreasing hazard region near 0 (equal-revenue-like
// shape): P(x) = 0.2x - 0.1x^2 + 0.9x^3, P' > 0 on [0,1], h'(0) < 0.
Distribution decreasing_hazard_cubic() {
    return Distribution({}, {Segment::polynomial_cdf(0.0, 1.0, {0.0, 0.2, -0.1, 0.9})});
}

std::vector<Distribution> test_family() {
    std::vector<Distribution> out;
    out.push_back(uniform_distribution());
    out.push_back(hard_instance_F(0.3));
    out.push_back(hard_instance_F(0.1));
    out.push_back(truncated_exponential(1.0));
    out.push_back(atom_uniform_mix(0.5, 0.5));
    out.push_back(piecewise_linear_cdf({1.6, 0.4, 1.0, 2.0}));
    out.push_back(decreasing_hazard_cubic());
    return out;
}

}  // namespace

TEST_CASE("cdf: right-continuous evaluation") {
    CHECK(uniform_distribution().cdf(0.3) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(point_mass(0.0).cdf(0.0) == 1.0);
    CHECK(hard_instance_F(0.1).cdf(0.9) ==
          doctest::Approx(1.0 - std::exp(-0.9)).epsilon(1e-13));
    CHECK_THROWS_AS(uniform_distribution().cdf(1.5), DomainError);
}

TEST_CASE("cdf_left: left limits") {
    CHECK(point_mass(0.0).cdf_left(0.0) == 0.0);
    CHECK(uniform_distribution().cdf_left(0.3) == doctest::Approx(0.3).epsilon(1e-14));
    // Atom of mass 0.5 at 0.5 over a half-mass uniform background: the left
    // limit at the atom is half of the uniform part's CDF there.
    Distribution mix = atom_uniform_mix(0.5, 0.5);
    CHECK(mix.cdf_left(0.5) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(mix.cdf(0.5) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("density") {
    CHECK(uniform_distribution().density(0.5) == 1.0);
    CHECK(hard_instance_F(0.1).density(0.5) == doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
    CHECK_THROWS_AS(point_mass(0.0).density(0.0), NoDensityError);
    CHECK_THROWS_AS(atom_uniform_mix(0.5, 0.5).density(0.5), NoDensityError);
}

TEST_CASE("quantile: generalized inverse") {
    CHECK(uniform_distribution().quantile(0.25) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(point_mass(0.0).quantile(0.7) == 0.0);
    CHECK(hard_instance_F(0.1).quantile(1.0 - std::exp(-0.9)) ==
          doctest::Approx(0.9).epsilon(1e-12));
    CHECK_THROWS_AS(uniform_distribution().quantile(1.2), DomainError);
}

TEST_CASE("quantile/cdf round trip on segment interiors") {
    for (const Distribution& d : test_family()) {
        for (const Segment& s : d.segments()) {
            for (int i = 1; i < 1000; ++i) {
                double x = s.lo() + (s.hi() - s.lo()) * i / 1000.0;
                double q = d.cdf(x);
                CHECK(std::abs(d.quantile(q) - x) <= 1e-9);
            }
        }
    }
}

TEST_CASE("cdf invariants: monotone, normalized, atom gaps") {
    for (const Distribution& d : test_family()) {
        double prev = -1.0;
        for (int i = 0; i <= 2000; ++i) {
            double x = i / 2000.0;
            double v = d.cdf(x);
            CHECK(v >= prev - 1e-15);
            CHECK(d.cdf_left(x) <= v + 1e-15);
            prev = v;
        }
        CHECK(std::abs(d.cdf(1.0) - 1.0) <= 1e-12);
        for (const Atom& a : d.atoms())
            CHECK(std::abs((d.cdf(a.x) - d.cdf_left(a.x)) - a.mass) <= 1e-12);
    }
}

TEST_CASE("hazard rate") {
    Distribution hard = hard_instance_F(0.1);
    for (double x : {0.05, 0.3, 0.6, 0.9})
        CHECK(hazard_rate(hard, x) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(hazard_rate(uniform_distribution(), 0.5) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(hazard_rate(uniform_distribution(), 1.0 - 1e-9) > 1e8);
    CHECK_THROWS_AS(hazard_rate(uniform_distribution(), 1.0), SingularityError);
    CHECK_THROWS_AS(hazard_rate(point_mass(0.5), 0.5), SingularityError);
}

TEST_CASE("cumulative hazard") {
    CHECK(cumulative_hazard(uniform_distribution(), 0.5) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-13));
    CHECK(cumulative_hazard(hard_instance_F(0.1), 0.9) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(cumulative_hazard(hard_instance_F(0.1), 0.0) == 0.0);
    CHECK_THROWS_AS(cumulative_hazard(uniform_distribution(), 1.0), SingularityError);
}

TEST_CASE("is_mhr: positive and negative cases") {
    CHECK(is_mhr(uniform_distribution()).is_mhr);
    for (double delta : {0.3, 0.1, 0.01}) CHECK(is_mhr(hard_instance_F(delta)).is_mhr);

    // Oracle: scan the hazard of the cubic on a grid and certify that a
    // decreasing stretch exists before asking is_mhr.
    Distribution cubic = decreasing_hazard_cubic();
    bool oracle_found = false;
    double lo = 0.0, hi = 0.0;
    double prev = hazard_rate(cubic, 1e-4);
    for (int i = 1; i < 4000; ++i) {
        double x = 1e-4 + (0.5 - 1e-4) * i / 4000.0;
        double h = hazard_rate(cubic, x);
        if (h < prev - 1e-8) {
            oracle_found = true;
            hi = x;
            lo = x - (0.5 - 1e-4) / 4000.0;
            break;
        }
        prev = h;
    }
    REQUIRE(oracle_found);
    MhrResult r = is_mhr(cubic);
    CHECK_FALSE(r.is_mhr);
    CHECK(std::isfinite(r.witness_lo));
    CHECK(r.witness_lo < r.witness_hi);
    CHECK(hazard_rate(cubic, r.witness_hi) < hazard_rate(cubic, r.witness_lo));
    // The reported pair sits in the same decreasing region the oracle saw.
    CHECK(r.witness_hi <= hi + 0.1);
    (void)lo;

    CHECK_THROWS_AS(is_mhr(atom_uniform_mix(0.5, 0.5)), UnsupportedShapeError);
    CHECK(is_mhr_allowing_terminal_atom(truncated_exponential(1.0)).is_mhr);
}

TEST_CASE("virtual value and its inverse") {
    Distribution u = uniform_distribution();
    CHECK(virtual_value(u, 0.75) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(virtual_value(u, 0.5) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(virtual_value(hard_instance_F(0.1), 0.5) == doctest::Approx(-0.5).epsilon(1e-12));

    CHECK(inverse_virtual_value(u, 0.0, 1e-11) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(inverse_virtual_value(u, 0.5, 1e-11) == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(inverse_virtual_value(hard_instance_F(0.1), 0.0, 1e-11) > 0.9);

    // phi(phi_inv(c)) = c across the MHR family.
    for (const Distribution& d : {uniform_distribution(), hard_instance_F(0.2)}) {
        for (double c : {0.0, 0.2, 0.5, 0.8}) {
            double x = inverse_virtual_value(d, c, 1e-11);
            CHECK(std::abs(virtual_value(d, x) - c) <= 1e-8);
        }
    }
    CHECK_THROWS_AS(inverse_virtual_value(u, -5.0, 1e-10), DomainError);
    CHECK_THROWS_AS(inverse_virtual_value(decreasing_hazard_cubic(), 0.5, 1e-10),
                    UnsupportedShapeError);
}

TEST_CASE("quantile map: forward, inverse, fixed point") {
    QuantileMap qm(uniform_distribution(), 0.5);
    CHECK(qm.forward(0.0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(qm.inverse(0.75) == doctest::Approx(0.5).epsilon(1e-13));
    for (double lambda : {0.2, 0.5, 0.8}) {
        for (const Distribution& d : {uniform_distribution(), hard_instance_F(0.1)}) {
            QuantileMap m(d, lambda);
            CHECK(m.forward(1.0) == doctest::Approx(1.0).epsilon(1e-12));
            double prev = -1.0;
            for (int i = 0; i <= 1000; ++i) {
                double x = i / 1000.0;
                double mu = m.forward(x);
                CHECK(mu > prev);  // strictly increasing
                CHECK(std::abs(m.inverse(mu) - x) <= 1e-9);
                prev = mu;
            }
        }
    }
    CHECK_THROWS_AS(QuantileMap(uniform_distribution(), 0.5).inverse(0.2), DomainError);
    CHECK_THROWS_AS(QuantileMap(atom_uniform_mix(0.3, 0.4), 0.5), UnsupportedShapeError);
}

TEST_CASE("hard instance: branch continuity and smoothness") {
    for (double delta : {0.3, 0.1}) {
        Distribution f = hard_instance_F(delta);
        const double joint = 1.0 - delta;
        // Value continuity: distribution CDF at the joint equals both branch
        // closed forms.
        double expected = 1.0 - std::exp(-joint);
        CHECK(std::abs(f.cdf(joint) - expected) <= 1e-12);
        REQUIRE(f.segments().size() == 2);
        CHECK(std::abs(f.segments()[0].mass() - expected) <= 1e-12);
        // C1: analytic branch densities match at the joint...
        double d_left = f.segments()[0].density(joint);
        double d_right = f.segments()[1].density(joint);
        CHECK(std::abs(d_left - d_right) <= 1e-11);
        // ...and so do one-sided difference quotients of the CDF.
        const double h = 1e-8;
        double q_right = (f.cdf(joint + h) - f.cdf(joint)) / h;
        double q_left = (f.cdf(joint) - f.cdf(joint - h)) / h;
        CHECK(std::abs(q_right - q_left) <= 1e-6);

        CHECK(std::abs(f.cdf(1.0) - 1.0) <= 1e-13);
        CHECK(std::abs((1.0 - f.cdf(joint)) - std::exp(-1.0 + delta)) <= 1e-12);
    }
    CHECK_THROWS_AS(hard_instance_F(0.7), DomainError);
    CHECK_THROWS_AS(hard_instance_F(0.0), DomainError);
}

TEST_CASE("reverse: closed forms and involution") {
    Distribution ru = reverse(uniform_distribution());
    for (int i = 0; i <= 50; ++i) {
        double x = i / 50.0;
        CHECK(std::abs(ru.cdf(x) - x) <= 1e-13);
    }
    Distribution rp = reverse(point_mass(0.0));
    CHECK(rp.cdf_left(1.0) == 0.0);
    CHECK(rp.cdf(1.0) == 1.0);

    for (const Distribution& d : test_family()) {
        Distribution rr = reverse(reverse(d));
        for (int i = 0; i <= 200; ++i) {
            double x = i / 200.0;
            CHECK(std::abs(rr.cdf(x) - d.cdf(x)) <= 1e-11);
        }
    }
}

TEST_CASE("truncate") {
    // Already on [0,1]: unchanged.
    RawLaw idem;
    idem.segments.push_back(Segment::uniform_density(0.0, 1.0, 1.0));
    Distribution t = truncate(idem);
    for (int i = 0; i <= 20; ++i) CHECK(std::abs(t.cdf(i / 20.0) - i / 20.0) <= 1e-13);

    // Exp(1) on [0, inf): tail mass e^{-1} collapses to an atom at 1.
    RawLaw exp_law;
    exp_law.segments.push_back(
        Segment::exponential_tail(0.0, std::numeric_limits<double>::infinity(), 1.0, 1.0));
    Distribution te = truncate(exp_law);
    REQUIRE(te.atoms().size() == 1);
    CHECK(te.atoms()[0].x == 1.0);
    CHECK(te.atoms()[0].mass == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(te.density(0.5) == doctest::Approx(std::exp(-0.5)).epsilon(1e-13));

    // Point mass beyond the interval moves to the boundary.
    RawLaw pm;
    pm.atoms.push_back(Atom{2.0, 1.0});
    Distribution tp = truncate(pm);
    REQUIRE(tp.atoms().size() == 1);
    CHECK(tp.atoms()[0].x == 1.0);
    CHECK(tp.atoms()[0].mass == 1.0);

    // truncated_exponential is the truncation of the raw exponential law.
    Distribution direct = truncated_exponential(1.0);
    for (int i = 0; i <= 100; ++i)
        CHECK(std::abs(direct.cdf(i / 100.0) - te.cdf(i / 100.0)) <= 1e-13);
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(Distribution({}, {Segment::uniform_density(0.0, 1.0, 0.7)}),
                    ConstructionError);  // mass 0.7 != 1
    CHECK_THROWS_AS(Distribution({Atom{0.5, 0.6}}, {Segment::uniform_density(0.0, 1.0, 0.6)}),
                    ConstructionError);  // total 1.2
    CHECK_THROWS_AS(Segment::uniform_density(0.5, 0.5, 1.0), ConstructionError);
    CHECK_THROWS_AS(Segment::uniform_density(0.0, 1.0, -1.0), ConstructionError);
    CHECK_THROWS_AS(Segment::polynomial_cdf(0.0, 1.0, {0.0, -1.0, 2.0}), ConstructionError);
    CHECK_THROWS_AS(
        Distribution({}, {Segment::uniform_density(0.0, 0.6, 1.0),
                          Segment::uniform_density(0.4, 1.0, 1.0)}),
        ConstructionError);  // overlapping segments
}

TEST_CASE("distribution ids") {
    CHECK(distribution_from_id("uniform").cdf(0.25) == doctest::Approx(0.25));
    CHECK(distribution_from_id("atom:0.5").cdf(0.5) == 1.0);
    CHECK(distribution_from_id("hard-instance:delta=0.1").cdf(0.9) ==
          doctest::Approx(1.0 - std::exp(-0.9)).epsilon(1e-13));
    CHECK(distribution_from_id("exp-trunc:rate=2").atoms()[0].mass ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
    Distribution r = distribution_from_id("reverse:atom:0");
    CHECK(r.atoms()[0].x == 1.0);
    CHECK_THROWS_AS(distribution_from_id("nonsense"), ConstructionError);
    CHECK_THROWS_AS(distribution_from_id("atom:zzz"), ConstructionError);
}

TEST_CASE("json round trip") {
    for (const Distribution& d : test_family()) {
        nlohmann::json j = to_json(d);
        Distribution back = distribution_from_json(j);
        for (int i = 0; i <= 500; ++i) {
            double x = i / 500.0;
            CHECK(std::abs(back.cdf(x) - d.cdf(x)) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(distribution_from_json(nlohmann::json{{"bogus", 1}}), ConstructionError);
    nlohmann::json bad_seg = {
        {"segments", {{{"kind", "uniform-density"}, {"lo", 0.0}, {"hi", 1.0},
                       {"params", {1.0}}, {"extra", 1}}}}};
    CHECK_THROWS_AS(distribution_from_json(bad_seg), ConstructionError);
}
