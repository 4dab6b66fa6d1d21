#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "orbitforge/cycles.hpp"
#include "test_util.hpp"

using namespace orbitforge;

namespace {

GPoly zsq_minus_one() {
    return GPoly({GaussianRational(-1L), GaussianRational(0L), GaussianRational(1)});
}

} // namespace

TEST_CASE("find_cycles: the 2-cycle {0,-1} of z^2 - 1") {
    Evaluable f = evaluable_from_gpoly(zsq_minus_one());
    FindCyclesOptions opt;
    opt.want = 1;
    opt.prec = PrecPolicy{128, 512};
    auto cycles = find_cycles(f, 2, Disk(GaussianRational(0L), Rational(2)), opt);
    REQUIRE(cycles.size() == 1);
    const CycleRecord& c = cycles[0];
    CHECK(c.period == 2);
    // f^2(z)-z = z(z+1)(z^2-z-1): the exact-period-2 points are 0 and -1
    bool has0 = false, hasm1 = false;
    for (const auto& pt : c.points) {
        if (!pt.surely_excludes(GaussianRational(0L))) has0 = true;
        if (!pt.surely_excludes(GaussianRational(-1L))) hasm1 = true;
    }
    CHECK(has0);
    CHECK(hasm1);
    // multiplier f'(0) * f'(-1) = 0 * (-2) = 0
    CHECK(!c.multiplier.surely_excludes_zero());
    CHECK(c.multiplier.abs_upper().cmp_d(1e-20) < 0);
    CHECK(!c.repelling);
}

TEST_CASE("find_cycles: exp has no fixed point in the unit disk") {
    Evaluable f = evaluable_from_base(BaseFunction::by_id("exp"));
    // independent count: e^z - z has no zero in B(0,1)
    Evaluable fm = {
        [f](const ComplexBox& z, Prec p) { return bsub(f.eval(z, p), z, p); },
        nullptr,
        "exp(z)-z",
    };
    CHECK(count_zeros(fm, Disk(GaussianRational(0L), Rational(1))).count == 0);
    FindCyclesOptions opt;
    opt.want = 1;
    opt.prec = PrecPolicy{128, 256};
    CHECK_THROWS_AS(find_cycles(f, 1, Disk(GaussianRational(0L), Rational(1)), opt),
                    SearchExhausted);
}

TEST_CASE("find_cycles: identity map rejected at the boundary precondition") {
    GPoly idp({GaussianRational(0L), GaussianRational(1)});
    Evaluable f = evaluable_from_gpoly(idp);
    FindCyclesOptions opt;
    opt.want = 1;
    opt.prec = PrecPolicy{64, 128};
    CHECK_THROWS_AS(find_cycles(f, 1, Disk(GaussianRational(0L), Rational(1)), opt), BoundaryZero);
}

TEST_CASE("multiplier closed forms") {
    // f = z/2 + 1 has the fixed point 2 with multiplier 1/2
    GPoly aff({GaussianRational(1), GaussianRational(Rational(1, 2))});
    Evaluable f = evaluable_from_gpoly(aff);
    FindCyclesOptions opt;
    opt.want = 1;
    opt.prec = PrecPolicy{128, 256};
    auto fixed = find_cycles(f, 1, Disk(GaussianRational(0L), Rational(3)), opt);
    REQUIRE(fixed.size() == 1);
    CHECK(!fixed[0].points[0].surely_excludes(GaussianRational(2L)));
    ComplexBox m = fixed[0].multiplier;
    CHECK(!m.surely_excludes(GaussianRational(Rational(1, 2))));
    CHECK(m.radius().cmp_d(1e-15) < 0);
    CHECK(!fixed[0].repelling);

    // multiplier at different cycle points agrees (chain rule is cyclic)
    Evaluable g = evaluable_from_gpoly(zsq_minus_one());
    auto cyc = find_cycles(g, 2, Disk(GaussianRational(0L), Rational(2)), opt);
    REQUIRE(cyc.size() == 1);
    CycleRecord rotated = cyc[0];
    std::rotate(rotated.points.begin(), rotated.points.begin() + 1, rotated.points.end());
    ComplexBox m0 = multiplier(g, cyc[0], 128);
    ComplexBox m1 = multiplier(g, rotated, 128);
    CHECK(!m0.disjoint_from(m1));
}

TEST_CASE("census identity #Orb = #Per / k") {
    Evaluable g = evaluable_from_gpoly(zsq_minus_one());
    FindCyclesOptions opt;
    opt.want = 1;
    opt.prec = PrecPolicy{128, 256};
    CycleCensus census;
    census.by_period[2] = find_cycles(g, 2, Disk(GaussianRational(0L), Rational(2)), opt);
    CHECK(census.per_count(2) == 2 * census.orb_count(2));
    CHECK(census.orb_count(2) == 1);
}

TEST_CASE("phi identity: k = 1 is exact and phi_1 = P") {
    GPoly P({GaussianRational(2L), GaussianRational(1)}); // z + 2
    PhiCheckResult r = phi_check(BaseFunction::by_id("exp"), P, Rational(1, 100), 1,
                                 GaussianRational(Rational(1, 2)), 1e-12, PrecPolicy{128, 256});
    CHECK(r.exact_zero);
    REQUIRE(r.phi_exact.has_value());
    CHECK(*r.phi_exact == P.eval_exact(GaussianRational(Rational(1, 2))));
}

TEST_CASE("phi identity: affine base is exact with phi_2 = 2") {
    GPoly idp({GaussianRational(0L), GaussianRational(1)}); // g = z
    PhiCheckResult r =
        phi_check_poly(idp, GPoly::one(), GaussianRational(Rational(7, 13)), 2, GaussianRational(3L));
    CHECK(r.exact_zero);
    REQUIRE(r.phi_exact.has_value());
    CHECK(*r.phi_exact == GaussianRational(2L));
    // and for a nontrivial polynomial base the residual is still exactly 0
    GPoly quad({GaussianRational(1), GaussianRational(0L), GaussianRational(Rational(1, 3))});
    PhiCheckResult r2 = phi_check_poly(quad, GPoly({GaussianRational(1), GaussianRational(1)}),
                                       GaussianRational(Rational(1, 5)), 3,
                                       GaussianRational(Rational(1, 2)));
    CHECK(r2.exact_zero);
}

TEST_CASE("phi recursion: exp base meets the 1e-9 bound and scales linearly in eps") {
    const BaseFunction& g = BaseFunction::by_id("exp");
    GaussianRational z(Rational(1, 4), Rational(-1, 3));
    for (int k : {2, 3}) {
        PhiCheckResult r = phi_check(g, GPoly::one(), Rational(1, 1000), k, z, 1e-12,
                                     PrecPolicy{128, 1024});
        CHECK(r.residual_upper.cmp_d(1e-9) <= 0);
        PhiCheckResult rh = phi_check(g, GPoly::one(), Rational(1, 2000), k, z, 1e-12,
                                      PrecPolicy{128, 1024});
        ComplexBox ratio = bdiv(rh.eps_phi, r.eps_phi, 192);
        CHECK(ratio.re_lower().cmp_d(0.49) >= 0);
        CHECK(ratio.re_upper().cmp_d(0.51) <= 0);
        CHECK(fabsf_(ratio.im_lower(), 64, MPFR_RNDU).cmp_d(0.01) < 0);
        CHECK(fabsf_(ratio.im_upper(), 64, MPFR_RNDU).cmp_d(0.01) < 0);
    }
}

TEST_CASE("fixed points: exp(z)+z is fixed-point free, eps=1/2 gives the four analytic roots") {
    // fixed points of exp(z)+z solve e^z = 0: none; certified by counting the
    // zeros of e^z itself (the addend cancels exactly)
    const BaseFunction& g = BaseFunction::by_id("exp_plus_z");
    Evaluable ge = evaluable_from_base(g);
    Evaluable ee = evaluable_from_base(BaseFunction::by_id("exp"));
    for (long R : {1L, 5L, 10L})
        CHECK(count_zeros(ee, Disk(GaussianRational(0L), Rational(R))).count == 0);

    // eps = 1/2: fixed points where e^z = -1/2, i.e. ln(1/2) + i pi (2m+1)
    ComplexBox eps = ComplexBox::exact_rational(Rational(1, 2), 192);
    auto wits = certify_fixed_points_at(g, GPoly::one(), eps, Rational(10), 4,
                                        BigFloat(1e-11, 64), PrecPolicy{192, 1024});
    REQUIRE(wits.size() == 4);
    // exactly 4 by an independent count of e^z + 1/2 on B(0,10)
    Evaluable fm = {
        [ee](const ComplexBox& z, Prec p) {
            return badd(ee.eval(z, p), ComplexBox::exact_rational(Rational(1, 2), p), p);
        },
        nullptr,
        "e^z+1/2",
    };
    CHECK(count_zeros(fm, Disk(GaussianRational(0L), Rational(10))).count == 4);

    Prec p = 256;
    BigFloat ln2(p);
    mpfr_set_ui(ln2.raw(), 2, MPFR_RNDN);
    mpfr_log(ln2.raw(), ln2.raw(), MPFR_RNDN);
    auto [pi_lo, pi_hi] = pi_bounds(p);
    int matched = 0;
    for (const auto& w : wits) {
        CHECK(w.point.radius().cmp_d(1e-10) <= 0);
        // multiplier e^z + 1 = 1/2 exactly
        CHECK(!w.multiplier.surely_excludes(GaussianRational(Rational(1, 2))));
        CHECK(w.multiplier.radius().cmp_d(1e-10) <= 0);
        CHECK(w.multiplier.surely_excludes(GaussianRational(0L)));
        CHECK(w.multiplier.surely_excludes(GaussianRational(1L)));
        for (int m : {-2, -1, 0, 1}) {
            BigComplex target(fneg(ln2, p), fmul_si(pi_lo, 2 * m + 1, p, MPFR_RNDN));
            if (tu::box_contains_point(w.point, target)) {
                ++matched;
                // |z|^2 = (ln 2)^2 + pi^2 (2m+1)^2 < 100
                double z2 = std::pow(std::log(2.0), 2) + std::pow(M_PI * (2 * m + 1), 2);
                CHECK(z2 < 100.0);
                break;
            }
        }
    }
    CHECK(matched == 4);
}

TEST_CASE("fixed points: eps = 1 is rejected by the multiplier filter") {
    // e^z + z + 1: fixed points have e^z = -1, so f' = e^z + 1 = 0
    const BaseFunction& g = BaseFunction::by_id("exp_plus_z");
    ComplexBox eps = ComplexBox::exact_rational(Rational(1), 192);
    try {
        certify_fixed_points_at(g, GPoly::one(), eps, Rational(10), 4, BigFloat(1e-11, 64),
                                PrecPolicy{192, 512});
        FAIL("expected SearchExhausted");
    } catch (const SearchExhausted& e) {
        CHECK(std::string(e.what()).find("multiplier") != std::string::npos);
    }
}

TEST_CASE("fixed point regime search returns a certified interval") {
    const BaseFunction& g = BaseFunction::by_id("exp_plus_z");
    RegimeResult r = fixed_point_regime(g, GPoly::one(), 1, 2, Rational(1, 2), PrecPolicy{192, 1024});
    CHECK(r.delta1 > 0);
    CHECK(r.delta1 < r.delta2);
    CHECK(r.delta2 < Rational(1, 2));
    CHECK((long)r.fixed_points.size() >= 2);
    for (const auto& w : r.fixed_points) {
        CHECK(w.multiplier.surely_excludes(GaussianRational(0L)));
        CHECK(w.multiplier.surely_excludes(GaussianRational(1L)));
    }
}

TEST_CASE("cycle records satisfy the interval-Newton and divisor-exclusion contract") {
    Evaluable g = evaluable_from_gpoly(zsq_minus_one());
    FindCyclesOptions opt;
    opt.want = 1;
    opt.prec = PrecPolicy{128, 256};
    auto cyc = find_cycles(g, 2, Disk(GaussianRational(0L), Rational(2)), opt);
    REQUIRE(cyc.size() == 1);
    // re-evaluating f^k on the certified box lands inside the box
    ComplexBox w = cyc[0].points[0];
    for (int i = 0; i < 2; ++i) w = g.eval(w, 128);
    CHECK(!w.disjoint_from(cyc[0].points[0]));
    // proper divisor d=1: f(box) disjoint from box
    CHECK(g.eval(cyc[0].points[0], 128).disjoint_from(cyc[0].points[0]));
}

TEST_CASE("itinerary search certifies repelling cycles of exp in moderate disks") {
    Evaluable f = evaluable_from_base(BaseFunction::by_id("exp"));
    FindCyclesOptions opt;
    opt.want = 2;
    opt.require_repelling = true;
    opt.prec = PrecPolicy{192, 1024};
    auto cyc = find_cycles(f, 2, Disk(GaussianRational(0L), Rational(14)), opt);
    CHECK((long)cyc.size() >= 2);
    for (const auto& c : cyc) {
        CHECK(c.repelling);
        CHECK(c.multiplier.abs_lower().cmp_d(1.0) > 0);
        CHECK(c.period == 2);
    }
}
