#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "orbitforge/symbolic.hpp"
#include "test_util.hpp"

using namespace orbitforge;

TEST_CASE("gaussian rational field axioms on random triples") {
    std::mt19937 rng(42);
    for (int i = 0; i < 300; ++i) {
        GaussianRational a = tu::random_gaussian(rng), b = tu::random_gaussian(rng),
                         c = tu::random_gaussian(rng);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!b.is_zero()) CHECK((a / b) * b == a);
    }
}

TEST_CASE("gaussian rational height") {
    GaussianRational q(Rational(1, 2), Rational(-3, 7));
    CHECK(q.height() == Integer(7));
    CHECK(GaussianRational(0L).height() == Integer(1));
    std::mt19937 rng(7);
    for (int i = 0; i < 100; ++i) {
        GaussianRational g = tu::random_gaussian(rng);
        if (!g.is_zero()) CHECK(g.height() > 0);
    }
}

TEST_CASE("enumeration starts at zero, ordered by height, injective") {
    AlgebraicEnumeration en;
    CHECK(en.element(1) == GaussianRational(0L));
    std::set<std::string> seen;
    Integer last_height(1);
    for (size_t i = 1; i <= 200; ++i) {
        const GaussianRational& g = en.element(i);
        CHECK(seen.insert(g.str()).second); // injective
        CHECK(g.height() >= last_height);   // height blocks are ordered
        last_height = g.height();
    }
}

TEST_CASE("complex box arithmetic contains point results") {
    std::mt19937 rng(123);
    const Prec P_ORACLE = 512;
    for (int i = 0; i < 500; ++i) {
        GaussianRational ga = tu::random_gaussian(rng, 5, 5), gb = tu::random_gaussian(rng, 5, 5);
        ComplexBox A = ComplexBox::exact(ga, 96).widened(BigFloat(1e-6, 64));
        ComplexBox B = ComplexBox::exact(gb, 96);
        BigComplex pa = BigComplex::from_gaussian(ga, P_ORACLE);
        BigComplex pb = BigComplex::from_gaussian(gb, P_ORACLE);
        CHECK(tu::box_contains_point(badd(A, B, 96), cadd(pa, pb, P_ORACLE)));
        CHECK(tu::box_contains_point(bsub(A, B, 96), csub(pa, pb, P_ORACLE)));
        CHECK(tu::box_contains_point(bmul(A, B, 96), cmul(pa, pb, P_ORACLE)));
        if (B.surely_excludes_zero())
            CHECK(tu::box_contains_point(bdiv(A, B, 96), cdiv(pa, pb, P_ORACLE)));
        CHECK(tu::box_contains_point(bexp(B, 96), cexp(pb, P_ORACLE)));
        CHECK(tu::box_contains_point(bsin(B, 96), tu::osin(pb, P_ORACLE)));
        CHECK(tu::box_contains_point(bcos(B, 96), tu::ocos(pb, P_ORACLE)));
    }
}

namespace {

// random expression DAGs with a parallel point-arithmetic oracle
struct DagSample {
    SymValue v;
    BigComplex point; // oracle value at high precision
};

DagSample random_dag(SymContext& ctx, std::mt19937& rng, int depth, Prec oracle_prec) {
    std::uniform_int_distribution<int> pick(0, 6);
    int what = depth <= 0 ? 0 : pick(rng);
    switch (what) {
        default:
        case 0: {
            GaussianRational g = tu::random_gaussian(rng, 3, 3);
            return {ctx.exact(g), BigComplex::from_gaussian(g, oracle_prec)};
        }
        case 1: { // base eval at a small exact point
            GaussianRational g = tu::random_gaussian(rng, 2, 3);
            std::uniform_int_distribution<int> kp(0, 1);
            int kern = kp(rng) == 0 ? kernel::EXP : kernel::SIN;
            SymValue v = ctx.base_eval(kern, ctx.exact(g));
            BigComplex arg = BigComplex::from_gaussian(g, oracle_prec);
            BigComplex val =
                kern == kernel::EXP ? cexp(arg, oracle_prec) : tu::osin(arg, oracle_prec);
            return {v, val};
        }
        case 2: {
            DagSample a = random_dag(ctx, rng, depth - 1, oracle_prec);
            DagSample b = random_dag(ctx, rng, depth - 1, oracle_prec);
            return {ctx.sum(a.v, b.v), cadd(a.point, b.point, oracle_prec)};
        }
        case 3: {
            DagSample a = random_dag(ctx, rng, depth - 1, oracle_prec);
            DagSample b = random_dag(ctx, rng, depth - 1, oracle_prec);
            return {ctx.product(a.v, b.v), cmul(a.point, b.point, oracle_prec)};
        }
        case 4: {
            DagSample a = random_dag(ctx, rng, depth - 1, oracle_prec);
            return {ctx.negation(a.v), cneg(a.point, oracle_prec)};
        }
        case 5: {
            DagSample a = random_dag(ctx, rng, depth - 1, oracle_prec);
            GaussianRational g = tu::random_gaussian(rng, 3, 3);
            if (g.is_zero()) g = GaussianRational(2);
            return {ctx.quotient(a.v, ctx.exact(g)),
                    cdiv(a.point, BigComplex::from_gaussian(g, oracle_prec), oracle_prec)};
        }
        case 6: {
            DagSample a = random_dag(ctx, rng, depth - 1, oracle_prec);
            std::uniform_int_distribution<long> ep(0, 3);
            long e = ep(rng);
            BigComplex acc = BigComplex::from_doubles(1, 0, oracle_prec);
            for (long i = 0; i < e; ++i) acc = cmul(acc, a.point, oracle_prec);
            return {ctx.int_power(a.v, e), acc};
        }
    }
}

} // namespace

TEST_CASE("interval soundness over 1000 random DAGs of depth <= 8") {
    SymContext ctx;
    std::mt19937 rng(2024);
    const Prec OP = 1024;
    int checked = 0;
    while (checked < 1000) {
        std::uniform_int_distribution<int> dd(1, 8);
        DagSample s = random_dag(ctx, rng, dd(rng), OP);
        if (!s.point.is_finite()) continue;
        for (double r : {1e-4, 1e-10}) {
            ComplexBox box;
            try {
                box = ctx.enclose(s.v, BigFloat(r, 64));
            } catch (const PrecisionExhausted&) {
                continue;
            }
            CHECK(tu::box_contains_point(box, s.point));
            CHECK(box.radius().cmp_d(r) <= 0);
        }
        ++checked;
    }
}

TEST_CASE("refinement monotonicity: tighter at higher precision, always overlapping") {
    SymContext ctx;
    std::mt19937 rng(5);
    for (int i = 0; i < 50; ++i) {
        DagSample s = random_dag(ctx, rng, 5, 512);
        ComplexBox lo = ctx.enclose_at(s.v, 128);
        ComplexBox hi = ctx.enclose_at(s.v, 256);
        if (!lo.is_bounded() || !hi.is_bounded()) continue;
        CHECK(hi.radius() <= lo.radius()); // cache keeps the tighter one
        CHECK(!lo.disjoint_from(hi));      // both contain the true value
    }
}

TEST_CASE("enclose: exact element to 1e-30") {
    SymContext ctx;
    SymValue v = ctx.exact(GaussianRational(Rational(1, 2), Rational(1, 3)));
    ComplexBox box = ctx.enclose(v, Rational(Integer(1), Integer("1000000000000000000000000000000")));
    CHECK(box.radius().cmp_d(1e-30) <= 0);
    CHECK(!box.surely_excludes(GaussianRational(Rational(1, 2), Rational(1, 3))));
    CHECK(tu::box_contains_point(
        box, BigComplex::from_gaussian(GaussianRational(Rational(1, 2), Rational(1, 3)), 512)));
}

TEST_CASE("enclose: exp(0) = 1 and exp(1) against the series oracle") {
    SymContext ctx;
    SymValue one = ctx.base_eval(kernel::EXP, ctx.exact(0L));
    CHECK(ctx.reduce_exact(one) == GaussianRational(1));

    SymValue e1 = ctx.base_eval(kernel::EXP, ctx.exact(1L));
    ComplexBox box = ctx.enclose(e1, BigFloat(1e-20, 64));
    CHECK(box.radius().cmp_d(1e-20) <= 0);
    // independent oracle: partial sums of sum 1/n! with remainder bound
    Rational partial = 0;
    Rational term = 1;
    int N = 40;
    for (int n = 0; n <= N; ++n) {
        partial += term;
        term /= (n + 1);
    }
    // remainder in (0, 2/(N+1)!)
    ComplexBox oracle = ComplexBox::exact(GaussianRational(partial), 256)
                            .widened(BigFloat::from_rational(term * 2, 64, MPFR_RNDU));
    CHECK(!box.disjoint_from(oracle));
    // frozen digits of e
    BigFloat lo = BigFloat::from_hex(box.center().re.to_hex(), 256);
    CHECK(lo.to_decimal(21).substr(0, 12) == std::string("2.7182818284"));
}

TEST_CASE("reduce_exact: cancellation, products, and NotExact") {
    SymContext ctx;
    SymValue e1 = ctx.base_eval(kernel::EXP, ctx.exact(1L));
    SymValue expr = ctx.sum(ctx.sum(e1, ctx.negation(e1)), ctx.exact(3L));
    CHECK(ctx.reduce_exact(expr) == GaussianRational(3));

    SymValue prod = ctx.product(ctx.exact(2L), ctx.exact(GaussianRational(Rational(0), Rational(1))));
    CHECK(ctx.reduce_exact(prod) == GaussianRational(Rational(0), Rational(2)));

    CHECK(!ctx.reduce_exact(e1).has_value());
    CHECK(ctx.tag(e1) == ExactnessTag::transcendental_symbolic);
    CHECK(ctx.tag(expr) == ExactnessTag::exact_in_k);
}

TEST_CASE("reduce_exact never contradicts the enclosure") {
    SymContext ctx;
    std::mt19937 rng(99);
    for (int i = 0; i < 200; ++i) {
        DagSample s = random_dag(ctx, rng, 6, 512);
        auto q = ctx.reduce_exact(s.v);
        if (!q) continue;
        ComplexBox box = ctx.enclose_at(s.v, 192);
        if (!box.is_bounded()) continue;
        CHECK(!box.surely_excludes(*q));
    }
}

TEST_CASE("quotient witnesses and division errors") {
    SymContext ctx;
    CHECK_THROWS_AS(ctx.quotient(ctx.exact(1L), ctx.exact(0L)), DivisionByEnclosedZero);
    // e - e is exactly zero but only after reduction; quotient must refuse it
    SymValue e1 = ctx.base_eval(kernel::EXP, ctx.exact(1L));
    SymValue zero = ctx.sum(e1, ctx.negation(e1));
    CHECK_THROWS_AS(ctx.quotient(ctx.exact(1L), zero), DivisionByEnclosedZero);
    // a legitimate transcendental denominator gets a witness
    SymValue ok = ctx.quotient(ctx.exact(1L), e1);
    ComplexBox box = ctx.enclose(ok, BigFloat(1e-15, 64));
    CHECK(box.surely_excludes_zero());
}

TEST_CASE("precision exhausted surfaces as an error") {
    SymContext ctx(PrecPolicy{64, 128});
    SymValue e1 = ctx.base_eval(kernel::EXP, ctx.exact(1L));
    CHECK_THROWS_AS(ctx.enclose(e1, BigFloat(1e-300, 64)), PrecisionExhausted);
}

TEST_CASE("symbolic serialization round-trips") {
    SymContext ctx;
    SymValue e1 = ctx.base_eval(kernel::EXP, ctx.exact(GaussianRational(Rational(1, 3), Rational(2))));
    SymValue v = ctx.quotient(ctx.sum(e1, ctx.exact(5L)), ctx.exact(7L));
    SymGraphDump d = dump_symbolic({v});
    SymContext ctx2;
    auto roots = load_symbolic(ctx2, d.lines, {d.lines.size() - 1});
    REQUIRE(roots.size() == 1);
    SymGraphDump d2 = dump_symbolic({roots[0]});
    CHECK(d.lines == d2.lines);
}
