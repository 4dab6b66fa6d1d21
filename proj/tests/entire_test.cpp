#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <random>

#include "orbitforge/entire.hpp"
#include "test_util.hpp"

using namespace orbitforge;

namespace {

StagedFunction make_staged(SymContext& ctx, const std::string& base, SymValue eps0,
                           NailSeqPtr nails = nullptr) {
    if (!nails) nails = std::make_shared<NailSequence>();
    return StagedFunction(&ctx, BaseFunction::by_id(base), eps0, nails);
}

PerturbationTerm simple_term(SymValue eps, long exponent, size_t prefix = 0) {
    PerturbationTerm t;
    t.stage = 1;
    t.index = 0;
    t.exponent = exponent;
    t.eps = eps;
    t.nu = Rational(1);
    t.nail_prefix = prefix;
    t.kind = StepKind::spare;
    return t;
}

} // namespace

TEST_CASE("poly_length on closed forms") {
    GPoly p({GaussianRational(1), GaussianRational(-4L), GaussianRational(3L)}); // 3z^2-4z+1
    auto [lo, hi] = poly_length(p);
    CHECK(lo.cmp_d(8.0) <= 0);
    CHECK(hi.cmp_d(8.0) >= 0);
    CHECK(fsub(hi, lo, 64, MPFR_RNDU).cmp_d(1e-12) < 0);

    GPoly zn = GPoly::monomial(7, GaussianRational(1));
    auto [lo2, hi2] = poly_length(zn);
    CHECK(lo2.cmp_d(1.0) <= 0);
    CHECK(hi2.cmp_d(1.0) >= 0);
}

TEST_CASE("poly_length of (z-1)^2 (z-i)^2 against an independent expansion") {
    GaussianRational one(1), eye(Rational(0), Rational(1));
    GPoly lin1 = GPoly::linear_root(one);
    GPoly lin2 = GPoly::linear_root(eye);
    GPoly p = lin1 * lin1 * lin2 * lin2;

    // independent expansion by direct double-complex convolution
    std::vector<std::complex<double>> acc{1.0};
    for (std::complex<double> root : {std::complex<double>(1, 0), std::complex<double>(1, 0),
                                      std::complex<double>(0, 1), std::complex<double>(0, 1)}) {
        std::vector<std::complex<double>> next(acc.size() + 1);
        for (size_t i = 0; i < acc.size(); ++i) {
            next[i] += acc[i] * (-root);
            next[i + 1] += acc[i];
        }
        acc = std::move(next);
    }
    double oracle_len = 0;
    for (auto c : acc) oracle_len += std::abs(c);

    auto [lo, hi] = poly_length(p);
    CHECK(lo.to_double() <= oracle_len + 1e-9);
    CHECK(hi.to_double() >= oracle_len - 1e-9);
    CHECK(hi.to_double() - lo.to_double() < 1e-9);
    CHECK(oracle_len == doctest::Approx(6 + 4 * std::sqrt(2.0)));
}

TEST_CASE("staged eval: symbolic path preserves exactness facts") {
    SymContext ctx;
    StagedFunction f = make_staged(ctx, "exp", ctx.exact(0L));
    // f = exp with no terms at z = 0 reduces to 1
    CHECK(ctx.reduce_exact(f.eval_symbolic(GaussianRational(0L))) == GaussianRational(1));

    // one term (1/4) z^2 with P = 1 at z = 2: value is exp(2) + 1
    StagedFunction g = f.with_term(simple_term(ctx.exact(Rational(1, 4)), 2));
    SymValue at2 = g.eval_symbolic(GaussianRational(2L));
    SymValue e2 = ctx.base_eval(kernel::EXP, ctx.exact(2L));
    CHECK(ctx.reduce_exact(ctx.sum(at2, ctx.negation(e2))) == GaussianRational(1));
}

TEST_CASE("staged eval: enclosure on the unit disk covers dense samples") {
    SymContext ctx;
    StagedFunction f = make_staged(ctx, "exp", ctx.exact(0L));
    ComplexBox disk(BigComplex::from_doubles(0, 0, 128), BigFloat(1, 64));
    ComplexBox img = f.eval_box(disk, 128);
    for (int i = 0; i < 64; ++i) {
        double th = 2 * M_PI * i / 64.0;
        for (double r : {0.0, 0.5, 1.0}) {
            std::complex<double> z = std::polar(r, th);
            std::complex<double> w = std::exp(z);
            CHECK(tu::box_contains_point(img, BigComplex::from_doubles(w.real(), w.imag(), 256)));
        }
    }
}

TEST_CASE("taylor coefficients: base, term contribution, steered constant") {
    SymContext ctx;
    StagedFunction f = make_staged(ctx, "exp", ctx.exact(0L));
    CHECK(ctx.reduce_exact(f.taylor_coefficient(3)) == GaussianRational(Rational(1, 6)));

    StagedFunction g = f.with_term(simple_term(ctx.exact(Rational(1, 4)), 2));
    // k=2: b_2 + eps * P(0) = 1/2 + 1/4
    CHECK(ctx.reduce_exact(g.taylor_coefficient(2)) == GaussianRational(Rational(3, 4)));

    // constant coefficient with eps0 chosen in K: b_0 + eps0 in K \ {0}
    StagedFunction h = make_staged(ctx, "expm1", ctx.exact(Rational(1, 16)));
    auto a0 = ctx.reduce_exact(h.taylor_coefficient(0));
    REQUIRE(a0.has_value());
    CHECK(*a0 == GaussianRational(Rational(1, 16)));
    CHECK(!a0->is_zero());
}

TEST_CASE("base function contract: tail bounds shrink and enclose truncations") {
    std::mt19937 rng(11);
    for (const char* id : {"exp", "expm1", "sin", "exp_plus_z"}) {
        const BaseFunction& b = BaseFunction::by_id(id);
        for (double R : {0.5, 1.0, 2.0}) {
            BigFloat prev = BigFloat::pos_inf();
            for (long N : {4L, 8L, 16L, 32L}) {
                BigFloat t = b.tail_bound(BigFloat(R, 64), N);
                CHECK(t < prev);
                prev = t;
            }
        }
        // eval_enclosure overlaps truncated series + tail on random points
        for (int i = 0; i < 25; ++i) {
            GaussianRational z = tu::random_gaussian(rng, 2, 4);
            const long N = 24;
            GaussianRational sum;
            GaussianRational zp(1L);
            for (long n = 0; n <= N; ++n) {
                sum += GaussianRational(b.taylor_coefficient(n)) * zp;
                zp = zp * z;
            }
            BigFloat zabs = ComplexBox::exact(z, 128).abs_upper();
            ComplexBox series = ComplexBox::exact(sum, 192).widened(b.tail_bound(zabs, N));
            ComplexBox direct = b.eval_enclosure(ComplexBox::exact(z, 192), 192);
            CHECK(!series.disjoint_from(direct));
        }
    }
}

TEST_CASE("coefficient/evaluation consistency on |z| <= R") {
    SymContext ctx;
    StagedFunction f = make_staged(ctx, "exp", ctx.exact(Rational(1, 8)));
    f = f.with_term(simple_term(ctx.exact(Rational(1, 32)), 2));
    std::mt19937 rng(3);
    for (double R : {0.5, 1.0, 2.0}) {
        for (int i = 0; i < 10; ++i) {
            GaussianRational z = tu::random_gaussian(rng, 2, 4);
            if (ComplexBox::exact(z, 64).abs_upper().cmp_d(R) > 0) continue;
            const long N = 30; // beyond the term degrees, so terms are complete
            ComplexBox sum = ComplexBox::exact(GaussianRational(0L), 192);
            ComplexBox zb = ComplexBox::exact(z, 192);
            ComplexBox zp = ComplexBox::exact(GaussianRational(1), 192);
            for (long k = 0; k <= N; ++k) {
                sum = badd(sum, bmul(ctx.enclose_at(f.taylor_coefficient(k), 192), zp, 192), 192);
                zp = bmul(zp, zb, 192);
            }
            ComplexBox bracket = sum.widened(f.base().tail_bound(BigFloat(R, 64), N));
            ComplexBox direct = f.eval_box(ComplexBox::exact(z, 192), 192);
            CHECK(!bracket.disjoint_from(direct));
        }
    }
}

TEST_CASE("derivative: exp' = exp, term derivative, finite differences") {
    SymContext ctx;
    CHECK(BaseFunction::by_id("exp").derivative().kern() == kernel::EXP);

    // term eps z^3 differentiates to 3 eps z^2
    StagedFunction f = make_staged(ctx, "exp", ctx.exact(0L));
    SymValue eps = ctx.exact(Rational(1, 8));
    f = f.with_term(simple_term(eps, 3));
    GaussianRational z2(2L);
    SymValue d = f.eval_deriv_symbolic(z2);
    // f'(2) = exp(2) + 3 * (1/8) * 4
    SymValue e2 = ctx.base_eval(kernel::EXP, ctx.exact(2L));
    CHECK(ctx.reduce_exact(ctx.sum(d, ctx.negation(e2))) == GaussianRational(Rational(3, 2)));

    // finite-difference oracle: error scales linearly in h
    std::mt19937 rng(17);
    for (int i = 0; i < 5; ++i) {
        GaussianRational z = tu::random_gaussian(rng, 1, 4);
        auto fd_err = [&](const Rational& h) {
            ComplexBox zb = ComplexBox::exact(z, 256);
            ComplexBox zh = ComplexBox::exact(z + GaussianRational(h), 256);
            ComplexBox diff = bdiv(bsub(f.eval_box(zh, 256), f.eval_box(zb, 256), 256),
                                   ComplexBox::exact_rational(h, 256), 256);
            return bsub(diff, f.eval_deriv_box(zb, 256), 256);
        };
        ComplexBox e6 = fd_err(Rational(1, 1000000));
        ComplexBox e7 = fd_err(Rational(1, 10000000));
        double ratio = e6.abs_upper().to_double() / e7.abs_upper().to_double();
        CHECK(ratio > 8.0);
        CHECK(ratio < 12.0);
    }
}

TEST_CASE("derivative additivity across term groups") {
    SymContext ctx;
    StagedFunction base = make_staged(ctx, "exp", ctx.exact(0L));
    PerturbationTerm a = simple_term(ctx.exact(Rational(1, 16)), 2);
    PerturbationTerm b = simple_term(ctx.exact(GaussianRational(Rational(0), Rational(1, 32))), 3);
    StagedFunction fab = base.with_term(a).with_term(b);
    StagedFunction fa = base.with_term(a);
    StagedFunction fb = base.with_term(b);
    std::mt19937 rng(29);
    for (int i = 0; i < 10; ++i) {
        GaussianRational z = tu::random_gaussian(rng, 2, 3);
        ComplexBox zb = ComplexBox::exact(z, 192);
        ComplexBox lhs = fab.eval_deriv_box(zb, 192);
        ComplexBox rhs = bsub(badd(fa.eval_deriv_box(zb, 192), fb.eval_deriv_box(zb, 192), 192),
                              base.eval_deriv_box(zb, 192), 192);
        CHECK(!lhs.disjoint_from(rhs));
    }
}

TEST_CASE("tail certificate: decreasing in the stage, dominated by the display bound") {
    SymContext ctx;
    StagedFunction f = make_staged(ctx, "exp", ctx.exact(0L));
    auto theta = [](long k) {
        Rational t(1, 2);
        t /= Rational(kernel::factorial(k));
        return t;
    };
    BigFloat prev = BigFloat::pos_inf();
    for (int n : {2, 3, 4, 6}) {
        BigFloat t = tail_certificate(f, Rational(1), n, theta);
        CHECK(t < prev);
        CHECK(t.is_pos());
        prev = t;
        // display-form oracle: sum_{m>n} (2/m) (1/m)^{m+2}
        double display = 0;
        for (int m = n + 1; m < n + 60; ++m) display += (2.0 / m) * std::pow(1.0 / m, m + 2);
        CHECK(t.to_double() <= display);
    }
    // R = 0 collapses below the displayed constant-term tail
    BigFloat t0 = tail_certificate(f, Rational(0), 3, theta);
    double display0 = 0;
    for (int m = 4; m < 60; ++m) display0 += (1.0 / m) * std::pow(1.0 / m, m + 2);
    CHECK(t0.to_double() <= display0);
}

TEST_CASE("tail certificate rejects a schedule violation") {
    SymContext ctx;
    StagedFunction f = make_staged(ctx, "exp", ctx.exact(0L));
    PerturbationTerm t = simple_term(ctx.exact(Rational(1, 2)), 2);
    t.nu = Rational(1, 1000); // |eps| = 1/2 breaks this
    f = f.with_term(t);
    auto theta = [](long k) { return Rational(1, 2) / Rational(kernel::factorial(k)); };
    CHECK_THROWS_AS(tail_certificate(f, Rational(1), 2, theta), InvalidSchedule);
}
