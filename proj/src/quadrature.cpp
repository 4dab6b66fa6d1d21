#include "orbitforge/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "orbitforge/errors.hpp"
#include "orbitforge/kernels.hpp"
#include "orbitforge/polynomial.hpp"

namespace orbitforge {

static const Prec RP = ComplexBox::kRadPrec;

namespace {

// exact Legendre polynomial by the three-term recurrence
GPoly legendre(int n) {
    GPoly p0 = GPoly::one();
    if (n == 0) return p0;
    GPoly x = GPoly::monomial(1, GaussianRational(1));
    GPoly p1 = x;
    for (int k = 1; k < n; ++k) {
        // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
        GPoly next = (x * p1).scaled(GaussianRational(Rational(2 * k + 1, k + 1))) -
                     p0.scaled(GaussianRational(Rational(k, k + 1)));
        p0 = p1;
        p1 = next;
    }
    return p1;
}

// local Krawczyk existence/uniqueness for a simple real root of an exact poly
ComplexBox certify_root(const GPoly& P, const GPoly& dP, double guess, Prec p) {
    // Newton polish at precision p
    BigComplex z = BigComplex::from_doubles(guess, 0.0, p);
    for (int it = 0; it < 64; ++it) {
        ComplexBox pz = P.eval_box(ComplexBox::point(z), p);
        ComplexBox dz = dP.eval_box(ComplexBox::point(z), p);
        BigComplex step = cdiv(pz.center(), dz.center(), p);
        z = csub(z, step, p);
        if (cabs_up(step, RP).cmp_d(1e-40) < 0 && it > 4) break;
    }
    // candidate box and Krawczyk check
    for (int widen = 0; widen < 40; ++widen) {
        BigFloat r = BigFloat::pow2(-(long)(p / 2) + widen * 4);
        ComplexBox X(z, r);
        ComplexBox Fz = P.eval_box(ComplexBox::point(z), p);
        ComplexBox dFX = dP.eval_box(X, p);
        ComplexBox lambda = dP.eval_box(ComplexBox::point(z), p);
        if (!lambda.surely_excludes_zero()) continue;
        ComplexBox corr = bdiv(Fz, lambda, p);
        ComplexBox one = ComplexBox::exact(GaussianRational(1), p);
        ComplexBox q = bsub(one, bdiv(dFX, lambda, p), p);
        // K = z - corr + q * B(0, r)
        BigFloat krad = add_up(mul_up(q.abs_upper(), r, RP), corr.radius(), RP);
        BigComplex kc = csub(z, corr.center(), p);
        ComplexBox K({kc}, add_up(krad, add_up(kc.re.ulp(), kc.im.ulp(), RP), RP));
        if (K.inside_interior_of(X)) return K;
    }
    throw QuadratureFailure("could not certify a Legendre node near " + std::to_string(guess));
}

} // namespace

const GaussLegendreRule& gauss_legendre_rule(int n, Prec p) {
    static std::map<std::pair<int, Prec>, GaussLegendreRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> g(mu);
    auto key = std::make_pair(n, p);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    GPoly P = legendre(n);
    GPoly dP = P.derivative();
    GaussLegendreRule rule;
    rule.n = n;
    for (int i = 1; i <= n; ++i) {
        double guess = std::cos(M_PI * (i - 0.25) / (n + 0.5));
        ComplexBox node = certify_root(P, dP, guess, p);
        // w = 2 / ((1 - x^2) P'(x)^2)
        ComplexBox one = ComplexBox::exact(GaussianRational(1), p);
        ComplexBox dpx = dP.eval_box(node, p);
        ComplexBox w = bdiv(ComplexBox::exact(GaussianRational(2L), p),
                            bmul(bsub(one, bmul(node, node, p), p), bmul(dpx, dpx, p), p), p);
        rule.nodes.push_back(node);
        rule.weights.push_back(w);
    }
    return cache.emplace(key, std::move(rule)).first->second;
}

ComplexBox integrate_01(const std::function<ComplexBox(const ComplexBox&, Prec)>& integrand,
                        int n, int segments, Prec p,
                        const std::function<BigFloat(int)>& deriv_bound) {
    const GaussLegendreRule& rule = gauss_legendre_rule(n, p);
    Rational h(1, segments);
    ComplexBox total = ComplexBox::exact(GaussianRational(0), p);
    for (int s = 0; s < segments; ++s) {
        Rational mid = (Rational(s) + Rational(1, 2)) * h;
        mid.canonicalize();
        ComplexBox midb = ComplexBox::exact_rational(mid, p);
        ComplexBox half = ComplexBox::exact_rational(h / 2, p);
        ComplexBox seg = ComplexBox::exact(GaussianRational(0), p);
        for (int i = 0; i < n; ++i) {
            ComplexBox t = badd(midb, bmul(half, rule.nodes[i], p), p);
            seg = badd(seg, bmul(rule.weights[i], integrand(t, p), p), p);
        }
        seg = bmul(seg, half, p);
        total = badd(total, seg, p);
    }
    // remainder: segments * h^{2n+1} (n!)^4 / ((2n+1)((2n)!)^3) * sup|f^{(2n)}|
    Integer nf = kernel::factorial(n);
    Integer n2f = kernel::factorial(2 * n);
    Rational c(nf * nf * nf * nf, Integer(2 * n + 1) * n2f * n2f * n2f);
    c.canonicalize();
    Rational hpow = 1;
    for (int i = 0; i < 2 * n + 1; ++i) hpow *= h;
    BigFloat err = mul_up(BigFloat::from_rational(Rational(segments) * hpow * c, RP, MPFR_RNDU),
                          deriv_bound(2 * n), RP);
    if (!err.is_finite()) throw QuadratureFailure("unbounded derivative estimate");
    return total.widened(err);
}

} // namespace orbitforge
