#pragma once

#include <random>

#include "orbitforge/bigfloat.hpp"
#include "orbitforge/complexbox.hpp"
#include "orbitforge/rational.hpp"

namespace tu {

using namespace orbitforge;

struct NumericInit {
    NumericInit() { init_numeric(); }
};
inline NumericInit numeric_init_once;

inline Rational random_rational(std::mt19937& rng, long max_abs = 8, long max_den = 8) {
    std::uniform_int_distribution<long> num(-max_abs, max_abs);
    std::uniform_int_distribution<long> den(1, max_den);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline GaussianRational random_gaussian(std::mt19937& rng, long max_abs = 8, long max_den = 8) {
    return {random_rational(rng, max_abs, max_den), random_rational(rng, max_abs, max_den)};
}

// plain high-precision point arithmetic used as the independent oracle
inline BigComplex osin(const BigComplex& a, Prec p) {
    BigFloat s(p), c(p), sh(p), ch(p);
    mpfr_sin_cos(s.raw(), c.raw(), a.re.raw(), MPFR_RNDN);
    mpfr_sinh_cosh(sh.raw(), ch.raw(), a.im.raw(), MPFR_RNDN);
    return {fmul(s, ch, p, MPFR_RNDN), fmul(c, sh, p, MPFR_RNDN)};
}
inline BigComplex ocos(const BigComplex& a, Prec p) {
    BigFloat s(p), c(p), sh(p), ch(p);
    mpfr_sin_cos(s.raw(), c.raw(), a.re.raw(), MPFR_RNDN);
    mpfr_sinh_cosh(sh.raw(), ch.raw(), a.im.raw(), MPFR_RNDN);
    return {fmul(c, ch, p, MPFR_RNDN), fneg(fmul(s, sh, p, MPFR_RNDN), p)};
}

// point clearly inside the box (up to oracle noise at precision p >> box prec)
inline bool box_contains_point(const ComplexBox& box, const BigComplex& pt) {
    if (!box.is_bounded()) return true;
    Prec p = std::max(box.prec(), pt.re.prec());
    BigComplex d = csub(box.center(), pt, p);
    BigFloat dist = cabs_up(d, 64);
    BigFloat slack = add_up(box.radius(), BigFloat::pow2(-(long)pt.re.prec() / 2), 64);
    return dist <= slack;
}

} // namespace tu
