#include "orbitforge/complexbox.hpp"

#include <sstream>

namespace orbitforge {

static const Prec RP = ComplexBox::kRadPrec;

BigComplex cadd(const BigComplex& a, const BigComplex& b, Prec p) {
    return {fadd(a.re, b.re, p, MPFR_RNDN), fadd(a.im, b.im, p, MPFR_RNDN)};
}
BigComplex csub(const BigComplex& a, const BigComplex& b, Prec p) {
    return {fsub(a.re, b.re, p, MPFR_RNDN), fsub(a.im, b.im, p, MPFR_RNDN)};
}
BigComplex cmul(const BigComplex& a, const BigComplex& b, Prec p) {
    BigFloat re = fsub(fmul(a.re, b.re, p, MPFR_RNDN), fmul(a.im, b.im, p, MPFR_RNDN), p, MPFR_RNDN);
    BigFloat im = fadd(fmul(a.re, b.im, p, MPFR_RNDN), fmul(a.im, b.re, p, MPFR_RNDN), p, MPFR_RNDN);
    return {re, im};
}
BigComplex cdiv(const BigComplex& a, const BigComplex& b, Prec p) {
    BigFloat n = fadd(fmul(b.re, b.re, p, MPFR_RNDN), fmul(b.im, b.im, p, MPFR_RNDN), p, MPFR_RNDN);
    BigComplex num = cmul(a, {b.re, fneg(b.im, p)}, p);
    return {fdiv(num.re, n, p, MPFR_RNDN), fdiv(num.im, n, p, MPFR_RNDN)};
}
BigComplex cneg(const BigComplex& a, Prec p) {
    return {fneg(a.re, p), fneg(a.im, p)};
}
// Trig argument reduction needs ~exponent(x) bits of pi; refuse absurd
// arguments instead of stalling inside mpfr.
bool trig_arg_sane(const BigFloat& x) {
    if (!x.is_finite()) return false;
    if (x.is_zero()) return true;
    return mpfr_get_exp(x.raw()) <= (mpfr_exp_t)1 << 16;
}

BigComplex cexp(const BigComplex& a, Prec p) {
    if (!trig_arg_sane(a.im)) {
        BigFloat nan(p);
        mpfr_set_nan(nan.raw());
        return {nan, nan};
    }
    BigFloat m = fexp(a.re, p, MPFR_RNDN);
    BigFloat s(p), c(p);
    mpfr_sin_cos(s.raw(), c.raw(), a.im.raw(), MPFR_RNDN);
    return {fmul(m, c, p, MPFR_RNDN), fmul(m, s, p, MPFR_RNDN)};
}
BigComplex clog(const BigComplex& a, Prec p) {
    BigFloat n2 = fadd(fmul(a.re, a.re, p, MPFR_RNDN), fmul(a.im, a.im, p, MPFR_RNDN), p, MPFR_RNDN);
    BigFloat lr(p);
    mpfr_log(lr.raw(), n2.raw(), MPFR_RNDN);
    lr = fmul(lr, BigFloat(0.5, p), p, MPFR_RNDN);
    BigFloat th(p);
    mpfr_atan2(th.raw(), a.im.raw(), a.re.raw(), MPFR_RNDN);
    return {lr, th};
}
BigFloat cabs_up(const BigComplex& a, Prec p) {
    BigFloat h(p);
    mpfr_hypot(h.raw(), a.re.raw(), a.im.raw(), MPFR_RNDU);
    return h;
}
BigFloat cabs_down(const BigComplex& a, Prec p) {
    BigFloat h(p);
    mpfr_hypot(h.raw(), a.re.raw(), a.im.raw(), MPFR_RNDD);
    return h;
}

// --- ComplexBox ---------------------------------------------------------

ComplexBox ComplexBox::exact(const GaussianRational& g, Prec p) {
    BigFloat re = BigFloat::from_rational(g.re, p, MPFR_RNDN);
    BigFloat im = BigFloat::from_rational(g.im, p, MPFR_RNDN);
    BigFloat r = add_up(re.ulp(), im.ulp(), RP);
    return ComplexBox({re, im}, r);
}
ComplexBox ComplexBox::exact_rational(const Rational& q, Prec p) {
    return exact(GaussianRational(q), p);
}
ComplexBox ComplexBox::point(const BigComplex& z) {
    return ComplexBox(z, BigFloat::zero(RP));
}
ComplexBox ComplexBox::whole_plane() {
    return ComplexBox({BigFloat(0, 16), BigFloat(0, 16)}, BigFloat::pos_inf());
}

BigFloat ComplexBox::abs_upper() const {
    if (!is_bounded()) return BigFloat::pos_inf();
    return add_up(cabs_up(c_, RP), r_, RP);
}
BigFloat ComplexBox::abs_lower() const {
    if (!is_bounded()) return BigFloat::zero();
    BigFloat d = sub_down(cabs_down(c_, RP), r_, RP);
    return d.is_neg() ? BigFloat::zero() : d;
}
BigFloat ComplexBox::re_lower() const { return sub_down(c_.re, r_, RP); }
BigFloat ComplexBox::re_upper() const { return add_up(c_.re, r_, RP); }
BigFloat ComplexBox::im_lower() const { return sub_down(c_.im, r_, RP); }
BigFloat ComplexBox::im_upper() const { return add_up(c_.im, r_, RP); }

bool ComplexBox::surely_excludes_zero() const {
    if (!is_bounded()) return false;
    return cabs_down(c_, RP) > r_;
}
// Certified |center - g| bounds: route through ball subtraction so that the
// rational-to-float conversion error is carried in a radius, not guessed.
static std::pair<BigFloat, BigFloat> center_point_dist(const ComplexBox& box, const GaussianRational& g) {
    Prec p = box.prec();
    ComplexBox d = bsub(ComplexBox::point(box.center()), ComplexBox::exact(g, p), p);
    return {d.abs_lower(), d.abs_upper()};
}

bool ComplexBox::surely_contains(const GaussianRational& g) const {
    if (!is_bounded()) return false;
    return center_point_dist(*this, g).second < r_;
}
bool ComplexBox::surely_excludes(const GaussianRational& g) const {
    if (!is_bounded()) return false;
    return center_point_dist(*this, g).first > r_;
}

BigFloat ComplexBox::dist_lower(const ComplexBox& o) const {
    if (!is_bounded() || !o.is_bounded()) return BigFloat::zero();
    Prec p = std::max(prec(), o.prec());
    BigComplex d = csub(c_, o.c_, p);
    BigFloat lo = cabs_down(d, RP);
    lo = sub_down(lo, add_up(d.re.ulp(), d.im.ulp(), RP), RP);
    lo = sub_down(lo, add_up(r_, o.r_, RP), RP);
    return lo.is_neg() ? BigFloat::zero() : lo;
}
bool ComplexBox::disjoint_from(const ComplexBox& o) const {
    return dist_lower(o).is_pos();
}
bool ComplexBox::inside_interior_of(const ComplexBox& o) const {
    if (!is_bounded() || !o.is_bounded()) return false;
    Prec p = std::max(prec(), o.prec());
    BigComplex d = csub(c_, o.c_, p);
    BigFloat up = add_up(cabs_up(d, RP), add_up(d.re.ulp(), d.im.ulp(), RP), RP);
    up = add_up(up, r_, RP);
    return up < o.r_;
}

ComplexBox ComplexBox::widened(const BigFloat& extra) const {
    return ComplexBox(c_, add_up(r_, extra, RP));
}

std::string ComplexBox::str() const {
    std::ostringstream os;
    os << "(" << c_.re.to_decimal(12) << " + " << c_.im.to_decimal(12)
       << " i) +- " << r_.to_decimal(6);
    return os.str();
}

// --- ball arithmetic ----------------------------------------------------

// Per-component rounding slack for a center computed through round-to-nearest
// mpfr ops: callers pass the accumulated ulp bound.
static ComplexBox finish(BigComplex c, BigFloat rad, const BigFloat& center_err) {
    if (!c.is_finite() || !rad.is_finite()) return ComplexBox::whole_plane();
    return ComplexBox(std::move(c), add_up(rad, center_err, RP));
}

ComplexBox badd(const ComplexBox& a, const ComplexBox& b, Prec p) {
    if (!a.is_bounded() || !b.is_bounded()) return ComplexBox::whole_plane();
    BigFloat re = fadd(a.center().re, b.center().re, p, MPFR_RNDN);
    BigFloat im = fadd(a.center().im, b.center().im, p, MPFR_RNDN);
    BigFloat err = add_up(re.ulp(), im.ulp(), RP);
    return finish({re, im}, add_up(a.radius(), b.radius(), RP), err);
}
ComplexBox bsub(const ComplexBox& a, const ComplexBox& b, Prec p) {
    return badd(a, bneg(b, p), p);
}
ComplexBox bneg(const ComplexBox& a, Prec p) {
    if (!a.is_bounded()) return ComplexBox::whole_plane();
    return ComplexBox(cneg(a.center(), p), a.radius());
}
ComplexBox bmul(const ComplexBox& a, const ComplexBox& b, Prec p) {
    if (!a.is_bounded() || !b.is_bounded()) return ComplexBox::whole_plane();
    const BigComplex& x = a.center();
    const BigComplex& y = b.center();
    BigFloat m1 = fmul(x.re, y.re, p, MPFR_RNDN);
    BigFloat m2 = fmul(x.im, y.im, p, MPFR_RNDN);
    BigFloat m3 = fmul(x.re, y.im, p, MPFR_RNDN);
    BigFloat m4 = fmul(x.im, y.re, p, MPFR_RNDN);
    BigFloat re = fsub(m1, m2, p, MPFR_RNDN);
    BigFloat im = fadd(m3, m4, p, MPFR_RNDN);
    BigFloat err = add_up(add_up(m1.ulp(), m2.ulp(), RP), add_up(m3.ulp(), m4.ulp(), RP), RP);
    err = add_up(err, add_up(re.ulp(), im.ulp(), RP), RP);
    BigFloat ax = cabs_up(x, RP), ay = cabs_up(y, RP);
    BigFloat rad = add_up(mul_up(ax, b.radius(), RP), mul_up(ay, a.radius(), RP), RP);
    rad = add_up(rad, mul_up(a.radius(), b.radius(), RP), RP);
    return finish({re, im}, rad, err);
}

ComplexBox binv(const ComplexBox& a, Prec p) {
    if (!a.is_bounded() || !a.surely_excludes_zero())
        throw DivisionByEnclosedZero("inverse of box " + a.str());
    const BigComplex& c = a.center();
    // d = |c|^2 - r^2 > 0; the exact image of B(c,r) under 1/z is
    // B(conj(c)/d, r/d).
    BigFloat c2_lo = fadd(fmul(c.re, c.re, RP * 2, MPFR_RNDD), fmul(c.im, c.im, RP * 2, MPFR_RNDD),
                          RP * 2, MPFR_RNDD);
    BigFloat c2_hi = fadd(fmul(c.re, c.re, RP * 2, MPFR_RNDU), fmul(c.im, c.im, RP * 2, MPFR_RNDU),
                          RP * 2, MPFR_RNDU);
    BigFloat d_lo = sub_down(c2_lo, mul_up(a.radius(), a.radius(), RP), RP);
    BigFloat d_hi = c2_hi; // true d = |c|^2 - r^2 <= |c|^2
    if (!d_lo.is_pos()) throw DivisionByEnclosedZero("inverse of box " + a.str());
    BigFloat dn = fadd(fmul(c.re, c.re, p, MPFR_RNDN), fmul(c.im, c.im, p, MPFR_RNDN), p, MPFR_RNDN);
    dn = fsub(dn, fmul(a.radius(), a.radius(), p, MPFR_RNDN), p, MPFR_RNDN);
    BigFloat re = fdiv(c.re, dn, p, MPFR_RNDN);
    BigFloat im = fdiv(fneg(c.im, p), dn, p, MPFR_RNDN);
    // center error: component magnitude * (d_hi - d_lo) / (d_lo^2) + op ulps;
    // dn itself sits within [d_lo, d_hi] up to a few ulps, folded into spread.
    BigFloat spread = fsub(d_hi, d_lo, RP, MPFR_RNDU);
    spread = add_up(spread, mul_up(dn.ulp(), BigFloat(4, RP), RP), RP);
    BigFloat cerr = div_up(mul_up(cabs_up(c, RP), spread, RP), fmul(d_lo, d_lo, RP, MPFR_RNDD), RP);
    cerr = add_up(cerr, add_up(re.ulp(), im.ulp(), RP), RP);
    cerr = add_up(cerr, add_up(dn.ulp(), dn.ulp(), RP), RP);
    BigFloat rad = div_up(a.radius(), d_lo, RP);
    return finish({re, im}, rad, cerr);
}

ComplexBox bdiv(const ComplexBox& a, const ComplexBox& b, Prec p) {
    return bmul(a, binv(b, p), p);
}

ComplexBox bpow_ui(const ComplexBox& a, unsigned long e, Prec p) {
    ComplexBox acc = ComplexBox::exact(GaussianRational(1), p);
    ComplexBox base = a;
    while (e) {
        if (e & 1) acc = bmul(acc, base, p);
        e >>= 1;
        if (e) base = bmul(base, base, p);
    }
    return acc;
}

ComplexBox bscale(const ComplexBox& a, const Rational& q, Prec p) {
    return bmul(a, ComplexBox::exact_rational(q, p), p);
}

ComplexBox bexp(const ComplexBox& a, Prec p) {
    if (!a.is_bounded() || !trig_arg_sane(a.center().im) || !trig_arg_sane(a.radius()) ||
        !trig_arg_sane(a.center().re))
        return ComplexBox::whole_plane();
    const BigComplex& c = a.center();
    BigComplex ec = cexp(c, p);
    if (!ec.is_finite()) return ComplexBox::whole_plane();
    // |exp(z) - exp(c)| <= sup_{B} |exp| * |z - c| <= e^{Re c + r} * r
    BigFloat sup = fexp(add_up(c.re, a.radius(), RP), RP, MPFR_RNDU);
    BigFloat rad = mul_up(sup, a.radius(), RP);
    BigFloat err = add_up(ec.re.ulp(), ec.im.ulp(), RP);
    err = mul_up(err, BigFloat(4, RP), RP); // exp/sin/cos/mul rounding chain
    return finish(ec, rad, err);
}

static BigFloat trig_deriv_sup(const ComplexBox& a) {
    // |sin'(z)| = |cos(z)| <= cosh(Im z); same bound for |cos'|.
    BigFloat b = fmax(fabsf_(a.im_lower(), RP, MPFR_RNDU), fabsf_(a.im_upper(), RP, MPFR_RNDU));
    BigFloat arg = add_up(b, a.radius(), RP);
    BigFloat ch(RP);
    mpfr_cosh(ch.raw(), arg.raw(), MPFR_RNDU);
    return ch;
}

ComplexBox bsin(const ComplexBox& a, Prec p) {
    if (!a.is_bounded() || !trig_arg_sane(a.center().re) || !trig_arg_sane(a.center().im) ||
        !trig_arg_sane(a.radius()))
        return ComplexBox::whole_plane();
    const BigComplex& c = a.center();
    // sin(x+iy) = sin x cosh y + i cos x sinh y
    BigFloat s(p), co(p), sh(p), ch(p);
    mpfr_sin_cos(s.raw(), co.raw(), c.re.raw(), MPFR_RNDN);
    mpfr_sinh_cosh(sh.raw(), ch.raw(), c.im.raw(), MPFR_RNDN);
    BigFloat re = fmul(s, ch, p, MPFR_RNDN);
    BigFloat im = fmul(co, sh, p, MPFR_RNDN);
    BigFloat err = add_up(re.ulp(), im.ulp(), RP);
    err = mul_up(err, BigFloat(6, RP), RP);
    BigFloat rad = mul_up(trig_deriv_sup(a), a.radius(), RP);
    return finish({re, im}, rad, err);
}

ComplexBox bcos(const ComplexBox& a, Prec p) {
    if (!a.is_bounded() || !trig_arg_sane(a.center().re) || !trig_arg_sane(a.center().im) ||
        !trig_arg_sane(a.radius()))
        return ComplexBox::whole_plane();
    const BigComplex& c = a.center();
    // cos(x+iy) = cos x cosh y - i sin x sinh y
    BigFloat s(p), co(p), sh(p), ch(p);
    mpfr_sin_cos(s.raw(), co.raw(), c.re.raw(), MPFR_RNDN);
    mpfr_sinh_cosh(sh.raw(), ch.raw(), c.im.raw(), MPFR_RNDN);
    BigFloat re = fmul(co, ch, p, MPFR_RNDN);
    BigFloat im = fneg(fmul(s, sh, p, MPFR_RNDN), p);
    BigFloat err = add_up(re.ulp(), im.ulp(), RP);
    err = mul_up(err, BigFloat(6, RP), RP);
    BigFloat rad = mul_up(trig_deriv_sup(a), a.radius(), RP);
    return finish({re, im}, rad, err);
}

std::optional<ArgRange> arg_range(const ComplexBox& b, Prec p) {
    if (!b.surely_excludes_zero()) return std::nullopt;
    const BigComplex& c = b.center();
    BigFloat phi(p);
    mpfr_atan2(phi.raw(), c.im.raw(), c.re.raw(), MPFR_RNDN);
    BigFloat ratio = div_up(b.radius(), cabs_down(c, RP), RP);
    if (ratio.cmp_d(1.0) >= 0) return std::nullopt;
    BigFloat half(RP);
    mpfr_asin(half.raw(), ratio.raw(), MPFR_RNDU);
    half = add_up(half, mul_up(phi.ulp(), BigFloat(4, RP), RP), RP);
    return ArgRange{phi, half};
}

} // namespace orbitforge
