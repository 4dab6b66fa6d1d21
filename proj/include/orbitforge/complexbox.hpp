#pragma once

#include <optional>
#include <string>

#include "orbitforge/bigfloat.hpp"
#include "orbitforge/rational.hpp"

namespace orbitforge {

// Plain complex point arithmetic (round-to-nearest, uncertified). Used for
// Newton polishing; all certified claims go through ComplexBox.
struct BigComplex {
    BigFloat re, im;

    BigComplex() = default;
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
    static BigComplex from_gaussian(const GaussianRational& g, Prec p) {
        return {BigFloat::from_rational(g.re, p, MPFR_RNDN),
                BigFloat::from_rational(g.im, p, MPFR_RNDN)};
    }
    static BigComplex from_doubles(double r, double i, Prec p) {
        return {BigFloat(r, p), BigFloat(i, p)};
    }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }
};

BigComplex cadd(const BigComplex& a, const BigComplex& b, Prec p);
BigComplex csub(const BigComplex& a, const BigComplex& b, Prec p);
BigComplex cmul(const BigComplex& a, const BigComplex& b, Prec p);
BigComplex cdiv(const BigComplex& a, const BigComplex& b, Prec p);
BigComplex cneg(const BigComplex& a, Prec p);
BigComplex cexp(const BigComplex& a, Prec p);
BigComplex clog(const BigComplex& a, Prec p); // principal branch
BigFloat cabs_up(const BigComplex& a, Prec p);
BigFloat cabs_down(const BigComplex& a, Prec p);

// Mid-rad complex ball: center (high-precision complex) + radius.
// Containment is the contract: every operation returns a box containing the
// exact image of the operand boxes. Radius never shrinks except through
// re-enclosure at higher precision of the underlying value.
class ComplexBox {
  public:
    static constexpr Prec kRadPrec = 64;

    ComplexBox() : c_{BigFloat(2), BigFloat(2)}, r_(BigFloat::zero()) {}
    ComplexBox(BigComplex c, BigFloat r) : c_(std::move(c)), r_(std::move(r)) {}

    static ComplexBox exact(const GaussianRational& g, Prec p);
    static ComplexBox exact_rational(const Rational& q, Prec p);
    static ComplexBox point(const BigComplex& z);       // radius 0 at z's bits
    static ComplexBox whole_plane();                    // infinite radius

    const BigComplex& center() const { return c_; }
    const BigFloat& radius() const { return r_; }
    Prec prec() const { return c_.re.prec(); }

    bool is_bounded() const { return c_.is_finite() && r_.is_finite(); }

    BigFloat abs_upper() const;   // >= sup |z| over the box
    BigFloat abs_lower() const;   // <= inf |z| over the box (clamped at 0)
    BigFloat re_lower() const;
    BigFloat re_upper() const;
    BigFloat im_lower() const;
    BigFloat im_upper() const;

    bool surely_excludes_zero() const;
    bool may_contain_zero() const { return !surely_excludes_zero(); }
    bool surely_contains(const GaussianRational& g) const;
    bool surely_excludes(const GaussianRational& g) const;
    bool may_contain(const GaussianRational& g) const { return !surely_excludes(g); }

    // |this - o| certified bounds
    BigFloat dist_lower(const ComplexBox& o) const;
    bool disjoint_from(const ComplexBox& o) const;
    bool inside_interior_of(const ComplexBox& o) const; // strict subset test
    bool overlaps(const ComplexBox& o) const { return !disjoint_from(o); }

    ComplexBox widened(const BigFloat& extra) const;

    std::string str() const;

  private:
    BigComplex c_;
    BigFloat r_;
};

ComplexBox badd(const ComplexBox& a, const ComplexBox& b, Prec p);
ComplexBox bsub(const ComplexBox& a, const ComplexBox& b, Prec p);
ComplexBox bneg(const ComplexBox& a, Prec p);
ComplexBox bmul(const ComplexBox& a, const ComplexBox& b, Prec p);
ComplexBox binv(const ComplexBox& a, Prec p); // throws DivisionByEnclosedZero
ComplexBox bdiv(const ComplexBox& a, const ComplexBox& b, Prec p);
ComplexBox bpow_ui(const ComplexBox& a, unsigned long e, Prec p);
ComplexBox bscale(const ComplexBox& a, const Rational& q, Prec p);

// Entire-kernel enclosures via mean-value bounds on the disk.
ComplexBox bexp(const ComplexBox& a, Prec p);
ComplexBox bsin(const ComplexBox& a, Prec p);
ComplexBox bcos(const ComplexBox& a, Prec p);

// Argument range of a zero-excluding box: returns (phi, half_width) with the
// true argument of every point in [phi - half_width, phi + half_width].
struct ArgRange {
    BigFloat phi;
    BigFloat half_width;
};
std::optional<ArgRange> arg_range(const ComplexBox& b, Prec p);

} // namespace orbitforge
