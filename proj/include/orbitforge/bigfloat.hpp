#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

#include "orbitforge/errors.hpp"

namespace orbitforge {

using Prec = mpfr_prec_t;
using Rational = mpq_class;
using Integer = mpz_class;

// Widens the mpfr exponent range so deep iterates of exp-type functions
// saturate gracefully instead of overflowing at the default 2^30 cap.
void init_numeric();

// Value-semantic wrapper over mpfr_t. Every arithmetic helper takes an
// explicit precision and rounding mode; radius-style computations use the
// *_up helpers which always round away from the true value.
class BigFloat {
  public:
    BigFloat() { mpfr_init2(v_, 64); mpfr_set_zero(v_, 1); }
    explicit BigFloat(Prec prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    BigFloat(double d, Prec prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, d, MPFR_RNDN); }
    BigFloat(long n, Prec prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, n, MPFR_RNDN); }
    BigFloat(int n, Prec prec) : BigFloat((long)n, prec) {}

    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, 64);
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat from_rational(const Rational& q, Prec prec, mpfr_rnd_t rnd) {
        BigFloat r(prec);
        mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
        return r;
    }
    static BigFloat from_integer(const Integer& z, Prec prec, mpfr_rnd_t rnd) {
        BigFloat r(prec);
        mpfr_set_z(r.v_, z.get_mpz_t(), rnd);
        return r;
    }
    // Exact power of two, cheap to build at any precision.
    static BigFloat pow2(long e) {
        BigFloat r((Prec)16);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }
    static BigFloat zero(Prec prec = 16) { return BigFloat(prec); }
    static BigFloat pos_inf() {
        BigFloat r((Prec)16);
        mpfr_set_inf(r.v_, 1);
        return r;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    Prec prec() const { return mpfr_get_prec(v_); }

    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_neg() const { return mpfr_sgn(v_) < 0; }
    bool is_pos() const { return mpfr_sgn(v_) > 0; }
    int sgn() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    int cmp(const BigFloat& o) const { return mpfr_cmp(v_, o.v_); }
    bool operator<(const BigFloat& o) const { return cmp(o) < 0; }
    bool operator<=(const BigFloat& o) const { return cmp(o) <= 0; }
    bool operator>(const BigFloat& o) const { return cmp(o) > 0; }
    bool operator>=(const BigFloat& o) const { return cmp(o) >= 0; }
    bool operator==(const BigFloat& o) const { return cmp(o) == 0; }

    int cmp_d(double d) const { return mpfr_cmp_d(v_, d); }
    int cmp_q(const Rational& q) const { return mpfr_cmp_q(v_, q.get_mpq_t()); }

    // One-ulp bound on the rounding error of the value held here; an upper
    // bound for the <=0.5ulp error of any single correctly rounded op.
    BigFloat ulp() const {
        if (mpfr_zero_p(v_)) return pow2(mpfr_get_emin());
        if (!mpfr_number_p(v_)) return pos_inf();
        return pow2(mpfr_get_exp(v_) - mpfr_get_prec(v_) + 1);
    }

    // Deterministic textual form: sign, hex mantissa, binary exponent.
    std::string to_hex() const;
    static BigFloat from_hex(const std::string& s, Prec prec);

    std::string to_decimal(size_t digits = 20) const;

  private:
    mpfr_t v_;
};

// --- rounded primitives ------------------------------------------------

inline BigFloat fadd(const BigFloat& a, const BigFloat& b, Prec p, mpfr_rnd_t r) {
    BigFloat out(p);
    mpfr_add(out.raw(), a.raw(), b.raw(), r);
    return out;
}
inline BigFloat fsub(const BigFloat& a, const BigFloat& b, Prec p, mpfr_rnd_t r) {
    BigFloat out(p);
    mpfr_sub(out.raw(), a.raw(), b.raw(), r);
    return out;
}
inline BigFloat fmul(const BigFloat& a, const BigFloat& b, Prec p, mpfr_rnd_t r) {
    BigFloat out(p);
    mpfr_mul(out.raw(), a.raw(), b.raw(), r);
    return out;
}
inline BigFloat fdiv(const BigFloat& a, const BigFloat& b, Prec p, mpfr_rnd_t r) {
    BigFloat out(p);
    mpfr_div(out.raw(), a.raw(), b.raw(), r);
    return out;
}
inline BigFloat fneg(const BigFloat& a, Prec p) {
    BigFloat out(p);
    mpfr_neg(out.raw(), a.raw(), MPFR_RNDN);
    return out;
}
inline BigFloat fabsf_(const BigFloat& a, Prec p, mpfr_rnd_t r) {
    BigFloat out(p);
    mpfr_abs(out.raw(), a.raw(), r);
    return out;
}
inline BigFloat fsqrt(const BigFloat& a, Prec p, mpfr_rnd_t r) {
    BigFloat out(p);
    mpfr_sqrt(out.raw(), a.raw(), r);
    return out;
}
inline BigFloat fexp(const BigFloat& a, Prec p, mpfr_rnd_t r) {
    BigFloat out(p);
    mpfr_exp(out.raw(), a.raw(), r);
    return out;
}
inline BigFloat flog(const BigFloat& a, Prec p, mpfr_rnd_t r) {
    BigFloat out(p);
    mpfr_log(out.raw(), a.raw(), r);
    return out;
}
inline BigFloat fpow_ui(const BigFloat& a, unsigned long e, Prec p, mpfr_rnd_t r) {
    BigFloat out(p);
    mpfr_pow_ui(out.raw(), a.raw(), e, r);
    return out;
}
inline BigFloat fmul_si(const BigFloat& a, long k, Prec p, mpfr_rnd_t r) {
    BigFloat out(p);
    mpfr_mul_si(out.raw(), a.raw(), k, r);
    return out;
}

// Upward-rounded helpers for radius/error bookkeeping.
inline BigFloat add_up(const BigFloat& a, const BigFloat& b, Prec p) { return fadd(a, b, p, MPFR_RNDU); }
inline BigFloat sub_down(const BigFloat& a, const BigFloat& b, Prec p) { return fsub(a, b, p, MPFR_RNDD); }
inline BigFloat mul_up(const BigFloat& a, const BigFloat& b, Prec p) { return fmul(a, b, p, MPFR_RNDU); }
inline BigFloat div_up(const BigFloat& a, const BigFloat& b, Prec p) { return fdiv(a, b, p, MPFR_RNDU); }
inline BigFloat div_down(const BigFloat& a, const BigFloat& b, Prec p) { return fdiv(a, b, p, MPFR_RNDD); }

inline BigFloat fmax(const BigFloat& a, const BigFloat& b) { return a >= b ? a : b; }
inline BigFloat fmin(const BigFloat& a, const BigFloat& b) { return a <= b ? a : b; }

// Enclosure of pi as [lo, hi] at precision p.
std::pair<BigFloat, BigFloat> pi_bounds(Prec p);

// Upper bound of a rational as a dyadic rational (exact numerator over a
// power of two), usable where certified rational bounds are needed.
Rational rational_upper_bound(const BigFloat& x);
Rational rational_lower_bound(const BigFloat& x);

} // namespace orbitforge
