#include "orbitforge/bigfloat.hpp"

#include <cstdlib>
#include <cstring>
#include <mutex>
#include <sstream>
#include <vector>

namespace orbitforge {

void init_numeric() {
    static std::once_flag once;
    std::call_once(once, [] {
        mpfr_set_emin(mpfr_get_emin_min());
        mpfr_set_emax(mpfr_get_emax_max());
    });
}

std::string BigFloat::to_hex() const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "+inf" : "-inf";
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 16, 0, v_, MPFR_RNDN);
    std::string mant(s);
    mpfr_free_str(s);
    std::ostringstream os;
    os << mant << "@" << e;
    return os.str();
}

BigFloat BigFloat::from_hex(const std::string& s, Prec prec) {
    BigFloat r(prec);
    if (s == "nan") { mpfr_set_nan(r.v_); return r; }
    if (s == "+inf") { mpfr_set_inf(r.v_, 1); return r; }
    if (s == "-inf") { mpfr_set_inf(r.v_, -1); return r; }
    if (s == "0") { mpfr_set_zero(r.v_, 1); return r; }
    auto at = s.find('@');
    if (at == std::string::npos) throw StateError("malformed bigfloat: " + s);
    std::string mant = s.substr(0, at);
    long e = std::strtol(s.c_str() + at + 1, nullptr, 10);
    // mpfr_get_str produces mantissa m with implied exponent such that the
    // value is 0.m * 16^e; mpfr_set_str accepts "m@e" in base 16 the same way
    // when the mantissa carries an explicit leading "0." -- rebuild that form.
    bool neg = !mant.empty() && mant[0] == '-';
    std::string digits = neg ? mant.substr(1) : mant;
    std::string text = (neg ? std::string("-0.") : std::string("0.")) + digits + "@" + std::to_string(e);
    if (mpfr_set_str(r.v_, text.c_str(), 16, MPFR_RNDN) != 0)
        throw StateError("unparseable bigfloat: " + s);
    return r;
}

std::string BigFloat::to_decimal(size_t digits) const {
    if (!mpfr_number_p(v_)) return to_hex();
    char fmt[32];
    std::snprintf(fmt, sizeof fmt, "%%.%zuRg", digits);
    char buf[512];
    mpfr_snprintf(buf, sizeof buf, fmt, v_);
    return std::string(buf);
}

std::pair<BigFloat, BigFloat> pi_bounds(Prec p) {
    BigFloat lo(p), hi(p);
    mpfr_const_pi(lo.raw(), MPFR_RNDD);
    mpfr_const_pi(hi.raw(), MPFR_RNDU);
    return {lo, hi};
}

static Rational dyadic_from(const BigFloat& x, mpfr_rnd_t rnd) {
    if (!x.is_finite()) throw Error("dyadic bound of non-finite value");
    if (x.is_zero()) return Rational(0);
    mpfr_t t;
    mpfr_init2(t, x.prec());
    mpfr_set(t, x.raw(), rnd);
    mpfr_exp_t e;
    mpz_class m;
    e = mpfr_get_z_2exp(m.get_mpz_t(), t);
    mpfr_clear(t);
    Rational q(m);
    if (e >= 0) {
        mpz_class sc;
        mpz_ui_pow_ui(sc.get_mpz_t(), 2, (unsigned long)e);
        q *= Rational(sc);
    } else {
        mpz_class sc;
        mpz_ui_pow_ui(sc.get_mpz_t(), 2, (unsigned long)(-e));
        q /= Rational(sc);
    }
    q.canonicalize();
    return q;
}

Rational rational_upper_bound(const BigFloat& x) { return dyadic_from(x, MPFR_RNDU); }
Rational rational_lower_bound(const BigFloat& x) { return dyadic_from(x, MPFR_RNDD); }

} // namespace orbitforge
