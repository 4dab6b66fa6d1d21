#include "orbitforge/kernels.hpp"

namespace orbitforge::kernel {

int derivative(int id) {
    switch (id) {
        case EXP: return EXP;
        case SIN: return COS;
        case COS: return NEG_SIN;
        case NEG_SIN: return NEG_COS;
        case NEG_COS: return SIN;
    }
    throw Error("unknown kernel");
}

const char* name(int id) {
    switch (id) {
        case EXP: return "exp";
        case SIN: return "sin";
        case COS: return "cos";
        case NEG_SIN: return "-sin";
        case NEG_COS: return "-cos";
    }
    throw Error("unknown kernel");
}

int by_name(const std::string& s) {
    for (int id = 0; id <= 4; ++id)
        if (s == name(id)) return id;
    throw StateError("unknown kernel name " + s);
}

Integer factorial(long n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), (unsigned long)n);
    return f;
}

Rational taylor(int id, long n) {
    if (n < 0) return Rational(0);
    Rational inv_fact(Integer(1), factorial(n));
    inv_fact.canonicalize();
    switch (id) {
        case EXP: return inv_fact;
        case SIN: {
            if (n % 2 == 0) return Rational(0);
            return ((n - 1) / 2) % 2 == 0 ? inv_fact : -inv_fact;
        }
        case COS: {
            if (n % 2 == 1) return Rational(0);
            return (n / 2) % 2 == 0 ? inv_fact : -inv_fact;
        }
        case NEG_SIN: return -taylor(SIN, n);
        case NEG_COS: return -taylor(COS, n);
    }
    throw Error("unknown kernel");
}

ComplexBox eval(int id, const ComplexBox& z, Prec p) {
    switch (id) {
        case EXP: return bexp(z, p);
        case SIN: return bsin(z, p);
        case COS: return bcos(z, p);
        case NEG_SIN: return bneg(bsin(z, p), p);
        case NEG_COS: return bneg(bcos(z, p), p);
    }
    throw Error("unknown kernel");
}

BigFloat sup_on(int id, const ComplexBox& disk) {
    const Prec RP = ComplexBox::kRadPrec;
    if (!disk.is_bounded()) return BigFloat::pos_inf();
    if (id == EXP) {
        return fexp(disk.re_upper(), RP, MPFR_RNDU);
    }
    // |sin|, |cos| <= cosh(|Im|) on the disk
    BigFloat b = fmax(fabsf_(disk.im_lower(), RP, MPFR_RNDU), fabsf_(disk.im_upper(), RP, MPFR_RNDU));
    BigFloat ch(RP);
    mpfr_cosh(ch.raw(), b.raw(), MPFR_RNDU);
    return ch;
}

} // namespace orbitforge::kernel
