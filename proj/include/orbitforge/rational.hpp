#pragma once

#include <gmpxx.h>

#include <functional>
#include <string>
#include <vector>

#include "orbitforge/bigfloat.hpp"
#include "orbitforge/errors.hpp"

namespace orbitforge {

Rational parse_rational(const std::string& s); // "p/q" or "p"
std::string rational_str(const Rational& q);

// Element of Q[i]: the exact subfield K used throughout.
struct GaussianRational {
    Rational re, im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    explicit GaussianRational(long n) : re(n), im(0) {}
    explicit GaussianRational(const Rational& r) : re(r), im(0) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
    GaussianRational operator-(const GaussianRational& o) const { return {re - o.re, im - o.im}; }
    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational operator*(const GaussianRational& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussianRational conj() const { return {re, -im}; }
    Rational norm2() const { return re * re + im * im; } // |q|^2, exact
    GaussianRational inverse() const {
        if (is_zero()) throw Error("inverse of zero");
        Rational n = norm2();
        return {re / n, -im / n};
    }
    GaussianRational operator/(const GaussianRational& o) const { return *this * o.inverse(); }

    GaussianRational& operator+=(const GaussianRational& o) { re += o.re; im += o.im; return *this; }
    GaussianRational& operator-=(const GaussianRational& o) { re -= o.re; im -= o.im; return *this; }
    GaussianRational& operator*=(const GaussianRational& o) { *this = *this * o; return *this; }

    bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
    bool operator!=(const GaussianRational& o) const { return !(*this == o); }
    // Total order used for deterministic enumeration and sorting.
    bool operator<(const GaussianRational& o) const {
        int c = cmp(re, o.re);
        if (c != 0) return c < 0;
        return cmp(im, o.im) < 0;
    }

    GaussianRational pow(unsigned long e) const {
        GaussianRational acc(1), b = *this;
        while (e) {
            if (e & 1) acc *= b;
            b *= b;
            e >>= 1;
        }
        return acc;
    }

    // height = max over both parts of max(|num|, |den|) in lowest terms.
    Integer height() const;

    std::string str() const; // canonical "re,im" with exact rationals

    static GaussianRational parse(const std::string& s);
};

GaussianRational operator*(const Rational& a, const GaussianRational& b);

// Height-then-lex enumeration of K with alpha_1 = 0. Injective, and every
// element of height <= H appears before all elements of height > H.
class AlgebraicEnumeration {
  public:
    AlgebraicEnumeration() = default;
    // 1-based: element(1) == 0.
    const GaussianRational& element(size_t index);

  private:
    void extend();
    std::vector<GaussianRational> cache_;
    unsigned long next_height_ = 1;
};

struct GaussianHash {
    size_t operator()(const GaussianRational& g) const {
        std::hash<std::string> h;
        return h(g.str());
    }
};

} // namespace orbitforge
