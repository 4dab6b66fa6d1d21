#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "orbitforge/complexbox.hpp"
#include "orbitforge/rational.hpp"

namespace orbitforge {

// Polynomial with complex-box coefficients; Horner evaluation.
struct BoxPoly {
    std::vector<ComplexBox> c; // c[i] multiplies z^i
    ComplexBox eval(const ComplexBox& z, Prec p) const;
    bool empty() const { return c.empty(); }
};

// Exact polynomial over Q[i]. Coefficients in lowest terms, no trailing
// zeros; degree of the zero polynomial is -1.
class GPoly {
  public:
    GPoly() = default;
    explicit GPoly(std::vector<GaussianRational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static GPoly zero() { return GPoly(); }
    static GPoly one() { return constant(GaussianRational(1)); }
    static GPoly constant(const GaussianRational& g);
    static GPoly linear_root(const GaussianRational& root); // z - root
    static GPoly monomial(size_t e, const GaussianRational& coeff);

    long degree() const { return (long)c_.size() - 1; }
    bool is_zero() const { return c_.empty(); }
    const GaussianRational& coeff(size_t i) const;
    const std::vector<GaussianRational>& coeffs() const { return c_; }

    GPoly operator+(const GPoly& o) const;
    GPoly operator-(const GPoly& o) const;
    GPoly operator*(const GPoly& o) const;
    GPoly scaled(const GaussianRational& k) const;
    GPoly shifted(size_t e) const; // multiply by z^e
    GPoly derivative() const;

    // exact division; nullopt when not divisible
    std::optional<GPoly> divide_exact(const GPoly& divisor) const;

    GaussianRational eval_exact(const GaussianRational& z) const;
    ComplexBox eval_box(const ComplexBox& z, Prec p) const;
    BoxPoly to_box(Prec p) const;

    // L(P) = sum of |coeff|: certified [lo, hi]
    std::pair<BigFloat, BigFloat> length_bounds() const;
    Rational length_upper_rational() const;

    bool operator==(const GPoly& o) const { return c_ == o.c_; }

  private:
    void trim();
    std::vector<GaussianRational> c_;
};

// Append-only sequence of nailed points. Every polynomial in the system is
// prod_{i<len} (z - root_i)^2 for some prefix length len, so divisibility
// along the construction is prefix containment; expanded forms are cached
// incrementally for coefficient work and box evaluation.
class NailSequence {
  public:
    NailSequence();

    size_t size() const { return roots_.size(); }
    const GaussianRational& root(size_t i) const { return roots_[i]; }
    const std::vector<GaussianRational>& roots() const { return roots_; }
    size_t append(const GaussianRational& root); // returns new length
    bool contains(const GaussianRational& g, size_t prefix_len) const;

    const GPoly& poly(size_t prefix_len) const; // prod (z-root)^2 over prefix
    long poly_degree(size_t prefix_len) const { return 2 * (long)prefix_len; }

    // Exact evaluation of all prefix polynomials at one point: returns
    // values v[len] = poly(len)(at) for len = 0..size().
    std::vector<GaussianRational> prefix_values_at(const GaussianRational& at) const;
    // Derivative of poly(len) at `at`; exactly 0 whenever `at` is a prefix root.
    GaussianRational prefix_derivative_at(size_t prefix_len, const GaussianRational& at) const;

    // number of distinct roots among the prefix
    long distinct_roots(size_t prefix_len) const;

  private:
    std::vector<GaussianRational> roots_;
    mutable std::vector<GPoly> prefix_; // prefix_[k]
    mutable std::mutex mu_;
};

using NailSeqPtr = std::shared_ptr<NailSequence>;

} // namespace orbitforge
