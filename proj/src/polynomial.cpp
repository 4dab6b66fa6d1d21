#include "orbitforge/polynomial.hpp"

#include <algorithm>
#include <set>

namespace orbitforge {

static const Prec RP = ComplexBox::kRadPrec;

ComplexBox BoxPoly::eval(const ComplexBox& z, Prec p) const {
    if (c.empty()) return ComplexBox::exact(GaussianRational(0), p);
    ComplexBox acc = c.back();
    for (size_t i = c.size(); i-- > 1;) acc = badd(bmul(acc, z, p), c[i - 1], p);
    return acc;
}

void GPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

GPoly GPoly::constant(const GaussianRational& g) {
    if (g.is_zero()) return GPoly();
    return GPoly(std::vector<GaussianRational>{g});
}
GPoly GPoly::linear_root(const GaussianRational& root) {
    return GPoly({-root, GaussianRational(1)});
}
GPoly GPoly::monomial(size_t e, const GaussianRational& coeff) {
    if (coeff.is_zero()) return GPoly();
    std::vector<GaussianRational> v(e + 1);
    v[e] = coeff;
    return GPoly(std::move(v));
}

const GaussianRational& GPoly::coeff(size_t i) const {
    static const GaussianRational zero;
    return i < c_.size() ? c_[i] : zero;
}

GPoly GPoly::operator+(const GPoly& o) const {
    std::vector<GaussianRational> v(std::max(c_.size(), o.c_.size()));
    for (size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) + o.coeff(i);
    return GPoly(std::move(v));
}
GPoly GPoly::operator-(const GPoly& o) const {
    std::vector<GaussianRational> v(std::max(c_.size(), o.c_.size()));
    for (size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) - o.coeff(i);
    return GPoly(std::move(v));
}
GPoly GPoly::operator*(const GPoly& o) const {
    if (is_zero() || o.is_zero()) return GPoly();
    std::vector<GaussianRational> v(c_.size() + o.c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
    return GPoly(std::move(v));
}
GPoly GPoly::scaled(const GaussianRational& k) const {
    std::vector<GaussianRational> v(c_);
    for (auto& x : v) x *= k;
    return GPoly(std::move(v));
}
GPoly GPoly::shifted(size_t e) const {
    if (is_zero()) return GPoly();
    std::vector<GaussianRational> v(c_.size() + e);
    for (size_t i = 0; i < c_.size(); ++i) v[i + e] = c_[i];
    return GPoly(std::move(v));
}
GPoly GPoly::derivative() const {
    if (c_.size() <= 1) return GPoly();
    std::vector<GaussianRational> v(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = Rational((long)i) * c_[i];
    return GPoly(std::move(v));
}

std::optional<GPoly> GPoly::divide_exact(const GPoly& d) const {
    if (d.is_zero()) return std::nullopt;
    if (is_zero()) return GPoly();
    if (degree() < d.degree()) return std::nullopt;
    std::vector<GaussianRational> rem(c_);
    std::vector<GaussianRational> q(c_.size() - d.c_.size() + 1);
    GaussianRational lead_inv = d.c_.back().inverse();
    for (size_t k = q.size(); k-- > 0;) {
        GaussianRational f = rem[k + d.c_.size() - 1] * lead_inv;
        q[k] = f;
        if (!f.is_zero())
            for (size_t j = 0; j < d.c_.size(); ++j) rem[k + j] -= f * d.c_[j];
    }
    for (size_t j = 0; j + 1 < d.c_.size(); ++j)
        if (!rem[j].is_zero()) return std::nullopt;
    return GPoly(std::move(q));
}

GaussianRational GPoly::eval_exact(const GaussianRational& z) const {
    GaussianRational acc;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i];
    return acc;
}

ComplexBox GPoly::eval_box(const ComplexBox& z, Prec p) const {
    return to_box(p).eval(z, p);
}

BoxPoly GPoly::to_box(Prec p) const {
    BoxPoly bp;
    bp.c.reserve(c_.size());
    for (const auto& g : c_) bp.c.push_back(ComplexBox::exact(g, p));
    return bp;
}

std::pair<BigFloat, BigFloat> GPoly::length_bounds() const {
    BigFloat lo = BigFloat::zero(RP), hi = BigFloat::zero(RP);
    for (const auto& g : c_) {
        // |g| = sqrt(norm2), norm2 exact rational
        Rational n2 = g.norm2();
        BigFloat v_lo = fsqrt(BigFloat::from_rational(n2, RP * 2, MPFR_RNDD), RP, MPFR_RNDD);
        BigFloat v_hi = fsqrt(BigFloat::from_rational(n2, RP * 2, MPFR_RNDU), RP, MPFR_RNDU);
        lo = fadd(lo, v_lo, RP, MPFR_RNDD);
        hi = add_up(hi, v_hi, RP);
    }
    return {lo, hi};
}

Rational GPoly::length_upper_rational() const {
    return rational_upper_bound(length_bounds().second);
}

// --- NailSequence -----------------------------------------------------------

NailSequence::NailSequence() { prefix_.push_back(GPoly::one()); }

size_t NailSequence::append(const GaussianRational& root) {
    std::lock_guard<std::mutex> g(mu_);
    roots_.push_back(root);
    return roots_.size();
}

bool NailSequence::contains(const GaussianRational& g, size_t prefix_len) const {
    for (size_t i = 0; i < prefix_len && i < roots_.size(); ++i)
        if (roots_[i] == g) return true;
    return false;
}

const GPoly& NailSequence::poly(size_t prefix_len) const {
    std::lock_guard<std::mutex> g(mu_);
    if (prefix_len > roots_.size()) throw Error("nail prefix out of range");
    while (prefix_.size() <= prefix_len) {
        size_t k = prefix_.size() - 1; // next root to fold in
        GPoly lin = GPoly::linear_root(roots_[k]);
        prefix_.push_back(prefix_.back() * lin * lin);
    }
    return prefix_[prefix_len];
}

std::vector<GaussianRational> NailSequence::prefix_values_at(const GaussianRational& at) const {
    std::vector<GaussianRational> out;
    out.reserve(roots_.size() + 1);
    GaussianRational acc(1);
    out.push_back(acc);
    for (const auto& r : roots_) {
        GaussianRational d = at - r;
        acc *= d * d;
        out.push_back(acc);
    }
    return out;
}

GaussianRational NailSequence::prefix_derivative_at(size_t prefix_len, const GaussianRational& at) const {
    // P = prod (z-r_i)^2  =>  P'(at) = P(at) * sum 2/(at - r_i) when at is no
    // root; if at equals some prefix root the double factor forces P'(at)=0.
    GaussianRational val(1);
    for (size_t i = 0; i < prefix_len; ++i) {
        GaussianRational d = at - roots_[i];
        if (d.is_zero()) return GaussianRational(0);
        val *= d * d;
    }
    GaussianRational s;
    for (size_t i = 0; i < prefix_len; ++i) {
        GaussianRational d = at - roots_[i];
        s += GaussianRational(Rational(2)) * d.inverse();
    }
    return val * s;
}

long NailSequence::distinct_roots(size_t prefix_len) const {
    std::set<std::string> seen;
    for (size_t i = 0; i < prefix_len; ++i) seen.insert(roots_[i].str());
    return (long)seen.size();
}

} // namespace orbitforge
