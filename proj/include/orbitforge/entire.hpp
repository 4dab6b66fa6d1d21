#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "orbitforge/kernels.hpp"
#include "orbitforge/polynomial.hpp"
#include "orbitforge/symbolic.hpp"

namespace orbitforge {

// A supported base: transcendental kernel plus an exact polynomial addend.
// Closed under differentiation, exact rational Taylor coefficients, and a
// ratio-test tail bound (all kernels have |a_n| <= 1/n!).
class BaseFunction {
  public:
    BaseFunction() = default;
    BaseFunction(std::string id, int kern, GPoly addend)
        : id_(std::move(id)), kernel_(kern), addend_(std::move(addend)) {}

    static const BaseFunction& by_id(const std::string& id); // exp, expm1, sin, exp_plus_z
    static bool known(const std::string& id);

    const std::string& id() const { return id_; }
    int kern() const { return kernel_; }
    const GPoly& addend() const { return addend_; }

    Rational taylor_coefficient(long n) const;
    ComplexBox eval_enclosure(const ComplexBox& z, Prec p) const;
    BaseFunction derivative() const;
    SymValue eval_symbolic(SymContext& ctx, const SymValue& arg) const;

    // bound for |sum_{n>N} a_n z^n| on |z| <= R
    BigFloat tail_bound(const BigFloat& R, long N) const;
    // upper bound for |base| on a disk (Cauchy estimates)
    BigFloat sup_bound(const ComplexBox& disk) const;

  private:
    std::string id_;
    int kernel_ = kernel::EXP;
    GPoly addend_;
};

enum class StepKind {
    stabilize,   // j = 0, exponent n+1
    nail_value,  // value steering at alpha_{n+1}
    pin,         // carries the (z-alpha)^2 factor
    algebraize,  // replaces a transcendental preimage by an exact one
    graft_link,  // one link of a cycle graft
    graft_close, // closing link of a cycle graft
    spare        // admissible filler carrying a pending nail factor
};
const char* step_kind_name(StepKind k);
StepKind step_kind_by_name(const std::string& s);

// One term eps * z^exponent * P(z) of the perturbation ledger. The
// polynomial is the squared-root product over a prefix of the shared nail
// sequence; exponent is stage+1 for index 0 and stage+2 otherwise.
struct PerturbationTerm {
    int stage = 0;
    int index = 0;
    long exponent = 0;
    SymValue eps;
    Rational nu;             // recorded bound, 0 < |eps| < nu
    size_t nail_prefix = 0;  // P = nails->poly(nail_prefix)
    StepKind kind = StepKind::spare;
    GaussianRational point;  // the point this step served, when applicable
};

// f = base + eps_0 + sum of terms. Immutable; adding a term returns a copy.
class StagedFunction {
  public:
    StagedFunction() = default;
    StagedFunction(SymContext* ctx, BaseFunction base, SymValue eps0, NailSeqPtr nails)
        : ctx_(ctx), base_(std::move(base)), eps0_(std::move(eps0)), nails_(std::move(nails)) {}
    StagedFunction(const StagedFunction& o)
        : ctx_(o.ctx_), base_(o.base_), eps0_(o.eps0_), nails_(o.nails_), terms_(o.terms_) {}
    StagedFunction(StagedFunction&& o) noexcept
        : ctx_(o.ctx_), base_(std::move(o.base_)), eps0_(std::move(o.eps0_)),
          nails_(std::move(o.nails_)), terms_(std::move(o.terms_)) {}
    StagedFunction& operator=(const StagedFunction& o) {
        if (this != &o) {
            ctx_ = o.ctx_;
            base_ = o.base_;
            eps0_ = o.eps0_;
            nails_ = o.nails_;
            terms_ = o.terms_;
            std::lock_guard<std::mutex> g(mu_);
            collapsed_.clear();
            collapsed_deriv_.clear();
        }
        return *this;
    }

    SymContext* ctx() const { return ctx_; }
    const BaseFunction& base() const { return base_; }
    const SymValue& eps0() const { return eps0_; }
    const NailSeqPtr& nails() const { return nails_; }
    const std::vector<PerturbationTerm>& terms() const { return terms_; }

    StagedFunction with_term(PerturbationTerm t) const;

    ComplexBox eval_box(const ComplexBox& z, Prec p) const;
    ComplexBox eval_deriv_box(const ComplexBox& z, Prec p) const;

    SymValue eval_symbolic(const GaussianRational& z) const;
    SymValue eval_deriv_symbolic(const GaussianRational& z) const;

    // a_k as a symbolic value: base coefficient plus all term contributions
    SymValue taylor_coefficient(long k) const;
    // contribution to a_k from perturbation terms only (a_k - b_k)
    SymValue coefficient_offset(long k) const;

    long max_term_degree() const; // max exponent + deg P over terms
    // certified upper bound for |perturbation(z)| on |z| <= R (includes eps0)
    BigFloat pert_sup(const Rational& R, Prec p) const;
    // certified upper bound for |z^e P(z)| of one prospective term on |z| <= R
    static BigFloat term_sup(const NailSequence& nails, size_t prefix, long exponent,
                             const Rational& R);

    const BoxPoly& collapsed(Prec p) const;
    const BoxPoly& collapsed_deriv(Prec p) const;

  private:
    SymContext* ctx_ = nullptr;
    BaseFunction base_;
    SymValue eps0_;
    NailSeqPtr nails_;
    std::vector<PerturbationTerm> terms_;

    mutable std::mutex mu_;
    mutable std::map<Prec, BoxPoly> collapsed_;
    mutable std::map<Prec, BoxPoly> collapsed_deriv_;
};

// Type-erased rigorous evaluation interface consumed by the zero counter and
// the cycle finder.
struct Evaluable {
    std::function<ComplexBox(const ComplexBox&, Prec)> eval;
    std::function<ComplexBox(const ComplexBox&, Prec)> deriv;
    std::string id;
};

Evaluable evaluable_from_staged(const StagedFunction& f);
Evaluable evaluable_from_base(const BaseFunction& b);
Evaluable evaluable_from_gpoly(const GPoly& p);
Evaluable evaluable_sub_const(const Evaluable& f, const GaussianRational& alpha);

// L(P) enclosure of an exact polynomial (spec operation poly_length).
std::pair<BigFloat, BigFloat> poly_length(const GPoly& p);

// Bound on everything stages > n can still add on |z| <= R, derived from the
// admissibility schedule: per stage m the per-term bound
//   R^{m+1} max(1,R)^{1+d} / (m + 2/Theta_{m+2})^{m+3+d}
// with d the current nail-polynomial degree (non-decreasing in later stages).
// Throws InvalidSchedule when a recorded term violates its nu bound or the
// geometry cannot be summed.
BigFloat tail_certificate(const StagedFunction& f, const Rational& R, int through_stage,
                          const std::function<Rational(long)>& theta);

} // namespace orbitforge
