#include "orbitforge/entire.hpp"

#include <algorithm>

namespace orbitforge {

static const Prec RP = ComplexBox::kRadPrec;

// --- BaseFunction -----------------------------------------------------------

const BaseFunction& BaseFunction::by_id(const std::string& id) {
    static const std::map<std::string, BaseFunction> registry = [] {
        std::map<std::string, BaseFunction> m;
        m.emplace("exp", BaseFunction("exp", kernel::EXP, GPoly::zero()));
        m.emplace("expm1", BaseFunction("expm1", kernel::EXP, GPoly::constant(GaussianRational(-1L))));
        m.emplace("sin", BaseFunction("sin", kernel::SIN, GPoly::zero()));
        m.emplace("exp_plus_z", BaseFunction("exp_plus_z", kernel::EXP,
                                             GPoly::monomial(1, GaussianRational(1))));
        return m;
    }();
    auto it = registry.find(id);
    if (it == registry.end()) throw ConfigError("unknown base function id '" + id + "'");
    return it->second;
}

bool BaseFunction::known(const std::string& id) {
    return id == "exp" || id == "expm1" || id == "sin" || id == "exp_plus_z";
}

Rational BaseFunction::taylor_coefficient(long n) const {
    Rational k = kernel::taylor(kernel_, n);
    if (n >= 0 && n <= addend_.degree()) {
        const GaussianRational& a = addend_.coeff((size_t)n);
        if (!a.is_real()) throw Error("base addend must have rational coefficients");
        k += a.re;
    }
    return k;
}

ComplexBox BaseFunction::eval_enclosure(const ComplexBox& z, Prec p) const {
    ComplexBox out = kernel::eval(kernel_, z, p);
    if (!addend_.is_zero()) out = badd(out, addend_.eval_box(z, p), p);
    return out;
}

BaseFunction BaseFunction::derivative() const {
    return BaseFunction(id_ + "'", kernel::derivative(kernel_), addend_.derivative());
}

SymValue BaseFunction::eval_symbolic(SymContext& ctx, const SymValue& arg) const {
    SymValue out = ctx.base_eval(kernel_, arg);
    if (!addend_.is_zero()) {
        if (auto q = ctx.reduce_exact(arg)) {
            out = ctx.sum(out, ctx.exact(addend_.eval_exact(*q)));
        } else {
            SymValue acc = ctx.exact(0L);
            for (long i = addend_.degree(); i >= 0; --i)
                acc = ctx.sum(ctx.product(acc, arg), ctx.exact(addend_.coeff((size_t)i)));
            out = ctx.sum(out, acc);
        }
    }
    return out;
}

BigFloat BaseFunction::tail_bound(const BigFloat& R, long N) const {
    // kernel part: sum_{n>N} R^n/n!  (|a_n| <= 1/n! for every kernel)
    BigFloat Ru = fabsf_(R, RP, MPFR_RNDU);
    BigFloat term = div_up(fpow_ui(Ru, (unsigned long)(N + 1), RP, MPFR_RNDU),
                           BigFloat::from_integer(kernel::factorial(N + 1), RP, MPFR_RNDD), RP);
    BigFloat total = BigFloat::zero(RP);
    long n = N + 1;
    for (;; ++n) {
        BigFloat ratio = div_up(Ru, BigFloat((long)(n + 1), RP), RP);
        if (ratio.cmp_d(0.5) <= 0) {
            // remaining tail <= term * ratio / (1 - ratio) <= term (ratio<=1/2)
            total = add_up(total, add_up(term, term, RP), RP);
            break;
        }
        total = add_up(total, term, RP);
        term = mul_up(term, ratio, RP);
        if (n > N + 10000) throw Error("tail bound did not converge");
    }
    // addend contributes nothing beyond its degree
    for (long i = N + 1; i <= addend_.degree(); ++i) {
        Rational n2 = addend_.coeff((size_t)i).norm2();
        BigFloat a = fsqrt(BigFloat::from_rational(n2, RP, MPFR_RNDU), RP, MPFR_RNDU);
        total = add_up(total, mul_up(a, fpow_ui(Ru, (unsigned long)i, RP, MPFR_RNDU), RP), RP);
    }
    return total;
}

BigFloat BaseFunction::sup_bound(const ComplexBox& disk) const {
    BigFloat s = kernel::sup_on(kernel_, disk);
    BigFloat m = disk.abs_upper();
    BigFloat add = BigFloat::zero(RP);
    for (long i = 0; i <= addend_.degree(); ++i) {
        BigFloat a = fsqrt(BigFloat::from_rational(addend_.coeff((size_t)i).norm2(), RP, MPFR_RNDU),
                           RP, MPFR_RNDU);
        add = add_up(add, mul_up(a, fpow_ui(m, (unsigned long)i, RP, MPFR_RNDU), RP), RP);
    }
    return add_up(s, add, RP);
}

const char* step_kind_name(StepKind k) {
    switch (k) {
        case StepKind::stabilize: return "stabilize";
        case StepKind::nail_value: return "nail_value";
        case StepKind::pin: return "pin";
        case StepKind::algebraize: return "algebraize";
        case StepKind::graft_link: return "graft_link";
        case StepKind::graft_close: return "graft_close";
        case StepKind::spare: return "spare";
    }
    throw Error("bad step kind");
}
StepKind step_kind_by_name(const std::string& s) {
    for (StepKind k : {StepKind::stabilize, StepKind::nail_value, StepKind::pin,
                       StepKind::algebraize, StepKind::graft_link, StepKind::graft_close,
                       StepKind::spare})
        if (s == step_kind_name(k)) return k;
    throw StateError("unknown step kind '" + s + "'");
}

// --- StagedFunction ---------------------------------------------------------

StagedFunction StagedFunction::with_term(PerturbationTerm t) const {
    StagedFunction out(ctx_, base_, eps0_, nails_);
    out.terms_ = terms_;
    out.terms_.push_back(std::move(t));
    return out;
}

static void accumulate_term(SymContext& ctx, BoxPoly& bp, const PerturbationTerm& t,
                            const NailSequence& nails, Prec p, bool deriv) {
    ComplexBox eb = ctx.enclose_at(t.eps, p);
    const GPoly& P = nails.poly(t.nail_prefix);
    GPoly full = GPoly::monomial((size_t)t.exponent, GaussianRational(1)) * P;
    GPoly use = deriv ? full.derivative() : full;
    size_t need = use.is_zero() ? 0 : (size_t)use.degree() + 1;
    if (bp.c.size() < need) bp.c.resize(need, ComplexBox::exact(GaussianRational(0), p));
    for (size_t i = 0; i < need; ++i) {
        if (use.coeff(i).is_zero()) continue;
        ComplexBox contrib = bmul(eb, ComplexBox::exact(use.coeff(i), p), p);
        bp.c[i] = badd(bp.c[i], contrib, p);
    }
}

const BoxPoly& StagedFunction::collapsed(Prec p) const {
    std::lock_guard<std::mutex> g(mu_);
    auto it = collapsed_.find(p);
    if (it != collapsed_.end()) return it->second;
    BoxPoly bp;
    for (const auto& t : terms_) accumulate_term(*ctx_, bp, t, *nails_, p, false);
    return collapsed_.emplace(p, std::move(bp)).first->second;
}

const BoxPoly& StagedFunction::collapsed_deriv(Prec p) const {
    std::lock_guard<std::mutex> g(mu_);
    auto it = collapsed_deriv_.find(p);
    if (it != collapsed_deriv_.end()) return it->second;
    BoxPoly bp;
    for (const auto& t : terms_) accumulate_term(*ctx_, bp, t, *nails_, p, true);
    return collapsed_deriv_.emplace(p, std::move(bp)).first->second;
}

ComplexBox StagedFunction::eval_box(const ComplexBox& z, Prec p) const {
    ComplexBox out = base_.eval_enclosure(z, p);
    out = badd(out, ctx_->enclose_at(eps0_, p), p);
    if (!terms_.empty()) out = badd(out, collapsed(p).eval(z, p), p);
    return out;
}

ComplexBox StagedFunction::eval_deriv_box(const ComplexBox& z, Prec p) const {
    ComplexBox out = base_.derivative().eval_enclosure(z, p);
    if (!terms_.empty()) {
        const BoxPoly& d = collapsed_deriv(p);
        if (!d.empty()) out = badd(out, d.eval(z, p), p);
    }
    return out;
}

SymValue StagedFunction::eval_symbolic(const GaussianRational& z) const {
    SymContext& ctx = *ctx_;
    SymValue acc = ctx.sum(base_.eval_symbolic(ctx, ctx.exact(z)), eps0_);
    if (terms_.empty()) return acc;
    std::vector<GaussianRational> pv = nails_->prefix_values_at(z);
    std::map<long, GaussianRational> zpow;
    std::vector<SymValue> parts{acc};
    for (const auto& t : terms_) {
        auto it = zpow.find(t.exponent);
        if (it == zpow.end()) it = zpow.emplace(t.exponent, z.pow((unsigned long)t.exponent)).first;
        GaussianRational factor = it->second * pv[t.nail_prefix];
        if (factor.is_zero()) continue; // z is nailed for this term
        parts.push_back(ctx.product(t.eps, ctx.exact(factor)));
    }
    return ctx.sum(parts);
}

SymValue StagedFunction::eval_deriv_symbolic(const GaussianRational& z) const {
    SymContext& ctx = *ctx_;
    SymValue acc = base_.derivative().eval_symbolic(ctx, ctx.exact(z));
    std::vector<GaussianRational> pv = nails_->prefix_values_at(z);
    std::vector<SymValue> parts{acc};
    for (const auto& t : terms_) {
        // d/dz [z^e P] = e z^{e-1} P + z^e P'
        GaussianRational val = Rational(t.exponent) * z.pow((unsigned long)(t.exponent - 1)) *
                                   pv[t.nail_prefix] +
                               z.pow((unsigned long)t.exponent) *
                                   nails_->prefix_derivative_at(t.nail_prefix, z);
        if (val.is_zero()) continue;
        parts.push_back(ctx.product(t.eps, ctx.exact(val)));
    }
    return ctx.sum(parts);
}

SymValue StagedFunction::coefficient_offset(long k) const {
    SymContext& ctx = *ctx_;
    std::vector<SymValue> parts;
    if (k == 0) parts.push_back(eps0_);
    for (const auto& t : terms_) {
        long i = k - t.exponent;
        if (i < 0) continue;
        const GPoly& P = nails_->poly(t.nail_prefix);
        if (i > P.degree()) continue;
        const GaussianRational& c = P.coeff((size_t)i);
        if (c.is_zero()) continue;
        parts.push_back(ctx.product(t.eps, ctx.exact(c)));
    }
    return ctx.sum(parts);
}

SymValue StagedFunction::taylor_coefficient(long k) const {
    SymContext& ctx = *ctx_;
    return ctx.sum(ctx.exact(base_.taylor_coefficient(k)), coefficient_offset(k));
}

long StagedFunction::max_term_degree() const {
    long m = 0;
    for (const auto& t : terms_)
        m = std::max(m, t.exponent + nails_->poly_degree(t.nail_prefix));
    return m;
}

BigFloat StagedFunction::term_sup(const NailSequence& nails, size_t prefix, long exponent,
                                  const Rational& R) {
    BigFloat Ru = BigFloat::from_rational(R, RP, MPFR_RNDU);
    const GPoly& P = nails.poly(prefix);
    BigFloat s = BigFloat::zero(RP);
    for (long i = 0; i <= P.degree(); ++i) {
        BigFloat a = fsqrt(BigFloat::from_rational(P.coeff((size_t)i).norm2(), RP, MPFR_RNDU), RP,
                           MPFR_RNDU);
        s = add_up(s, mul_up(a, fpow_ui(Ru, (unsigned long)i, RP, MPFR_RNDU), RP), RP);
    }
    return mul_up(s, fpow_ui(Ru, (unsigned long)exponent, RP, MPFR_RNDU), RP);
}

BigFloat StagedFunction::pert_sup(const Rational& R, Prec p) const {
    BigFloat s = ctx_->enclose_at(eps0_, p).abs_upper();
    for (const auto& t : terms_) {
        BigFloat e = ctx_->enclose_at(t.eps, p).abs_upper();
        s = add_up(s, mul_up(e, term_sup(*nails_, t.nail_prefix, t.exponent, R), RP), RP);
    }
    return s;
}

// --- Evaluable adapters -------------------------------------------------------

Evaluable evaluable_from_staged(const StagedFunction& f) {
    return Evaluable{
        [f](const ComplexBox& z, Prec p) { return f.eval_box(z, p); },
        [f](const ComplexBox& z, Prec p) { return f.eval_deriv_box(z, p); },
        "staged(" + f.base().id() + ")",
    };
}
Evaluable evaluable_from_base(const BaseFunction& b) {
    BaseFunction d = b.derivative();
    return Evaluable{
        [b](const ComplexBox& z, Prec p) { return b.eval_enclosure(z, p); },
        [d](const ComplexBox& z, Prec p) { return d.eval_enclosure(z, p); },
        b.id(),
    };
}
namespace {
// per-precision coefficient boxes, shared by the closures of one evaluable
struct GPolyBoxCache {
    GPoly poly;
    std::mutex mu;
    std::map<Prec, BoxPoly> by_prec;
    ComplexBox eval(const ComplexBox& z, Prec p) {
        std::lock_guard<std::mutex> g(mu);
        auto it = by_prec.find(p);
        if (it == by_prec.end()) it = by_prec.emplace(p, poly.to_box(p)).first;
        return it->second.eval(z, p);
    }
};
} // namespace

Evaluable evaluable_from_gpoly(const GPoly& p0) {
    auto val = std::make_shared<GPolyBoxCache>();
    val->poly = p0;
    auto der = std::make_shared<GPolyBoxCache>();
    der->poly = p0.derivative();
    return Evaluable{
        [val](const ComplexBox& z, Prec p) { return val->eval(z, p); },
        [der](const ComplexBox& z, Prec p) { return der->eval(z, p); },
        "poly",
    };
}
Evaluable evaluable_sub_const(const Evaluable& f, const GaussianRational& alpha) {
    auto base_eval = f.eval;
    return Evaluable{
        [base_eval, alpha](const ComplexBox& z, Prec p) {
            return bsub(base_eval(z, p), ComplexBox::exact(alpha, p), p);
        },
        f.deriv,
        f.id + "-alpha",
    };
}

std::pair<BigFloat, BigFloat> poly_length(const GPoly& p) { return p.length_bounds(); }

// --- tail certificate ---------------------------------------------------------

BigFloat tail_certificate(const StagedFunction& f, const Rational& R, int through_stage,
                          const std::function<Rational(long)>& theta) {
    SymContext& ctx = *f.ctx();
    // schedule discipline: every recorded term obeys 0 < |eps| < nu
    for (const auto& t : f.terms()) {
        ComplexBox e = ctx.enclose(t.eps, Rational(t.nu) / 4);
        BigFloat up = e.abs_upper();
        if (!(up.cmp_q(t.nu) < 0))
            throw InvalidSchedule("term (" + std::to_string(t.stage) + "," +
                                  std::to_string(t.index) + ") breaks its nu bound");
        if (!e.surely_excludes_zero())
            throw InvalidSchedule("term (" + std::to_string(t.stage) + "," +
                                  std::to_string(t.index) + ") has no nonzero certificate");
    }
    long d_star = f.nails() ? 2 * (long)f.nails()->size() : 0;
    BigFloat Ru = BigFloat::from_rational(R, RP, MPFR_RNDU);
    BigFloat big1(1L, RP);
    BigFloat maxR = fmax(big1, Ru);
    BigFloat total = BigFloat::zero(RP);
    BigFloat prev = BigFloat::zero(RP);
    for (long m = through_stage + 1;; ++m) {
        // Theta_{m+2} = min_{j in [1, m+2]} theta_j
        Rational Theta = theta(1);
        for (long j = 2; j <= m + 2; ++j) Theta = std::min(Theta, theta(j));
        Rational denom_base_q = Rational(m) + Rational(2) / Theta;
        BigFloat denom_base = BigFloat::from_rational(denom_base_q, RP, MPFR_RNDD);
        if (!(maxR < denom_base))
            throw InvalidSchedule("radius too large for the admissibility schedule at stage " +
                                  std::to_string(m));
        // per-stage bound: R^{m+1} maxR^{1+d*} / base^{m+3+d*}
        BigFloat num = mul_up(fpow_ui(Ru, (unsigned long)(m + 1), RP, MPFR_RNDU),
                              fpow_ui(maxR, (unsigned long)(1 + d_star), RP, MPFR_RNDU), RP);
        BigFloat den = fpow_ui(denom_base, (unsigned long)(m + 3 + d_star), RP, MPFR_RNDD);
        BigFloat term = div_up(num, den, RP);
        total = add_up(total, term, RP);
        // once terms at least halve each step, close with a geometric bound
        if (m > through_stage + 1 && term.is_pos() && prev.is_pos()) {
            BigFloat ratio = div_up(term, prev, RP);
            if (ratio.cmp_d(0.5) <= 0 && m >= through_stage + 4) {
                total = add_up(total, term, RP); // remaining tail <= term once more
                break;
            }
        }
        if (term.is_zero() && m >= through_stage + 4) break;
        prev = term;
        if (m > through_stage + 4096) throw InvalidSchedule("tail sum did not stabilize");
    }
    return total;
}

} // namespace orbitforge
