#include "orbitforge/rootcount.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace orbitforge {

static const Prec RP = ComplexBox::kRadPrec;

ComplexBox circle_point(const Disk& d, const Rational& t, Prec p) {
    // z = c + R e^{2 pi i t}; pi carried as an interval
    BigFloat pi_lo(p), pi_hi(p);
    mpfr_const_pi(pi_lo.raw(), MPFR_RNDD);
    mpfr_const_pi(pi_hi.raw(), MPFR_RNDU);
    BigFloat tv = BigFloat::from_rational(t, p, MPFR_RNDN);
    BigFloat theta = fmul(fmul(BigFloat(2L, p), pi_lo, p, MPFR_RNDN), tv, p, MPFR_RNDN);
    // |theta - true| <= 2|t|(pi_hi - pi_lo) + ulps
    BigFloat terr = mul_up(fabsf_(tv, RP, MPFR_RNDU),
                           fmul_si(fsub(pi_hi, pi_lo, RP, MPFR_RNDU), 2, RP, MPFR_RNDU), RP);
    terr = add_up(terr, mul_up(theta.ulp(), BigFloat(4, RP), RP), RP);
    terr = add_up(terr, tv.ulp(), RP);
    BigFloat s(p), c(p);
    mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), MPFR_RNDN);
    // cos/sin are 1-Lipschitz: point error <= terr per component (+ulps)
    ComplexBox unit({c, s}, add_up(mul_up(terr, BigFloat(2, RP), RP),
                                   add_up(c.ulp(), s.ulp(), RP), RP));
    ComplexBox z = badd(ComplexBox::exact(d.center, p),
                        bscale(unit, d.radius, p), p);
    return z;
}

ComplexBox circle_arc(const Disk& d, const Rational& t0, const Rational& t1, Prec p) {
    Rational tm = (t0 + t1) / 2;
    ComplexBox mid = circle_point(d, tm, p);
    // |z(t) - z(tm)| <= R * 2 pi |t - tm| <= R * pi * (t1 - t0)
    BigFloat pi_hi(RP);
    mpfr_const_pi(pi_hi.raw(), MPFR_RNDU);
    BigFloat half = mul_up(BigFloat::from_rational(d.radius * (t1 - t0), RP, MPFR_RNDU), pi_hi, RP);
    return mid.widened(half);
}

namespace {

struct Arc {
    Rational t0, t1;
    int depth;
};

// one adaptive pass at fixed precision
struct PassResult {
    bool ok = false;
    std::vector<ArcCert> arcs;
    BigFloat min_margin;
    bool zero_contact = false; // an arc kept containing 0 at max depth
};

// need_subtend: additionally require each image box to subtend <= pi/2 at the
// origin (winding needs it; bare clearance does not). A positive margin_goal
// keeps splitting arcs whose certified lower bound is below it, within the
// depth budget; the result stays sound either way.
PassResult winding_pass(const Evaluable& f, const Disk& d, Prec p, const WindingOptions& opt,
                        bool need_subtend, const BigFloat* margin_goal = nullptr) {
    std::deque<Arc> todo;
    for (int i = 0; i < opt.initial_arcs; ++i) {
        Rational t0(i, opt.initial_arcs), t1(i + 1, opt.initial_arcs);
        t0.canonicalize();
        t1.canonicalize();
        todo.push_back({t0, t1, 0});
    }
    PassResult out;
    out.min_margin = BigFloat::pos_inf();
    std::vector<ArcCert> done;
    while (!todo.empty()) {
        Arc a = todo.front();
        todo.pop_front();
        ComplexBox img = f.eval(circle_arc(d, a.t0, a.t1, p), p);
        bool ok = img.is_bounded() && img.surely_excludes_zero();
        if (ok && need_subtend) {
            // subtended angle <= pi/2 means radius <= sin(pi/4) |center|
            BigFloat lim = fmul(cabs_down(img.center(), RP), BigFloat(0.70, RP), RP, MPFR_RNDD);
            ok = img.radius() <= lim;
        }
        bool want_tighter =
            ok && margin_goal && margin_goal->is_pos() && img.abs_lower() < *margin_goal;
        if (!ok || (want_tighter && a.depth < opt.max_depth)) {
            if (a.depth >= opt.max_depth) {
                if (img.is_bounded() && !img.surely_excludes_zero()) out.zero_contact = true;
                out.ok = false;
                return out;
            }
            Rational tm = (a.t0 + a.t1) / 2;
            tm.canonicalize();
            todo.push_front({tm, a.t1, a.depth + 1});
            todo.push_front({a.t0, tm, a.depth + 1});
            continue;
        }
        BigFloat lo = img.abs_lower();
        if (lo < out.min_margin) out.min_margin = lo;
        done.push_back({a.t0, a.t1, img});
    }
    out.arcs = std::move(done);
    out.ok = true;
    return out;
}

} // namespace

ZeroCount count_zeros(const Evaluable& f, const Disk& d, const WindingOptions& opt) {
    bool saw_zero_contact = false;
    for (Prec p = opt.prec.start; p <= opt.prec.max; p *= 2) {
        PassResult pass;
        try {
            pass = winding_pass(f, d, p, opt, true);
        } catch (const DivisionByEnclosedZero&) {
            continue;
        }
        if (!pass.ok) {
            saw_zero_contact = saw_zero_contact || pass.zero_contact;
            continue; // raise precision
        }
        // node values at arc endpoints
        const auto& arcs = pass.arcs;
        std::map<std::string, ComplexBox> node_cache;
        auto node_value = [&](const Rational& t) -> const ComplexBox& {
            std::string key = t.get_str();
            auto it = node_cache.find(key);
            if (it != node_cache.end()) return it->second;
            ComplexBox v = f.eval(circle_point(d, t, p), p);
            return node_cache.emplace(std::move(key), std::move(v)).first->second;
        };
        BigFloat sum_lo = BigFloat::zero(RP), sum_hi = BigFloat::zero(RP);
        bool fail = false;
        for (const auto& arc : arcs) {
            const ComplexBox& w0 = node_value(arc.t0);
            const ComplexBox& w1 = node_value(arc.t1);
            if (!w0.surely_excludes_zero() || !w1.surely_excludes_zero()) { fail = true; break; }
            ComplexBox ratio;
            try {
                ratio = bdiv(w1, w0, p);
            } catch (const DivisionByEnclosedZero&) { fail = true; break; }
            auto ar = arg_range(ratio, p);
            if (!ar) { fail = true; break; }
            sum_lo = fadd(sum_lo, fsub(ar->phi, ar->half_width, RP, MPFR_RNDD), RP, MPFR_RNDD);
            sum_hi = add_up(sum_hi, add_up(ar->phi, ar->half_width, RP), RP);
        }
        if (fail) continue;
        auto [pi_lo, pi_hi] = pi_bounds(RP);
        BigFloat width = fsub(sum_hi, sum_lo, RP, MPFR_RNDU);
        if (!(width < pi_lo)) continue; // need unique multiple of 2 pi
        // find integers n with 2 pi n intersecting [sum_lo, sum_hi]
        double approx = sum_lo.to_double() / (2 * 3.141592653589793);
        long n_guess = std::lround(approx);
        std::vector<long> hits;
        for (long n = n_guess - 2; n <= n_guess + 2; ++n) {
            // interval for 2 pi n
            BigFloat a = fmul_si(n >= 0 ? pi_lo : pi_hi, 2 * n, RP, MPFR_RNDD);
            BigFloat b = fmul_si(n >= 0 ? pi_hi : pi_lo, 2 * n, RP, MPFR_RNDU);
            if (!(b < sum_lo) && !(a > sum_hi)) hits.push_back(n);
        }
        if (hits.size() != 1) continue;
        if (hits[0] < 0) continue; // winding of a zero count cannot be negative
        ZeroCount zc;
        zc.count = hits[0];
        zc.disk = d;
        zc.function_id = f.id;
        zc.certified = true;
        zc.boundary_margin = pass.min_margin;
        zc.arcs = arcs.size();
        return zc;
    }
    if (saw_zero_contact)
        throw BoundaryZero("count_zeros: boundary value contains 0 on " + d.str());
    throw BoundaryZero("count_zeros: could not certify winding on " + d.str() + " for " + f.id);
}

std::pair<BigFloat, BigFloat> boundary_extremum(const Evaluable& f, const Disk& d, bool maximize,
                                                double rel_tol, const PrecPolicy& prec) {
    struct Piece {
        Rational t0, t1;
        BigFloat opt_bound; // for min: lower bound; for max: upper bound
    };
    const size_t kMaxPieces = 1u << 17;
    for (Prec p = prec.start; p <= prec.max; p *= 2) {
        std::vector<Piece> pieces;
        BigFloat best_sample = maximize ? BigFloat::zero(RP) : BigFloat::pos_inf();
        auto sample = [&](const Rational& t) {
            ComplexBox v = f.eval(circle_point(d, t, p), p);
            if (!v.is_bounded()) return;
            if (maximize) {
                BigFloat lo = v.abs_lower();
                if (lo > best_sample) best_sample = lo;
            } else {
                BigFloat hi = v.abs_upper();
                if (hi < best_sample) best_sample = hi;
            }
        };
        auto make_piece = [&](const Rational& a, const Rational& b) {
            ComplexBox img = f.eval(circle_arc(d, a, b, p), p);
            BigFloat bb = maximize ? img.abs_upper() : img.abs_lower();
            Rational tm = (a + b) / 2;
            tm.canonicalize();
            sample(tm);
            return Piece{a, b, bb};
        };
        int N = 64;
        for (int i = 0; i < N; ++i) {
            Rational t0(i, N), t1(i + 1, N);
            t0.canonicalize();
            t1.canonicalize();
            pieces.push_back(make_piece(t0, t1));
        }
        auto global_bound = [&]() {
            BigFloat g = pieces[0].opt_bound;
            for (const auto& pc : pieces)
                if (maximize ? (pc.opt_bound > g) : (pc.opt_bound < g)) g = pc.opt_bound;
            return g;
        };
        // breadth-wise: every round, split all pieces that could still hold
        // the extremum
        for (int round = 0; round < 28; ++round) {
            BigFloat global = global_bound();
            if (!global.is_finite() || !best_sample.is_finite()) break;
            BigFloat tol = mul_up(fmax(best_sample, BigFloat(1e-300, RP)),
                                  BigFloat(rel_tol, RP), RP);
            BigFloat gap = maximize ? fsub(global, best_sample, RP, MPFR_RNDU)
                                    : fsub(best_sample, global, RP, MPFR_RNDU);
            if (gap <= tol) break;
            std::vector<Piece> next;
            next.reserve(pieces.size() * 2);
            bool split_any = false;
            for (const auto& pc : pieces) {
                bool candidate = maximize ? pc.opt_bound > best_sample : pc.opt_bound < best_sample;
                if (candidate && pieces.size() + next.size() < kMaxPieces) {
                    Rational tm = (pc.t0 + pc.t1) / 2;
                    tm.canonicalize();
                    next.push_back(make_piece(pc.t0, tm));
                    next.push_back(make_piece(tm, pc.t1));
                    split_any = true;
                } else {
                    next.push_back(pc);
                }
            }
            pieces = std::move(next);
            if (!split_any) break;
        }
        BigFloat global = global_bound();
        if (!best_sample.is_finite() || !global.is_finite()) continue;
        if (maximize) return {best_sample, global};
        return {global, best_sample};
    }
    throw PrecisionExhausted("boundary extremum on " + d.str());
}

DeltaEnclosure rouche_delta(const Evaluable& g, const GPoly& P, const GaussianRational& alpha,
                            const Rational& R, const PrecPolicy& prec, double rel_tol) {
    if (P.is_zero()) throw Error("rouche_delta: P must be nonzero");
    Disk d(GaussianRational(0L), R);
    Evaluable gm = evaluable_sub_const(g, alpha);
    auto [min_lo, min_hi] = boundary_extremum(gm, d, false, rel_tol, prec);
    if (!min_lo.is_pos())
        throw BoundaryContact("rouche_delta: min |g - alpha| not certified positive on " + d.str());
    Evaluable pe = evaluable_from_gpoly(P);
    auto [max_lo, max_hi] = boundary_extremum(pe, d, true, rel_tol, prec);
    if (!max_lo.is_pos())
        throw Error("rouche_delta: max |P| lower bound vanished");
    DeltaEnclosure out;
    out.min_lo = min_lo;
    out.min_hi = min_hi;
    out.max_lo = max_lo;
    out.max_hi = max_hi;
    out.lo = div_down(min_lo, max_hi, RP);
    out.hi = div_up(min_hi, max_lo, RP);
    return out;
}

ClearanceResult boundary_clear(const Evaluable& f, const std::vector<GaussianRational>& targets,
                               const Disk& d, const PrecPolicy& prec, const BigFloat& margin_goal) {
    ClearanceResult out;
    WindingOptions opt;
    for (const auto& alpha : targets) {
        Evaluable fm = evaluable_sub_const(f, alpha);
        bool done = false;
        for (Prec p = prec.start; p <= prec.max && !done; p *= 2) {
            try {
                PassResult pass = winding_pass(fm, d, p, opt, false, &margin_goal);
                if (pass.ok) {
                    out.margins.push_back(pass.min_margin);
                    done = true;
                }
            } catch (const DivisionByEnclosedZero&) {
            }
        }
        if (!done) {
            out.clear = false;
            out.margins.push_back(BigFloat::zero());
        }
    }
    return out;
}

} // namespace orbitforge
