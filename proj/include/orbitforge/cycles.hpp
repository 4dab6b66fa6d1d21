#pragma once

#include <map>
#include <optional>
#include <vector>

#include "orbitforge/rootcount.hpp"

namespace orbitforge {

enum class CycleStatus { free_orbit, nailed, mixed };

// A certified periodic orbit: points[0] is a Krawczyk existence/uniqueness
// box for f^k(z) - z, the remaining points are image enclosures, pairwise
// disjoint (so k is the exact period), and the multiplier is the chain-rule
// product over the orbit.
struct CycleRecord {
    int period = 1;
    std::vector<ComplexBox> points;
    std::vector<std::optional<GaussianRational>> exact_points; // set when nailed
    ComplexBox multiplier;
    bool repelling = false;
    CycleStatus status = CycleStatus::free_orbit;

    bool inside(const Disk& d, Prec p) const;
};

struct CycleCensus {
    std::map<int, std::vector<CycleRecord>> by_period;
    long per_count(int k) const {
        auto it = by_period.find(k);
        return it == by_period.end() ? 0 : (long)it->second.size() * k;
    }
    long orb_count(int k) const {
        auto it = by_period.find(k);
        return it == by_period.end() ? 0 : (long)it->second.size();
    }
};

// Krawczyk certification of a zero of F near `guess`: existence and
// uniqueness in the returned box. Fp must evaluate F'.
std::optional<ComplexBox> krawczyk_zero(const Evaluable& F, const Evaluable& Fp, BigComplex guess,
                                        Prec p, int attempts = 40);

// Refine a certified zero box by repeated Krawczyk contraction until the
// radius is at most `target` (or precision/ladder limits are hit).
ComplexBox refine_zero(const Evaluable& F, const Evaluable& Fp, const ComplexBox& certified,
                       const BigFloat& target, const PrecPolicy& prec);

// Certify a k-cycle of f from a starting guess: Krawczyk on f^k(z) - z plus
// divisor exclusion for period minimality and pairwise-disjoint point boxes.
std::optional<CycleRecord> certify_cycle(const Evaluable& f, int k, BigComplex guess, Prec p,
                                         const BigFloat& target_radius);

struct FindCyclesOptions {
    int want = 1;
    int seed_grid = 8;          // grid density per axis
    int itinerary_span = 0;     // 0: derive from disk radius
    bool require_repelling = false;
    BigFloat target_radius = BigFloat(1e-12, 64);
    PrecPolicy prec;
};

// Distinct certified cycles of exact period k strictly inside the disk.
// Boundary clearance of f^k(z)-z is verified for k = 1; for k >= 2 the
// strict-interior requirement on every returned record replaces it (deep
// iterates of exp-type bases cannot be enclosed on large circles).
std::vector<CycleRecord> find_cycles(const Evaluable& f, int k, const Disk& disk,
                                     const FindCyclesOptions& opt);

// Chain-rule multiplier recomputed from the record's point boxes.
ComplexBox multiplier(const Evaluable& f, const CycleRecord& cycle, Prec p);

// Find all `expected` zeros of F in the disk from the given seeds; each zero
// is Krawczyk-certified and the boxes are pairwise disjoint, so together with
// a matching boundary count they form the complete zero set.
std::vector<ComplexBox> find_zeros(const Evaluable& F, const Evaluable& Fp, const Disk& disk,
                                   long expected, const std::vector<BigComplex>& seeds,
                                   const BigFloat& target_radius, const PrecPolicy& prec);

// --- composition identity check -----------------------------------------

// Computes phi_k for f = g + eps P through the recursion
//   phi_1 = P(z),  phi_{k+1} = phi_k * int_0^1 g'(g^k(z) + t eps phi_k) dt
//                              + P(g^k(z) + eps phi_k)
// with certified quadrature, and returns an upper bound for
// |f^k(z) - g^k(z) - eps phi_k(eps,z)|.
struct PhiCheckResult {
    BigFloat residual_upper;
    bool exact_zero = false; // residual proven exactly 0 (k = 1, or polynomial base)
    ComplexBox eps_phi;      // enclosure of eps * phi_k(eps, z)
    std::optional<GaussianRational> phi_exact; // exact phi_k when available
};
PhiCheckResult phi_check(const BaseFunction& g, const GPoly& P, const Rational& eps, int k,
                         const GaussianRational& z, double quad_tol, const PrecPolicy& prec);
// Exact path for polynomial bases (the affine test case): all arithmetic in K.
PhiCheckResult phi_check_poly(const GPoly& g, const GPoly& P, const GaussianRational& eps, int k,
                              const GaussianRational& z);

// --- fixed-point regime (desk-scale existence search) ---------------------

struct FixedPointWitness {
    ComplexBox point;
    ComplexBox multiplier;
};

struct RegimeResult {
    Rational delta1, delta2; // certified for every eps in (delta1, delta2)
    Rational eps_used;
    Rational R;
    std::vector<FixedPointWitness> fixed_points;
    std::map<int, std::vector<CycleRecord>> cycles; // t in [2, k]
};

// Fixed points of g + eps P with multiplier excluding {0,1}, for a fixed
// exact eps, inside B(0,R). Throws SearchExhausted with a diagnostic when
// the multiplier filter rejects (e.g. the enclosure meets 0 or 1).
std::vector<FixedPointWitness> certify_fixed_points_at(const BaseFunction& g, const GPoly& P,
                                                       const ComplexBox& eps, const Rational& R,
                                                       int want, const BigFloat& target_radius,
                                                       const PrecPolicy& prec);

// Search 0 < delta1 < delta2 < delta and R such that for all eps in
// (delta1, delta2): at least M fixed points with multiplier outside {0,1}
// and M repelling t-cycles in B(0,R) for t in [2,k].
RegimeResult fixed_point_regime(const BaseFunction& g, const GPoly& P, int k, int M,
                                const Rational& delta, const PrecPolicy& prec);

} // namespace orbitforge
